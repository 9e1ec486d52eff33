"""Schmidt-correlated state families, Bell/GHZ states, PPT test and state files."""
from __future__ import annotations

import math
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .qmat import TOL_PSD, DensityMatrix, eig_hermitian, parse_complex, partial_transpose

PROB_TOL = 1e-12
PSD_SLACK = 1e-12


class ParamError(ValueError):
    """Parameter set violates a family constraint; ``constraint`` names it."""

    def __init__(self, constraint: str, detail: str = ""):
        self.constraint = constraint
        super().__init__(f"constraint violated: {constraint}" + (f" ({detail})" if detail else ""))


def _check_probs(names, values):
    for name, v in zip(names, values):
        if not math.isfinite(v):
            raise ParamError(f"{name} finite", f"{name}={v!r}")
        if v < 0:
            raise ParamError(f"{name} >= 0", f"{name}={v!r}")
    total = sum(values)
    if abs(total - 1.0) > PROB_TOL:
        raise ParamError(f"{'+'.join(names)} = 1", f"sum={total!r}")


def _check_coherence(lhs_names, x, y, cname, c):
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise ParamError(f"{cname} finite")
    if abs(c) ** 2 > x * y + PSD_SLACK:
        raise ParamError(f"{lhs_names} >= |{cname}|^2", f"{x * y!r} < {abs(c) ** 2!r}")


@dataclass(frozen=True)
class _PairParams:
    a1: float
    a4: float
    a2: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "a1", float(self.a1))
        object.__setattr__(self, "a4", float(self.a4))
        object.__setattr__(self, "a2", complex(self.a2))
        _check_probs(("a1", "a4"), (self.a1, self.a4))
        _check_coherence("a1*a4", self.a1, self.a4, "a2", self.a2)


@dataclass(frozen=True)
class SC2Params(_PairParams):
    """Two-qubit family: populations on |00>, |11> and their coherence a2."""


@dataclass(frozen=True)
class SC3Params(_PairParams):
    """Three-qubit family: populations on |000>, |111> and their coherence a2."""


@dataclass(frozen=True)
class SC2DiagParams:
    b1: float
    b2: float
    b3: float
    b4: float
    c1: complex = 0j

    def __post_init__(self):
        bs = self.b
        for f, v in zip(("b1", "b2", "b3", "b4"), bs):
            object.__setattr__(self, f, float(v))
        object.__setattr__(self, "c1", complex(self.c1))
        _check_probs(("b1", "b2", "b3", "b4"), self.b)
        _check_coherence("b1*b4", self.b1, self.b4, "c1", self.c1)

    @property
    def b(self) -> tuple[float, ...]:
        return (self.b1, self.b2, self.b3, self.b4)


@dataclass(frozen=True)
class SC3DiagParams:
    b1: float
    b2: float
    b3: float
    b4: float
    b5: float
    b6: float
    b7: float
    b8: float
    c1: complex = 0j

    def __post_init__(self):
        names = tuple(f"b{i}" for i in range(1, 9))
        for f, v in zip(names, self.b):
            object.__setattr__(self, f, float(v))
        object.__setattr__(self, "c1", complex(self.c1))
        _check_probs(names, self.b)
        _check_coherence("b1*b8", self.b1, self.b8, "c1", self.c1)

    @property
    def b(self) -> tuple[float, ...]:
        return (self.b1, self.b2, self.b3, self.b4, self.b5, self.b6, self.b7, self.b8)


# Basis order of the eight-parameter family: |000>,|001>,|010>,|100>,|011>,|101>,|110>,|111>.
SC3_DIAG_BASIS = (0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111)


def build_sc2(p: SC2Params) -> DensityMatrix:
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0], m[3, 3] = p.a1, p.a4
    m[0, 3], m[3, 0] = p.a2, p.a2.conjugate()
    return DensityMatrix(m)


def build_sc2_diag(p: SC2DiagParams) -> DensityMatrix:
    m = np.diag(np.array(p.b, dtype=complex))
    m[0, 3], m[3, 0] = p.c1, p.c1.conjugate()
    return DensityMatrix(m)


def build_sc3(p: SC3Params) -> DensityMatrix:
    m = np.zeros((8, 8), dtype=complex)
    m[0, 0], m[7, 7] = p.a1, p.a4
    m[0, 7], m[7, 0] = p.a2, p.a2.conjugate()
    return DensityMatrix(m)


def build_sc3_diag(p: SC3DiagParams) -> DensityMatrix:
    m = np.zeros((8, 8), dtype=complex)
    for idx, b in zip(SC3_DIAG_BASIS, p.b):
        m[idx, idx] = b
    m[0, 7], m[7, 0] = p.c1, p.c1.conjugate()
    return DensityMatrix(m)


def bell_state() -> DensityMatrix:
    return build_sc2(SC2Params(0.5, 0.5, 0.5))


def ghz_state() -> DensityMatrix:
    return build_sc3(SC3Params(0.5, 0.5, 0.5))


def rho3_params(gamma: float) -> SC2DiagParams:
    """Bell state after the transverse channel on both qubits."""
    g2 = gamma * gamma
    w2 = 1.0 - g2
    b1, b23, b4 = g2 * g2 / 2, g2 * w2 / 2, (1 + w2 * w2) / 2
    # absorb rounding so the probabilities sum to one exactly
    b4 = 1.0 - b1 - 2 * b23
    return SC2DiagParams(b1, b23, b23, b4, g2 / 2)


def rho6_params(gamma: float) -> SC3DiagParams:
    """GHZ state after the transverse channel on all three qubits."""
    g2 = gamma * gamma
    w2 = 1.0 - g2
    b1 = g2**3 / 2
    one_flip = g2 * g2 * w2 / 2
    two_flip = g2 * w2 * w2 / 2
    b8 = 1.0 - b1 - 3 * one_flip - 3 * two_flip
    return SC3DiagParams(b1, one_flip, one_flip, one_flip, two_flip, two_flip, two_flip, b8, gamma**3 / 2)


def ppt_separable(rho: DensityMatrix, cut: int = 0) -> bool:
    """True iff the partial transpose on qubit ``cut`` has no negative eigenvalue."""
    w, _ = eig_hermitian(partial_transpose(rho, cut))
    return bool(w[0] >= TOL_PSD)


# ---------- state files ----------

STATE_KINDS = {
    "sc2": (SC2Params, build_sc2),
    "sc2diag": (SC2DiagParams, build_sc2_diag),
    "sc3": (SC3Params, build_sc3),
    "sc3diag": (SC3DiagParams, build_sc3_diag),
    "bell": (None, None),
    "ghz": (None, None),
}
COMPLEX_KEYS = {"a2", "c1"}


class StateFileError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class StateSpec:
    """A parsed state description: family kind plus its parameter object."""

    kind: str
    params: object | None

    @property
    def n_qubits(self) -> int:
        return 3 if self.kind in ("sc3", "sc3diag", "ghz") else 2

    def build(self) -> DensityMatrix:
        if self.kind == "bell":
            return bell_state()
        if self.kind == "ghz":
            return ghz_state()
        return STATE_KINDS[self.kind][1](self.params)


def make_spec(kind: str, values: dict) -> StateSpec:
    if kind not in STATE_KINDS:
        raise StateFileError(f"unknown kind {kind!r}")
    cls = STATE_KINDS[kind][0]
    if cls is None:
        if values:
            raise StateFileError(f"kind {kind} takes no parameters, got {sorted(values)}")
        return StateSpec(kind, None)
    names = [f.name for f in fields(cls)]
    unknown = set(values) - set(names)
    if unknown:
        raise StateFileError(f"unknown key(s) for kind {kind}: {', '.join(sorted(unknown))}")
    missing = [n for n in names if n not in values and n not in COMPLEX_KEYS]
    if missing:
        raise StateFileError(f"missing key(s) for kind {kind}: {', '.join(missing)}")
    return StateSpec(kind, cls(**values))


def parse_state_text(text: str) -> StateSpec:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    kind = None
    values: dict = {}
    lines: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise StateFileError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, val = (s.strip() for s in line.split("=", 1))
        if key in lines or (key == "kind" and kind is not None):
            raise StateFileError(f"duplicate key {key!r}", lineno)
        if key == "kind":
            kind = val
            if kind not in STATE_KINDS:
                raise StateFileError(f"unknown kind {val!r}", lineno)
            continue
        try:
            values[key] = parse_complex(val) if key in COMPLEX_KEYS else float(val)
        except ValueError as exc:
            raise StateFileError(f"bad value for {key}: {exc}", lineno) from None
        lines[key] = lineno
    if kind is None:
        raise StateFileError("missing 'kind' key")
    cls = STATE_KINDS[kind][0]
    allowed = {f.name for f in fields(cls)} if cls else set()
    for key, lineno in lines.items():
        if key not in allowed:
            raise StateFileError(f"unknown key {key!r} for kind {kind}", lineno)
    return make_spec(kind, values)


def load_state_file(path) -> StateSpec:
    return parse_state_text(Path(path).read_text())

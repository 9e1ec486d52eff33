"""Dense complex linear algebra for small n-qubit density matrices."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable

import numpy as np

TOL_HERM = 1e-12
TOL_TRACE = 1e-12
TOL_PSD = -1e-10
LOG_CUTOFF = 1e-12
MAX_QUBITS = 12

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


class StateError(ValueError):
    """Raised when a matrix fails density-matrix validation."""


# ---------- complex scalars ----------

_NUM = r"[0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?|[0-9]+\.(?:[eE][+-]?[0-9]+)?|inf|nan"
_COMPLEX_RE = re.compile(
    rf"^\s*(?P<re>[+-]?(?:{_NUM}))?\s*(?:(?P<sign>[+-])\s*(?P<im>{_NUM})?\s*i)?\s*$"
)
_IMAG_ONLY_RE = re.compile(rf"^\s*(?P<im>[+-]?(?:{_NUM})?)\s*i\s*$")


def parse_complex(text: str) -> complex:
    """Parse ``re+imi`` / ``re-imi`` / ``re`` / ``imi`` into a finite complex."""
    s = text.strip()
    m = _IMAG_ONLY_RE.match(s)
    if m and s:
        im = m.group("im")
        im_val = float(im + "1") if im in ("", "+", "-") else float(im)
        value = complex(0.0, im_val)
    else:
        m = _COMPLEX_RE.match(s)
        if not s or m is None or (m.group("re") is None and m.group("sign") is None):
            raise ValueError(f"cannot parse complex value {text!r}")
        re_val = float(m.group("re")) if m.group("re") else 0.0
        im_val = 0.0
        if m.group("sign"):
            im_val = float(m.group("im")) if m.group("im") else 1.0
            if m.group("sign") == "-":
                im_val = -im_val
        value = complex(re_val, im_val)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValueError(f"complex value {text!r} is not finite")
    return value


def format_complex(z: complex) -> str:
    """Exact textual form; ``parse_complex(format_complex(z)) == z``."""
    z = complex(z)
    im = z.imag
    sign = "-" if (im < 0 or (im == 0 and math.copysign(1.0, im) < 0)) else "+"
    return f"{z.real!r}{sign}{abs(im)!r}i"


# ---------- density matrices ----------

def _n_qubits_for(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise StateError(f"dimension {dim} is not a power of two")
    if n > MAX_QUBITS:
        raise StateError(f"{n} qubits exceeds supported maximum {MAX_QUBITS}")
    return n


def hermiticity_residual(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated n-qubit state: Hermitian, unit trace, positive semidefinite."""

    mat: np.ndarray

    def __post_init__(self):
        m = np.array(self.mat, dtype=complex, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise StateError(f"density matrix must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise StateError("density matrix has non-finite entries")
        _n_qubits_for(m.shape[0])
        herm = hermiticity_residual(m)
        if herm > TOL_HERM:
            raise StateError(f"not Hermitian (max |M - M^dag| = {herm:.3e})")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TOL_TRACE:
            raise StateError(f"trace is {tr!r}, expected 1")
        lam_min = np.linalg.eigvalsh(m)[0]
        if lam_min < TOL_PSD:
            raise StateError(f"not positive semidefinite (min eigenvalue {lam_min:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def n_qubits(self) -> int:
        return self.mat.shape[0].bit_length() - 1

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @classmethod
    def from_ket(cls, psi) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex).reshape(-1)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def maximally_mixed(cls, n_qubits: int) -> "DensityMatrix":
        d = 1 << n_qubits
        return cls(np.eye(d, dtype=complex) / d)


def as_array(m) -> np.ndarray:
    if isinstance(m, DensityMatrix):
        return m.mat
    return np.asarray(m, dtype=complex)


# ---------- kernel operations ----------

def kron(a, b) -> np.ndarray:
    return np.kron(as_array(a), as_array(b))


def kron_all(mats: Iterable) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, as_array(m))
    return out


def _check_index(i: int, n: int) -> None:
    if not 0 <= i < n:
        raise IndexError(f"qubit index {i} out of range for {n} qubits")


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out every qubit not in ``keep``; qubit 0 is the most significant."""
    n = rho.n_qubits
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep must name at least one qubit")
    for i in keep:
        _check_index(i, n)
    drop = [i for i in range(n) if i not in keep]
    t = rho.mat.reshape((2,) * (2 * n))
    # axes 0..n-1 are row qubits, n..2n-1 column qubits
    for k, q in enumerate(sorted(drop, reverse=True)):
        width = n - k
        t = np.trace(t, axis1=q, axis2=q + width)
    d = 1 << len(keep)
    return DensityMatrix(t.reshape(d, d))


def partial_transpose(rho, subsys: int) -> np.ndarray:
    m = as_array(rho)
    n = _n_qubits_for(m.shape[0])
    _check_index(subsys, n)
    t = m.reshape((2,) * (2 * n))
    t = np.swapaxes(t, subsys, subsys + n)
    return t.reshape(m.shape).copy()


def eig_hermitian(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues ascending and the matching eigenvector columns."""
    a = as_array(m)
    herm = hermiticity_residual(a)
    if herm > TOL_HERM:
        raise ValueError(f"matrix is not Hermitian (residual {herm:.3e})")
    # exact symmetrisation removes rounding-level anti-Hermitian parts
    w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    return w, v


def log_on_support(m, cutoff: float = LOG_CUTOFF) -> np.ndarray:
    """Base-2 matrix logarithm; eigenvalues at or below ``cutoff`` map to 0."""
    w, v = eig_hermitian(m)
    if w[0] < TOL_PSD:
        raise ValueError(f"matrix has negative eigenvalue {w[0]:.3e}")
    logw = np.zeros_like(w)
    on = w > cutoff
    logw[on] = np.log2(w[on])
    return (v * logw) @ v.conj().T


def support_projector(m, cutoff: float = LOG_CUTOFF) -> np.ndarray:
    w, v = eig_hermitian(m)
    vs = v[:, w > cutoff]
    return vs @ vs.conj().T


def random_density_matrix(n_qubits: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Ginibre-ensemble mixed state; used by property tests and verify suites."""
    d = 1 << n_qubits
    k = d if rank is None else rank
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T)
    return DensityMatrix(m / np.trace(m).real)

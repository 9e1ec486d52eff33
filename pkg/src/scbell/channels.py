"""Kraus channels, the transverse noise channel and time sweeps."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bell import SQRT2
from .entanglement import concurrence_wootters
from .optimize import MaximizerConfig, maximize_chsh, maximize_svetlichny
from .qmat import DensityMatrix, kron_all

COMPLETENESS_TOL = 1e-12
BISECT_TOL = 1e-8
SWEEP_RESTARTS = 8


@dataclass(frozen=True, eq=False)
class KrausChannel:
    operators: tuple

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=complex) for k in self.operators)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        for k in ops:
            if k.shape != (2, 2):
                raise ValueError(f"Kraus operators must be 2x2, got {k.shape}")
            k.setflags(write=False)
        total = sum(k.conj().T @ k for k in ops)
        err = float(np.max(np.abs(total - np.eye(2))))
        if err > COMPLETENESS_TOL:
            raise ValueError(f"Kraus operators are not complete (residual {err:.3e})")
        object.__setattr__(self, "operators", ops)


@dataclass(frozen=True)
class NoiseParams:
    gamma_rate: float
    t: float

    def __post_init__(self):
        if not self.gamma_rate > 0:
            raise ValueError("gamma_rate must be positive")
        if not self.t >= 0:
            raise ValueError("t must be non-negative")

    @property
    def gamma(self) -> float:
        return math.exp(-self.gamma_rate * self.t / 2.0)

    @property
    def omega(self) -> float:
        return math.sqrt(1.0 - self.gamma**2)


def transverse_kraus(gamma: float) -> KrausChannel:
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must lie in [0, 1]")
    omega = math.sqrt(1.0 - gamma * gamma)
    return KrausChannel(([[gamma, 0.0], [0.0, 1.0]], [[0.0, 0.0], [omega, 0.0]]))


def transverse_channel(p: NoiseParams) -> KrausChannel:
    return transverse_kraus(p.gamma)


def apply_product_channel(rho: DensityMatrix, ch: KrausChannel) -> DensityMatrix:
    """One copy of ``ch`` on every qubit: sum over all Kraus index tuples."""
    out = np.zeros_like(rho.mat)
    for ks in itertools.product(ch.operators, repeat=rho.n_qubits):
        k = kron_all(ks)
        out += k @ rho.mat @ k.conj().T
    return DensityMatrix(0.5 * (out + out.conj().T))


def fmax_rho3_closed(gamma: float) -> float:
    g2 = gamma * gamma
    return 2.0 * math.sqrt((2 * g2 * g2 - 2 * g2 + 1) ** 2 + g2 * g2)


def fmax_rho3_exact(gamma: float) -> float:
    """True CHSH maximum of the noisy Bell state (correlation singular values g^2, g^2, |2g^4-2g^2+1|)."""
    g2 = gamma * gamma
    zz2 = (2 * g2 * g2 - 2 * g2 + 1) ** 2
    return 2.0 * math.sqrt(g2 * g2 + max(zz2, g2 * g2))


def smax_rho6_branches(gamma: float) -> tuple[float, float]:
    """(z-aligned branch, in-plane branch) of the noisy-GHZ Svetlichny maximum."""
    g2 = gamma * gamma
    w2 = 1.0 - g2
    z_branch = 2.0 * (1 - g2**3 - 3 * g2 * w2 * w2 + 3 * g2 * g2 * w2 + w2**3)
    return z_branch, 4.0 * SQRT2 * gamma**3


def smax_rho6_closed(gamma: float) -> float:
    z_branch, plane = smax_rho6_branches(gamma)
    return z_branch if gamma <= 1.0 / SQRT2 else plane


def gamma_of(gamma_t: float) -> float:
    return math.exp(-gamma_t / 2.0)


def concurrence_rho3_closed(gamma: float) -> float:
    return gamma**4


@dataclass(frozen=True)
class SweepRecord:
    gamma_t: float
    gamma: float
    closed_value: float
    numeric_value: float
    measure_value: float | None = None


def run_sweep(
    initial: DensityMatrix,
    gamma_rate: float,
    t_max: float,
    steps: int,
    cfg: MaximizerConfig | None = None,
) -> list[SweepRecord]:
    """Evolve Bell (2 qubits) or GHZ (3 qubits) under transverse noise on a uniform t grid."""
    if steps < 2:
        raise ValueError("steps must be >= 2")
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    if initial.n_qubits == 2:
        closed, numeric = fmax_rho3_closed, maximize_chsh
    elif initial.n_qubits == 3:
        closed, numeric = smax_rho6_closed, maximize_svetlichny
    else:
        raise ValueError(f"sweeps support 2- or 3-qubit initial states, got {initial.n_qubits}")
    cfg = cfg or MaximizerConfig(restarts=SWEEP_RESTARTS)
    records = []
    for i in range(steps):
        gamma_t = gamma_rate * (t_max * i / (steps - 1))
        gamma = gamma_of(gamma_t)
        rho = apply_product_channel(initial, transverse_kraus(gamma))
        value, _ = numeric(rho, cfg)
        measure = concurrence_wootters(rho) if initial.n_qubits == 2 else None
        records.append(SweepRecord(gamma_t, gamma, closed(gamma), value, measure))
    return records


def find_threshold(
    curve: Callable[[float], float],
    level: float,
    bracket: tuple[float, float],
    tol: float = BISECT_TOL,
) -> float:
    """Bisection root of curve(x) = level inside ``bracket``."""
    lo, hi = float(bracket[0]), float(bracket[1])
    f_lo, f_hi = curve(lo) - level, curve(hi) - level
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise ValueError(f"no sign change of curve - {level} on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = curve(mid) - level
        if f_mid == 0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)

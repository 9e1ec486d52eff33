"""Entropies, concurrences, relative entropy of entanglement and dense coding."""
from __future__ import annotations

import math

import numpy as np

from .qmat import (
    LOG_CUTOFF,
    PAULI_Y,
    DensityMatrix,
    eig_hermitian,
    log_on_support,
    partial_trace,
    support_projector,
)
from .states import SC2Params, SC3Params, build_sc3

SUPPORT_WEIGHT_TOL = 1e-10
# eigenvalues of a unit-trace state below this are rounding noise
SQRT_CUTOFF = 1e-14
# rounding slack before a negative eigenvalue makes x log2 x undefined
PLOGP_SLACK = 1e-12


def _xlog2x(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    on = p > LOG_CUTOFF
    out[on] = p[on] * np.log2(p[on])
    return out


def shannon_entropy(probs) -> float:
    return float(-_xlog2x(probs).sum())


def von_neumann_entropy(rho: DensityMatrix) -> float:
    w, _ = eig_hermitian(rho.mat)
    s = shannon_entropy(np.clip(w, 0.0, None))
    return min(max(s, 0.0), float(rho.n_qubits))


def _require_two_qubits(rho: DensityMatrix) -> None:
    if rho.n_qubits != 2:
        raise ValueError(f"expected a 2-qubit state, got {rho.n_qubits} qubits")


def concurrence_wootters(rho: DensityMatrix) -> float:
    """Two-qubit concurrence from the spin-flipped state.

    The square roots of the eigenvalues of rho * rho~ are the singular values
    of A = sqrt(rho) Y conj(sqrt(rho)), Y = sigma_y x sigma_y.  They are read
    off as the nonnegative eigenvalues of the Hermitian dilation
    [[0, A], [A^dag, 0]], so no square root of a rounding-level eigenvalue
    is ever taken on the output side.
    """
    _require_two_qubits(rho)
    yy = np.kron(PAULI_Y, PAULI_Y).real
    w, v = eig_hermitian(rho.mat)
    w = np.where(w > SQRT_CUTOFF, w, 0.0)
    root = (v * np.sqrt(w)) @ v.conj().T
    a = root @ yy @ root.conj()
    dil = np.zeros((8, 8), dtype=complex)
    dil[:4, 4:] = a
    dil[4:, :4] = a.conj().T
    lam, _ = eig_hermitian(dil)
    lam = np.clip(lam[::-1][:4], 0.0, None)
    return float(min(max(lam[0] - lam[1] - lam[2] - lam[3], 0.0), 1.0))


def concurrence_sc2(p: SC2Params) -> float:
    return 2.0 * abs(p.a2)


def gen_concurrence_sc3(p: SC3Params) -> float:
    return math.sqrt(6.0) * abs(p.a2)


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """S(rho || sigma) in bits; ``math.inf`` when rho leaves the support of sigma."""
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    outside = 1.0 - float(np.trace(rho.mat @ support_projector(sigma.mat)).real)
    if outside > SUPPORT_WEIGHT_TOL:
        return math.inf
    val = float(np.trace(rho.mat @ (log_on_support(rho.mat) - log_on_support(sigma.mat))).real)
    return max(val, 0.0)


def ree_reference_state(p: SC3Params) -> DensityMatrix:
    """The separable state a1|000><000| + a4|111><111| closest to the SC state."""
    return build_sc3(SC3Params(p.a1, p.a4, 0.0))


def ree_sc3_direct(p: SC3Params) -> float:
    return relative_entropy(build_sc3(p), ree_reference_state(p))


def _plogp(x: float) -> float:
    if not math.isfinite(x) or x < -PLOGP_SLACK:
        return math.nan
    if x <= 0.0:
        return 0.0
    return x * math.log2(x)


def _log2(x: float) -> float:
    return math.log2(x) if x > 0 else -math.inf


def f_pair(x1, x2, x3, x4) -> float:
    """f = f+ log2 f+ + f- log2 f-, f+- = [(x1+x2) +- sqrt((x1-x2)^2 + 4 x3 x4)] / 2."""
    disc = complex((x1 - x2) ** 2 + 4 * x3 * x4)
    if abs(disc.imag) > 1e-12 * max(1.0, abs(disc)):
        return math.nan
    disc = disc.real
    if not math.isfinite(disc) or disc < 0:
        return math.nan
    r = math.sqrt(disc)
    s = float(np.real(x1 + x2))
    return _plogp((s + r) / 2) + _plogp((s - r) / 2)


def g_pair(x1, x2, x3) -> float:
    """Same as ``f_pair`` with 4 x3 x4 replaced by x3 / 32."""
    disc = (x1 - x2) ** 2 + x3 / 32.0
    if not math.isfinite(disc) or disc < 0:
        return math.nan
    r = math.sqrt(disc)
    return _plogp((x1 + x2 + r) / 2) + _plogp((x1 + x2 - r) / 2)


def ree_sc3_closed(p: SC3Params, corrected: bool = False, via_smax: bool = False) -> float:
    """Closed form for the three-qubit relative entropy of entanglement.

    With ``corrected=False`` the subtracted term is evaluated literally as a
    second f (or g) of the x log2 x arguments; it is undefined (nan) whenever
    those arguments give a negative eigenvalue, including every state with
    a2 = 0.  ``corrected=True`` subtracts a1 log2 a1 + a4 log2 a4, which is
    -Tr(rho log2 sigma) for the diagonal reference state.
    """
    a1, a4, a2 = p.a1, p.a4, p.a2
    smax2 = (8.0 * math.sqrt(2.0) * abs(a2)) ** 2
    if via_smax:
        first = g_pair(a1, a4, smax2)
    else:
        first = f_pair(a1, a4, a2, a2.conjugate())
    if corrected:
        return max(first - _plogp(a1) - _plogp(a4), 0.0)
    l1, l4 = _log2(a1), _log2(a4)
    x1, x2 = _plogp(a1), _plogp(a4)
    with np.errstate(all="ignore"):
        if via_smax:
            second = g_pair(x1, x2, smax2 * l1 * l4)
        else:
            second = f_pair(x1, x2, a2 * l4, a2.conjugate() * l1)
    return first - second


def dense_coding_capacity(rho: DensityMatrix) -> float:
    """log2 d_A + S(rho_A) - S(rho) for a two-qubit state, A = qubit 0."""
    _require_two_qubits(rho)
    return 1.0 + von_neumann_entropy(partial_trace(rho, [0])) - von_neumann_entropy(rho)


def fmax_from_concurrence(c: float) -> float:
    return 2.0 * math.sqrt(1.0 + c * c)

"""Seeded multistart maximizer for Bell expectations over measurement angles.

A coarse grid supplies starting points (the best half plus a seeded random
half); every start is then refined by a batched Nelder-Mead simplex search.  Angles are free during refinement and
wrapped into (theta, phi) ranges afterwards.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bell import (
    CHSH_SIGNS,
    CHSH_TSIRELSON,
    SVETLICHNY_QUANTUM,
    SVETLICHNY_SIGNS,
    CHSHSettings,
    SvetlichnySettings,
    correlation_tensor,
    settings_from_angles,
)
from .qmat import DensityMatrix

COARSE_PER_RESTART = 64
STREAM_COARSE = 0xC0A5E
STREAM_PICK = 0x91C


@dataclass(frozen=True)
class MaximizerConfig:
    coarse_grid_points_per_angle: int = 8
    restarts: int = 32
    refine_iterations: int = 2000
    seed: int = 0
    tolerance: float = 1e-10

    def __post_init__(self):
        for name in ("coarse_grid_points_per_angle", "restarts", "refine_iterations"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


def stream(seed: int, index: int) -> np.random.Generator:
    """Counter-based Philox stream keyed by (seed, index)."""
    return np.random.Generator(np.random.Philox(key=[int(seed) % 2**64, int(index) % 2**64]))


def _unit_vectors(x: np.ndarray) -> np.ndarray:
    """(B, 2k) angles -> (B, k, 3) Bloch vectors."""
    th, ph = x[:, 0::2], x[:, 1::2]
    st = np.sin(th)
    return np.stack((st * np.cos(ph), st * np.sin(ph), np.cos(th)), axis=-1)


def chsh_objective(tensor: np.ndarray):
    def f(x: np.ndarray) -> np.ndarray:
        v = _unit_vectors(x)
        e = (v[:, 0:2] @ tensor) @ v[:, 2:4].transpose(0, 2, 1)
        return (e * CHSH_SIGNS).sum(axis=(1, 2))

    return f


def svetlichny_objective(tensor: np.ndarray):
    flat = tensor.reshape(3, 9)

    def f(x: np.ndarray) -> np.ndarray:
        v = _unit_vectors(x)
        # contract the first index, then the remaining 3x3 block per a|a'
        ta = (v[:, 0:2] @ flat).reshape(-1, 2, 3, 3)
        tb = v[:, None, 2:4] @ ta
        e = tb @ v[:, None, 4:6].transpose(0, 1, 3, 2)
        return (e * SVETLICHNY_SIGNS).sum(axis=(1, 2, 3))

    return f


def coarse_candidates(n_dirs: int, cfg: MaximizerConfig) -> np.ndarray:
    """Random sample of the coarse (theta, phi) lattice; one row per candidate."""
    g = cfg.coarse_grid_points_per_angle
    thetas = (np.arange(g) + 0.5) * math.pi / g
    phis = np.arange(g) * 2.0 * math.pi / g
    n = max(cfg.restarts * COARSE_PER_RESTART, cfg.restarts)
    rng = stream(cfg.seed, STREAM_COARSE)
    idx = rng.integers(0, g, size=(n, 2 * n_dirs))
    x = np.empty(idx.shape)
    x[:, 0::2] = thetas[idx[:, 0::2]]
    x[:, 1::2] = phis[idx[:, 1::2]]
    return x


def nelder_mead_batch(f, x0: np.ndarray, steps: np.ndarray, iterations: int, tol: float):
    """Minimize ``f`` from every row of ``x0`` at once.

    ``f`` maps (B, n) -> (B,).  Uses the dimension-adapted coefficients of
    Gao and Han.  Returns (best points, best values).
    """
    r, n = x0.shape
    alpha, gamma = 1.0, 1.0 + 2.0 / n
    rho, sigma = 0.75 - 1.0 / (2.0 * n), 1.0 - 1.0 / n

    simplex = np.repeat(x0[:, None, :], n + 1, axis=1)
    simplex[:, 1:, :] += steps[:, :, None] * np.eye(n)[None, :, :]
    fs = f(simplex.reshape(-1, n)).reshape(r, n + 1)
    active = np.ones(r, dtype=bool)

    for _ in range(iterations):
        order = np.argsort(fs, axis=1, kind="stable")
        simplex = np.take_along_axis(simplex, order[:, :, None], axis=1)
        fs = np.take_along_axis(fs, order, axis=1)
        spread = fs[:, -1] - fs[:, 0]
        active &= spread > tol
        if not active.any():
            break
        ia = np.flatnonzero(active)
        s, fv = simplex[ia], fs[ia]
        best, worst = s[:, 0], s[:, -1]
        f_best, f_second, f_worst = fv[:, 0], fv[:, -2], fv[:, -1]
        centroid = s[:, :-1].mean(axis=1)

        xr = centroid + alpha * (centroid - worst)
        fr = f(xr)
        xe = centroid + gamma * (xr - centroid)
        xoc = centroid + rho * (xr - centroid)
        xic = centroid - rho * (centroid - worst)

        expand = fr < f_best
        reflect = ~expand & (fr < f_second)
        outside = ~expand & ~reflect & (fr < f_worst)
        inside = ~expand & ~reflect & ~outside

        new_x = xr.copy()
        new_f = fr.copy()
        if expand.any():
            fe = f(xe[expand])
            take = fe < fr[expand]
            sel = np.flatnonzero(expand)[take]
            new_x[sel], new_f[sel] = xe[sel], fe[take]
        shrink = np.zeros(len(ia), dtype=bool)
        if outside.any():
            fo = f(xoc[outside])
            ok = fo <= fr[outside]
            sel = np.flatnonzero(outside)
            new_x[sel[ok]], new_f[sel[ok]] = xoc[sel[ok]], fo[ok]
            shrink[sel[~ok]] = True
        if inside.any():
            fi = f(xic[inside])
            ok = fi < f_worst[inside]
            sel = np.flatnonzero(inside)
            new_x[sel[ok]], new_f[sel[ok]] = xic[sel[ok]], fi[ok]
            shrink[sel[~ok]] = True

        keep = ~shrink
        s[keep, -1] = new_x[keep]
        fv[keep, -1] = new_f[keep]
        if shrink.any():
            sk = s[shrink]
            sk[:, 1:] = sk[:, :1] + sigma * (sk[:, 1:] - sk[:, :1])
            fv_sh = f(sk[:, 1:].reshape(-1, n)).reshape(-1, n)
            s[shrink] = sk
            fv[shrink, 1:] = fv_sh
        simplex[ia], fs[ia] = s, fv

    i = np.argmin(fs, axis=1)
    return simplex[np.arange(r), i], fs[np.arange(r), i]


def maximize(objective, n_dirs: int, cfg: MaximizerConfig) -> tuple[float, np.ndarray]:
    """Multistart maximization of a batched objective over ``n_dirs`` directions."""
    cand = coarse_candidates(n_dirs, cfg)
    vals = objective(cand)
    # half the starts are the best coarse points, the rest are drawn from the
    # remaining candidates so that one dominant basin cannot claim every start
    order = np.argsort(-vals, kind="stable")
    n_top = min(len(order), (cfg.restarts + 1) // 2)
    rest = order[n_top:]
    n_rand = min(len(rest), cfg.restarts - n_top)
    picks = stream(cfg.seed, STREAM_PICK).choice(len(rest), size=n_rand, replace=False)
    x0 = cand[np.concatenate((order[:n_top], rest[np.sort(picks)]))]
    n = x0.shape[1]
    base = 0.5 * math.pi / cfg.coarse_grid_points_per_angle
    steps = np.empty((len(x0), n))
    for k in range(len(x0)):
        steps[k] = base * (1.0 + 0.25 * stream(cfg.seed, k).random(n))

    neg = lambda x: -objective(x)  # noqa: E731
    # a second pass from the best vertex rebuilds a collapsed simplex
    first = max(1, (2 * cfg.refine_iterations) // 3)
    x1, f1 = nelder_mead_batch(neg, x0, steps, first, cfg.tolerance)
    x2, f2 = nelder_mead_batch(neg, x1, steps * 0.05, cfg.refine_iterations - first, cfg.tolerance)
    better = f2 <= f1
    xs = np.where(better[:, None], x2, x1)
    fs = np.where(better, f2, f1)
    k = int(np.argmin(fs))
    return float(-fs[k]), xs[k]


def maximize_chsh(rho: DensityMatrix, cfg: MaximizerConfig | None = None) -> tuple[float, CHSHSettings]:
    if rho.n_qubits != 2:
        raise ValueError(f"expected a 2-qubit state, got {rho.n_qubits} qubits")
    cfg = cfg or MaximizerConfig()
    value, x = maximize(chsh_objective(correlation_tensor(rho)), 4, cfg)
    return min(value, CHSH_TSIRELSON), settings_from_angles(x)


def maximize_svetlichny(
    rho: DensityMatrix, cfg: MaximizerConfig | None = None
) -> tuple[float, SvetlichnySettings]:
    if rho.n_qubits != 3:
        raise ValueError(f"expected a 3-qubit state, got {rho.n_qubits} qubits")
    cfg = cfg or MaximizerConfig()
    value, x = maximize(svetlichny_objective(correlation_tensor(rho)), 6, cfg)
    return min(value, SVETLICHNY_QUANTUM), settings_from_angles(x)

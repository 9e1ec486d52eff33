"""Seeded property suites behind ``scbell verify``.

Each suite returns a list of :class:`Check` rows: how many of the sampled
cases satisfied one property at its fixed tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bell, channels, entanglement, qmat, states
from .optimize import MaximizerConfig, maximize_chsh, maximize_svetlichny, stream

SUITES = ("chsh", "svetlichny", "measures", "channels")

STREAM_SAMPLES = 0x5A3
STREAM_KERNEL = 0x4E7


@dataclass
class Check:
    name: str
    passed: int = 0
    total: int = 0
    worst: float = 0.0
    notes: list = field(default_factory=list)

    def record(self, ok: bool, deviation: float = 0.0, note: str | None = None) -> None:
        self.total += 1
        self.passed += bool(ok)
        if math.isfinite(deviation):
            self.worst = max(self.worst, deviation)
        else:
            self.worst = math.inf
        if not ok and note and len(self.notes) < 5:
            self.notes.append(note)

    @property
    def ok(self) -> bool:
        return self.total > 0 and self.passed == self.total

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        return f"{verdict} {self.name}: {self.passed}/{self.total} (worst deviation {self.worst:.3e})"


# ---------- samplers ----------

def random_sc2_params(rng: np.random.Generator, cls=states.SC2Params):
    a1 = float(rng.random())
    a4 = 1.0 - a1
    r = math.sqrt(a1 * a4) * math.sqrt(float(rng.random()))
    return cls(a1, a4, r * np.exp(1j * 2 * math.pi * float(rng.random())))


def random_sc3_params(rng: np.random.Generator):
    return random_sc2_params(rng, states.SC3Params)


def _random_probs(rng: np.random.Generator, k: int) -> list[float]:
    b = rng.dirichlet(np.ones(k))
    b[-1] = 1.0 - b[:-1].sum()
    if b[-1] < 0:
        b[-1] = 0.0
        b[0] = 1.0 - b[1:].sum()
    return [float(x) for x in b]


def random_sc2_diag_params(rng: np.random.Generator) -> states.SC2DiagParams:
    b = _random_probs(rng, 4)
    r = math.sqrt(b[0] * b[3]) * math.sqrt(float(rng.random()))
    return states.SC2DiagParams(*b, r * np.exp(1j * 2 * math.pi * float(rng.random())))


def random_sc3_diag_params(rng: np.random.Generator) -> states.SC3DiagParams:
    b = _random_probs(rng, 8)
    r = math.sqrt(b[0] * b[7]) * math.sqrt(float(rng.random()))
    return states.SC3DiagParams(*b, r * np.exp(1j * 2 * math.pi * float(rng.random())))


def sample_cfg(seed: int, i: int, **kw) -> MaximizerConfig:
    return MaximizerConfig(seed=(int(seed) + i) % 2**64, **kw)


def settings_grid(n: int = 20):
    """n x n grid over (a1, |a2|/sqrt(a1 a4)) with several phases, including Im = 0."""
    phases = (0.0, math.pi / 2, math.pi, 3 * math.pi / 4, -math.pi / 3)
    out = []
    for i, a1 in enumerate(np.linspace(0.0, 1.0, n)):
        for j, frac in enumerate(np.linspace(0.0, 1.0, n)):
            a1f = float(a1)
            mag = float(frac) * math.sqrt(a1f * (1.0 - a1f))
            out.append((a1f, 1.0 - a1f, mag * np.exp(1j * phases[(i + j) % len(phases)])))
    return out


# ---------- suites ----------

def suite_chsh(samples: int, seed: int) -> list[Check]:
    rng = stream(seed, STREAM_SAMPLES)
    numeric = Check("CHSH closed form vs multistart maximum (1e-5)")
    horo = Check("CHSH closed form vs correlation-matrix maximum (1e-10)")
    phase = Check("CHSH closed form depends on |a2| only (1e-12)")
    ortho = Check("d . d' = 0 for optimizer outputs (1e-9)")
    classical = Check("separable states stay within 2 + 1e-6")
    for i in range(samples):
        p = random_sc2_params(rng)
        rho = states.build_sc2(p)
        closed = bell.fmax_sc2(p)
        value, s = maximize_chsh(rho, sample_cfg(seed, i))
        numeric.record(abs(value - closed) <= 1e-5, abs(value - closed), f"{p}: {value} vs {closed}")
        h = bell.fmax_horodecki(rho)
        horo.record(abs(h - closed) <= 1e-10, abs(h - closed))
        chi = 2 * math.pi * float(rng.random())
        rotated = states.SC2Params(p.a1, p.a4, p.a2 * np.exp(1j * chi))
        d = abs(bell.fmax_sc2(rotated) - closed)
        phase.record(d <= 1e-12, d)
        pair = bell.bisector_pair(s.b, s.b_prime)
        if pair is not None:
            dot = abs(float(pair[0] @ pair[1]))
            ortho.record(dot <= 1e-9, dot)
    n_sep = max(1, samples // 10)
    for i in range(n_sep):
        a1 = float(rng.random())
        value, _ = maximize_chsh(states.build_sc2(states.SC2Params(a1, 1 - a1, 0)), sample_cfg(seed, 10_000 + i))
        classical.record(value <= 2 + 1e-6, max(value - 2, 0.0))
    return [numeric, horo, phase, ortho, classical, lemma_cos_sin(samples, seed), optimal_chsh_grid()]


def lemma_cos_sin(samples: int, seed: int) -> Check:
    """x cos t + y sin t <= sqrt(x^2 + y^2), equality at t = atan2(y, x)."""
    rng = stream(seed, 0x1E5)
    c = Check("x cos t + y sin t <= hypot(x, y), tight at atan2(y, x) (1e-12)")
    n = max(samples, 1) * 50
    x, y, t = rng.normal(size=n), rng.normal(size=n), rng.uniform(0, 2 * math.pi, n)
    r = np.hypot(x, y)
    lhs = x * np.cos(t) + y * np.sin(t)
    tight = x * np.cos(np.arctan2(y, x)) + y * np.sin(np.arctan2(y, x))
    for ok, dev in zip((lhs <= r + 1e-12) & (np.abs(tight - r) <= 1e-12), np.abs(tight - r)):
        c.record(bool(ok), float(dev))
    return c


def lemma_cos2_sin2(samples: int, seed: int) -> Check:
    """x cos^2 t + y sin^2 t <= max(x, y), equality at t = 0 or pi/2."""
    rng = stream(seed, 0x1E6)
    c = Check("x cos^2 t + y sin^2 t <= max(x, y), tight at 0 or pi/2 (1e-12)")
    n = max(samples, 1) * 50
    x, y, t = rng.random(n), rng.random(n), rng.uniform(0, 2 * math.pi, n)
    lhs = x * np.cos(t) ** 2 + y * np.sin(t) ** 2
    m = np.maximum(x, y)
    best = np.maximum(x * np.cos(0.0) ** 2, y * np.sin(math.pi / 2) ** 2)
    for ok, dev in zip((lhs <= m + 1e-12) & (np.abs(best - m) <= 1e-12), np.abs(best - m)):
        c.record(bool(ok), float(dev))
    return c


def optimal_chsh_grid(n: int = 20) -> Check:
    c = Check(f"optimal CHSH settings reach the closed form on a {n}x{n} grid (1e-9)")
    for a1, a4, a2 in settings_grid(n):
        p = states.SC2Params(a1, a4, a2)
        got = bell.chsh_expectation(states.build_sc2(p), bell.optimal_chsh_settings(p))
        d = abs(got - bell.fmax_sc2(p))
        c.record(d <= 1e-9, d, f"{p}: {got}")
    return c


def optimal_svetlichny_grid(n: int = 20) -> Check:
    c = Check(f"optimal Svetlichny settings reach the closed form on a {n}x{n} grid (1e-9)")
    for a1, a4, a2 in settings_grid(n):
        p = states.SC3Params(a1, a4, a2)
        got = bell.svetlichny_expectation(states.build_sc3(p), bell.optimal_svetlichny_settings(p))
        d = abs(got - bell.smax_sc3(p))
        c.record(d <= 1e-9, d, f"{p}: {got}")
    return c


def suite_svetlichny(samples: int, seed: int) -> list[Check]:
    rng = stream(seed, STREAM_SAMPLES + 1)
    numeric = Check("Svetlichny closed form vs multistart maximum (1e-4)")
    phase = Check("Svetlichny closed form depends on |a2| only (1e-12)")
    for i in range(samples):
        p = random_sc3_params(rng)
        closed = bell.smax_sc3(p)
        value, _ = maximize_svetlichny(states.build_sc3(p), sample_cfg(seed, i))
        numeric.record(abs(value - closed) <= 1e-4, abs(value - closed), f"{p}: {value} vs {closed}")
        rotated = states.SC3Params(p.a1, p.a4, p.a2 * np.exp(2j * math.pi * float(rng.random())))
        d = abs(bell.smax_sc3(rotated) - closed)
        phase.record(d <= 1e-12, d)
    return [numeric, phase, lemma_cos2_sin2(samples, seed), optimal_svetlichny_grid()]


def equivalence_grid(n: int = 50) -> tuple[int, int]:
    """Disagreements among {a2 != 0, C > 0, F_max > 2, chi > 1} on an n x n grid."""
    band = 1e-12
    bad = 0
    total = 0
    for i, a1 in enumerate(np.linspace(0.01, 0.99, n)):
        for j, frac in enumerate(np.linspace(0.0, 1.0, n)):
            a1f = float(a1)
            a2 = float(frac) * math.sqrt(a1f * (1 - a1f)) * np.exp(0.7j * (i + 2 * j))
            p = states.SC2Params(a1f, 1 - a1f, a2)
            rho = states.build_sc2(p)
            preds = {
                p.a2 != 0,
                entanglement.concurrence_wootters(rho) > band,
                bell.fmax_sc2(p) > 2 + band,
                entanglement.dense_coding_capacity(rho) > 1 + band,
                not states.ppt_separable(rho),
            }
            bad += len(preds) != 1
            total += 1
    return bad, total


def suite_measures(samples: int, seed: int) -> list[Check]:
    rng = stream(seed, STREAM_SAMPLES + 2)
    eq9 = Check("F_max = 2 sqrt(1 + C^2) on the parameter grid (1e-12)")
    woot = Check("Wootters concurrence = 2|a2| (1e-9)")
    svet = Check("S_max = 8 C / sqrt(3) on the in-plane branch (1e-12)")
    relent = Check("relative entropy >= 0, zero iff equal (1e-9)")
    chi_mono = Check("dense-coding capacity strictly increases with |a2|")
    chain = Check("a2 != 0 <=> C > 0 <=> F_max > 2 <=> chi > 1 (50x50 grid)")
    ree = Check("relative entropy of entanglement: GHZ = 1, a2 = 0 gives 0")

    for a1, a4, a2 in settings_grid(50):
        p = states.SC2Params(a1, a4, a2)
        d = abs(bell.fmax_sc2(p) - entanglement.fmax_from_concurrence(entanglement.concurrence_sc2(p)))
        eq9.record(d <= 1e-12, d)
        d = abs(entanglement.concurrence_wootters(states.build_sc2(p)) - 2 * abs(a2))
        woot.record(d <= 1e-9, d)
        q = states.SC3Params(a1, a4, a2)
        if 8 * math.sqrt(2) * abs(a2) >= 4 * abs(1 - 2 * a1):
            d = abs(bell.smax_sc3(q) - 8 * entanglement.gen_concurrence_sc3(q) / math.sqrt(3))
            svet.record(d <= 1e-12, d)

    for i in range(samples):
        n = 1 + i % 2
        r = qmat.random_density_matrix(n, rng)
        s = qmat.random_density_matrix(n, rng)
        v = entanglement.relative_entropy(r, s)
        v0 = entanglement.relative_entropy(r, r)
        relent.record(v > 1e-9 and v0 <= 1e-9, v0)

    for a1 in np.linspace(0.05, 0.95, 19):
        a1 = float(a1)
        vals = [
            entanglement.dense_coding_capacity(states.build_sc2(states.SC2Params(a1, 1 - a1, f * math.sqrt(a1 * (1 - a1)))))
            for f in np.linspace(0.0, 1.0, 25)
        ]
        diffs = np.diff(vals)
        chi_mono.record(bool(np.all(diffs > 0)), float(-min(diffs.min(), 0.0)))

    bad, total = equivalence_grid(50)
    chain.passed, chain.total = total - bad, total

    ghz = entanglement.ree_sc3_direct(states.SC3Params(0.5, 0.5, 0.5))
    ree.record(abs(ghz - 1) <= 1e-9, abs(ghz - 1))
    for a1 in (0.0, 0.3, 0.5, 0.9, 1.0):
        z = entanglement.ree_sc3_direct(states.SC3Params(a1, 1 - a1, 0))
        ree.record(abs(z) <= 1e-12, abs(z))
    return [eq9, woot, svet, relent, chi_mono, chain, ree]


def sc_diag_structure_ok(rho: qmat.DensityMatrix) -> bool:
    """Only diagonal entries and the all-zeros/all-ones coherence may be nonzero."""
    m = rho.mat.copy()
    d = rho.dim
    np.fill_diagonal(m, 0)
    m[0, d - 1] = m[d - 1, 0] = 0
    return bool(np.max(np.abs(m)) <= 1e-15)


def suite_channels(samples: int, seed: int, grid_points: int = 301) -> list[Check]:
    rng = stream(seed, STREAM_SAMPLES + 3)
    trace = Check("product channel preserves trace (1e-12)")
    structure = Check("noisy Bell/GHZ stay in the diagonal-plus-coherence families")
    conc = Check("Wootters concurrence of the noisy Bell state = gamma^4 (1e-9)")
    coeffs = Check("channel output matches the printed noisy-state coefficients (1e-12)")
    ident = Check("noisy-Bell closed form equals the four-population form (1e-12)")
    nonmono = Check("interior local minimum of both closed-form curves on [0, 3]")
    continuity = Check("Svetlichny branches meet at gamma = 1/sqrt(2) (1e-12)")

    for i in range(samples):
        n = 1 + i % 3
        rho = qmat.random_density_matrix(n, rng)
        out = channels.apply_product_channel(rho, channels.transverse_kraus(float(rng.random())))
        d = abs(np.trace(out.mat).real - 1)
        trace.record(d <= 1e-12, d)

    bell_rho, ghz_rho = states.bell_state(), states.ghz_state()
    for gt in np.linspace(0.0, 3.0, grid_points):
        g = channels.gamma_of(float(gt))
        ch = channels.transverse_kraus(g)
        r3 = channels.apply_product_channel(bell_rho, ch)
        r6 = channels.apply_product_channel(ghz_rho, ch)
        structure.record(sc_diag_structure_ok(r3) and sc_diag_structure_ok(r6))
        d = abs(entanglement.concurrence_wootters(r3) - g**4)
        conc.record(d <= 1e-9, d)
        d3 = float(np.max(np.abs(r3.mat - states.build_sc2_diag(states.rho3_params(g)).mat)))
        d6 = float(np.max(np.abs(r6.mat - states.build_sc3_diag(states.rho6_params(g)).mat)))
        coeffs.record(max(d3, d6) <= 1e-12, max(d3, d6))
        d = abs(channels.fmax_rho3_closed(g) - bell.fmax_sc2_diag(states.rho3_params(g)))
        ident.record(d <= 1e-12, d)

    grid = np.linspace(0.0, 3.0, grid_points)
    for curve in (channels.fmax_rho3_closed, channels.smax_rho6_closed):
        v = np.array([curve(channels.gamma_of(float(x))) for x in grid])
        nonmono.record(has_interior_minimum(v))
    z_branch, plane = channels.smax_rho6_branches(1 / math.sqrt(2))
    continuity.record(abs(z_branch - plane) <= 1e-12, abs(z_branch - plane))
    return [trace, structure, conc, coeffs, ident, nonmono, continuity]


def has_interior_minimum(v) -> bool:
    """True if some i < j < k has v[i] > v[j] < v[k]."""
    v = np.asarray(v)
    j = int(np.argmin(v))
    return 0 < j < len(v) - 1 and v[0] > v[j] and v[-1] > v[j]


def suite_kernel(samples: int, seed: int) -> list[Check]:
    rng = stream(seed, STREAM_KERNEL)
    pt = Check("partial transpose is an involution (exact)")
    ptr = Check("partial trace preserves trace (1e-12)")
    eigsum = Check("eigenvalues of a state sum to 1 (1e-10)")
    sep = Check("PPT separable iff a2 = 0 for SC families")
    builders = Check("two-qubit builder equals the four-population builder")
    for i in range(samples):
        n = 2 + i % 2
        rho = qmat.random_density_matrix(n, rng)
        h = rng.normal(size=(1 << n, 1 << n)) + 1j * rng.normal(size=(1 << n, 1 << n))
        h = h + h.conj().T
        q = int(rng.integers(0, n))
        back = qmat.partial_transpose(qmat.partial_transpose(h, q), q)
        pt.record(np.array_equal(back, h))
        keep = [k for k in range(n) if rng.random() < 0.5] or [0]
        d = abs(np.trace(qmat.partial_trace(rho, keep).mat).real - np.trace(rho.mat).real)
        ptr.record(d <= 1e-12, d)
        w, _ = qmat.eig_hermitian(rho.mat)
        eigsum.record(abs(w.sum() - 1) <= 1e-10, abs(w.sum() - 1))
    for a1, a4, a2 in settings_grid(20):
        p2, p3 = states.SC2Params(a1, a4, a2), states.SC3Params(a1, a4, a2)
        expect = a2 == 0
        r2, r3 = states.build_sc2(p2), states.build_sc3(p3)
        sep.record(states.ppt_separable(r2, 0) == expect and states.ppt_separable(r3, 0) == expect)
        alt = states.build_sc2_diag(states.SC2DiagParams(a1, 0, 0, a4, a2))
        builders.record(np.array_equal(alt.mat, r2.mat))
    return [pt, ptr, eigsum, sep, builders]


SUITE_FUNCS = {
    "chsh": suite_chsh,
    "svetlichny": suite_svetlichny,
    "measures": suite_measures,
    "channels": suite_channels,
}


def run_suite(name: str, samples: int, seed: int) -> list[Check]:
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if name == "all":
        out = suite_kernel(samples, seed)
        for fn in SUITE_FUNCS.values():
            out += fn(samples, seed)
        return out
    if name not in SUITE_FUNCS:
        raise ValueError(f"unknown suite {name!r}")
    return SUITE_FUNCS[name](samples, seed)

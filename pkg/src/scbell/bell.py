"""CHSH and Svetlichny operators, closed-form maxima and optimal settings."""
from __future__ import annotations

import math
from dataclasses import astuple, dataclass

import numpy as np

from .qmat import PAULI_X, PAULI_Y, PAULI_Z, PAULIS, DensityMatrix, kron_all
from .states import SC2DiagParams, SC2Params, SC3DiagParams, SC3Params

TWO_PI = 2.0 * math.pi
SQRT2 = math.sqrt(2.0)
CHSH_BOUND = 2.0
SVETLICHNY_BOUND = 4.0
CHSH_TSIRELSON = 2.0 * SQRT2
SVETLICHNY_QUANTUM = 4.0 * SQRT2

# Sign pattern of the CHSH terms, indexed [a or a'][b or b'].
CHSH_SIGNS = np.array([[1.0, 1.0], [1.0, -1.0]])
# Sign pattern of the Svetlichny terms, indexed [a|a'][b|b'][c|c'].
SVETLICHNY_SIGNS = np.array(
    [[[1.0, 1.0], [1.0, -1.0]], [[1.0, -1.0], [-1.0, -1.0]]]
)


def wrap_angles(theta: float, phi: float) -> tuple[float, float]:
    """Map arbitrary (theta, phi) to the same Bloch vector with theta in [0, pi], phi in [0, 2pi)."""
    theta = math.fmod(theta, TWO_PI)
    if theta < 0:
        theta += TWO_PI
    if theta > math.pi:
        theta = TWO_PI - theta
        phi += math.pi
    phi = math.fmod(phi, TWO_PI)
    if phi < 0:
        phi += TWO_PI
    if phi >= TWO_PI:
        phi = 0.0
    # adding 0.0 turns -0.0 into 0.0
    return theta + 0.0, phi + 0.0


@dataclass(frozen=True)
class MeasurementDirection:
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError("direction angles must be finite")
        t, p = wrap_angles(float(self.theta), float(self.phi))
        object.__setattr__(self, "theta", t)
        object.__setattr__(self, "phi", p)

    @property
    def vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])

    @classmethod
    def from_vector(cls, v) -> "MeasurementDirection":
        x, y, z = (float(c) for c in v)
        r = math.sqrt(x * x + y * y + z * z)
        if r == 0:
            raise ValueError("zero vector has no direction")
        return cls(math.acos(max(-1.0, min(1.0, z / r))), math.atan2(y, x))


Z_DIR = MeasurementDirection(0.0, 0.0)
MINUS_Z_DIR = MeasurementDirection(math.pi, 0.0)
X_DIR = MeasurementDirection(math.pi / 2, 0.0)


@dataclass(frozen=True)
class CHSHSettings:
    a: MeasurementDirection
    a_prime: MeasurementDirection
    b: MeasurementDirection
    b_prime: MeasurementDirection

    def directions(self) -> tuple[MeasurementDirection, ...]:
        return (self.a, self.a_prime, self.b, self.b_prime)

    def angles(self) -> list[float]:
        return [x for d in self.directions() for x in astuple(d)]


@dataclass(frozen=True)
class SvetlichnySettings:
    a: MeasurementDirection
    a_prime: MeasurementDirection
    b: MeasurementDirection
    b_prime: MeasurementDirection
    c: MeasurementDirection
    c_prime: MeasurementDirection

    def directions(self) -> tuple[MeasurementDirection, ...]:
        return (self.a, self.a_prime, self.b, self.b_prime, self.c, self.c_prime)

    def angles(self) -> list[float]:
        return [x for d in self.directions() for x in astuple(d)]


def settings_from_angles(angles) -> CHSHSettings | SvetlichnySettings:
    dirs = [MeasurementDirection(angles[i], angles[i + 1]) for i in range(0, len(angles), 2)]
    if len(dirs) == 4:
        return CHSHSettings(*dirs)
    if len(dirs) == 6:
        return SvetlichnySettings(*dirs)
    raise ValueError(f"expected 8 or 12 angles, got {len(angles)}")


def observable(d: MeasurementDirection) -> np.ndarray:
    x, y, z = d.vector
    return x * PAULI_X + y * PAULI_Y + z * PAULI_Z


def chsh_operator(s: CHSHSettings) -> np.ndarray:
    A, Ap, B, Bp = (observable(d) for d in s.directions())
    return np.kron(A, B) + np.kron(A, Bp) + np.kron(Ap, B) - np.kron(Ap, Bp)


def svetlichny_operator(s: SvetlichnySettings) -> np.ndarray:
    obs = [observable(d) for d in s.directions()]
    first, second, third = obs[0:2], obs[2:4], obs[4:6]
    out = np.zeros((8, 8), dtype=complex)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                out += SVETLICHNY_SIGNS[i, j, k] * kron_all((first[i], second[j], third[k]))
    return out


def _check_qubits(rho: DensityMatrix, n: int) -> None:
    if rho.n_qubits != n:
        raise ValueError(f"expected a {n}-qubit state, got {rho.n_qubits} qubits")


def chsh_expectation(rho: DensityMatrix, s: CHSHSettings) -> float:
    _check_qubits(rho, 2)
    return float(np.trace(rho.mat @ chsh_operator(s)).real)


def svetlichny_expectation(rho: DensityMatrix, s: SvetlichnySettings) -> float:
    _check_qubits(rho, 3)
    return float(np.trace(rho.mat @ svetlichny_operator(s)).real)


def correlation_tensor(rho: DensityMatrix) -> np.ndarray:
    """Full correlation tensor T[i,j,...] = Tr(rho sigma_i x sigma_j x ...), i in {x,y,z}."""
    n = rho.n_qubits
    t = np.empty((3,) * n)
    for idx in np.ndindex(*t.shape):
        t[idx] = np.trace(rho.mat @ kron_all(PAULIS[i] for i in idx)).real
    return t


# ---------- closed forms ----------

def fmax_sc2(p: SC2Params) -> float:
    return 2.0 * math.sqrt(1.0 + 4.0 * abs(p.a2) ** 2)


def sc2_diag_zz(p: SC2DiagParams) -> float:
    return p.b1 + p.b4 - p.b2 - p.b3


def fmax_sc2_diag(p: SC2DiagParams) -> float:
    """The printed closed form for the four-population family (not clamped at 2)."""
    return 2.0 * math.sqrt(sc2_diag_zz(p) ** 2 + 4.0 * abs(p.c1) ** 2)


def fmax_sc2_diag_exact(p: SC2DiagParams) -> float:
    """True CHSH maximum of the four-population family.

    The correlation matrix has singular values 2|c1|, 2|c1| and |b1+b4-b2-b3|;
    the printed form only pairs the last with one of the first two.
    """
    z2 = sc2_diag_zz(p) ** 2
    c2 = 4.0 * abs(p.c1) ** 2
    return 2.0 * math.sqrt(c2 + max(z2, c2))


def smax_sc3(p: SC3Params) -> float:
    return max(4.0 * abs(1.0 - 2.0 * p.a1), 8.0 * SQRT2 * abs(p.a2))


def sc3_diag_zzz(p: SC3DiagParams) -> float:
    b = p.b
    return b[0] - b[1] - b[2] - b[3] + b[4] + b[5] + b[6] - b[7]


def smax_sc3_diag(p: SC3DiagParams) -> float:
    return max(4.0 * abs(sc3_diag_zzz(p)), 8.0 * SQRT2 * abs(p.c1))


def fmax_horodecki(rho: DensityMatrix) -> float:
    """2 sqrt(t1 + t2) from the two largest eigenvalues of T^T T."""
    _check_qubits(rho, 2)
    t = correlation_tensor(rho)
    w = np.linalg.eigvalsh(t.T @ t)
    return 2.0 * math.sqrt(max(w[-1] + w[-2], 0.0))


# ---------- optimal settings ----------

def _chsh_settings_for(zz: float, c: complex) -> CHSHSettings:
    # b, b' = cos(phi) z +/- sin(phi) (cos(phi_d) x + sin(phi_d) y)
    phi = math.atan2(2.0 * abs(c), zz)
    phi_d = math.atan2(-c.imag, c.real)
    b = MeasurementDirection(phi, phi_d)
    b_prime = MeasurementDirection(-phi, phi_d)
    return CHSHSettings(Z_DIR, X_DIR, b, b_prime)


def optimal_chsh_settings(p: SC2Params) -> CHSHSettings:
    if p.a2 == 0:
        return CHSHSettings(Z_DIR, Z_DIR, Z_DIR, Z_DIR)
    return _chsh_settings_for(1.0, p.a2)


def chsh_settings_sc2_diag(p: SC2DiagParams) -> CHSHSettings:
    """Settings attaining the printed four-population form."""
    if p.c1 == 0:
        zz = sc2_diag_zz(p)
        sign_dir = Z_DIR if zz >= 0 else MINUS_Z_DIR
        return CHSHSettings(Z_DIR, Z_DIR, sign_dir, sign_dir)
    return _chsh_settings_for(sc2_diag_zz(p), p.c1)


def _svetlichny_settings_for(zzz: float, c: complex, in_plane: bool) -> SvetlichnySettings:
    if not in_plane:
        c_dir = Z_DIR if zzz >= 0 else MINUS_Z_DIR
        c_prime = MINUS_Z_DIR if zzz >= 0 else Z_DIR
        return SvetlichnySettings(Z_DIR, Z_DIR, Z_DIR, Z_DIR, c_dir, c_prime)
    # every vector in the x-y plane; d at -arg(c), d' a quarter turn behind,
    # b and b' bisect d and +/-d'; a' and c' lead a and c by a quarter turn
    psi = math.atan2(c.imag, c.real)
    half = math.pi / 2
    quarter = math.pi / 4
    eq = lambda azimuth: MeasurementDirection(half, azimuth)  # noqa: E731
    phi_d = -psi
    return SvetlichnySettings(
        a=eq(0.0),
        a_prime=eq(half),
        b=eq(phi_d - quarter),
        b_prime=eq(phi_d + quarter),
        c=eq(0.0),
        c_prime=eq(half),
    )


def optimal_svetlichny_settings(p: SC3Params) -> SvetlichnySettings:
    zzz = 2.0 * p.a1 - 1.0
    in_plane = 8.0 * SQRT2 * abs(p.a2) >= 4.0 * abs(zzz)
    return _svetlichny_settings_for(zzz, p.a2, in_plane)


def svetlichny_settings_sc3_diag(p: SC3DiagParams) -> SvetlichnySettings:
    zzz = sc3_diag_zzz(p)
    in_plane = 8.0 * SQRT2 * abs(p.c1) >= 4.0 * abs(zzz)
    return _svetlichny_settings_for(zzz, p.c1, in_plane)


def bisector_pair(b, b_prime) -> tuple[np.ndarray, np.ndarray] | None:
    """Unit vectors d, d' with b + b' = 2 d cos(phi) and b - b' = 2 d' sin(phi).

    Returns None when b = +/- b' leaves one of them undetermined.
    """
    vb, vbp = np.asarray(b.vector), np.asarray(b_prime.vector)
    s, t = vb + vbp, vb - vbp
    ns, nt = np.linalg.norm(s), np.linalg.norm(t)
    if ns < 1e-12 or nt < 1e-12:
        return None
    return s / ns, t / nt

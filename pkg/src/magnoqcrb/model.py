"""Cavity-magnon-mechanical system with a coherent feedback loop.

Quadrature ordering throughout is ``(x_a, y_a, x_m, y_m, q, p)`` with
``x = (c + c^dag)/sqrt(2)``. All rates and frequencies are angular (rad/s).
"""

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.constants import hbar, k as k_B

from .errors import ConvergenceError, DomainError, NumericalError, PhysicalityError

TWO_PI = 2.0 * math.pi

# ordering of the six quadratures
QUADRATURES = ("x_a", "y_a", "x_m", "y_m", "q", "p")


@dataclass(frozen=True)
class SystemParams:
    """Physical and feedback inputs.

    Defaults reproduce the baseline operating point: 10 GHz cavity and
    magnon, 10 MHz mechanics, 0.1 MHz cavity/magnon linewidths, 10 kHz
    mechanical damping, 2 MHz couplings, ``delta_a = 0.9 delta_m = omega_d``,
    8.9 mW drive at 10 mK and feedback ``r = 0.1``, ``theta = pi``.

    ``g_md`` is the magnitude of the effective magnomechanical coupling. When
    it is set, the bare coupling ``J_md`` is derived from it so that
    ``|i sqrt(2) J_md beta_s| == g_md``; set ``g_md=None`` to drive the model
    from ``J_md`` instead.
    """

    omega_a: float = TWO_PI * 10e9
    omega_m: float = TWO_PI * 10e9
    omega_d: float = TWO_PI * 10e6
    kappa_a: float = TWO_PI * 0.1e6
    kappa_m: float = TWO_PI * 0.1e6
    gamma_d: float = TWO_PI * 10e3
    delta_a: float = TWO_PI * 10e6
    delta_m: float = TWO_PI * 10e6 / 0.9
    g_ma: float = TWO_PI * 2e6
    g_md: Optional[float] = TWO_PI * 2e6
    J_md: float = 0.0
    rabi_omega: float = 0.0
    drive_power: float = 8.9e-3
    drive_phase: float = 0.0
    temperature: float = 0.01
    feedback_r: float = 0.1
    feedback_theta: float = math.pi
    repetitions: int = 1

    def __post_init__(self):
        nonneg = ("omega_a", "omega_m", "omega_d", "kappa_a", "kappa_m", "gamma_d",
                  "g_ma", "J_md", "rabi_omega", "drive_power", "temperature")
        for name in nonneg:
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
        for name in ("delta_a", "delta_m", "drive_phase", "feedback_theta"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.g_md is not None and (not math.isfinite(self.g_md) or self.g_md < 0):
            raise DomainError(f"g_md must be finite and >= 0, got {self.g_md!r}")
        if not 0.0 <= self.feedback_r < 1.0:
            raise DomainError(f"feedback_r must lie in [0, 1), got {self.feedback_r!r}")
        if not 0.0 <= self.feedback_theta <= TWO_PI:
            raise DomainError(f"feedback_theta must lie in [0, 2 pi], got {self.feedback_theta!r}")
        if int(self.repetitions) != self.repetitions or self.repetitions < 1:
            raise DomainError(f"repetitions must be a positive integer, got {self.repetitions!r}")
        if self.omega_d <= 0:
            raise DomainError("omega_d must be positive")

    @property
    def epsilon(self):
        """Beam-splitter transmission, ``sqrt(1 - r^2)``."""
        return math.sqrt(1.0 - self.feedback_r ** 2)

    @property
    def omega_L(self):
        """Drive frequency implied by the cavity detuning."""
        return self.omega_a - self.delta_a

    @property
    def drive_amplitude(self):
        """Cavity drive ``E = sqrt(2 kappa_a P / (hbar omega_L))`` in s^-1."""
        if self.drive_power == 0:
            return 0.0
        if self.omega_L <= 0:
            raise DomainError("drive frequency omega_a - delta_a must be positive")
        return math.sqrt(2.0 * self.kappa_a * self.drive_power / (hbar * self.omega_L))

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class FeedbackEffective:
    delta_a_fb: float
    kappa_a_fb: float
    lambda_noise: float


@dataclass(frozen=True)
class SteadyState:
    alpha: complex
    beta: complex
    q: float
    p: float
    delta_m_eff: float
    g_md_realized: complex
    J_md: float
    iterations: int = 0

    @property
    def g_md(self):
        """Coupling magnitude that enters the drift matrix."""
        return abs(self.g_md_realized)


@dataclass(frozen=True)
class LinearizedModel:
    A: np.ndarray
    D: np.ndarray
    R_mean: np.ndarray
    stable: bool
    spectral_abscissa: float
    feedback: FeedbackEffective
    steady: SteadyState


def thermal_occupancy(omega, T):
    """Bose-Einstein occupation ``1/(exp(hbar omega / k_B T) - 1)``."""
    if omega <= 0:
        raise DomainError(f"omega must be positive, got {omega!r}")
    if T < 0:
        raise DomainError(f"temperature must be >= 0, got {T!r}")
    if T == 0:
        return 0.0
    x = hbar * omega / (k_B * T)
    if x > 700.0:
        # expm1 overflows; n ~ exp(-x) there
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def feedback_transform(params):
    r, th = params.feedback_r, params.feedback_theta
    return FeedbackEffective(
        delta_a_fb=params.delta_a - 2.0 * r * params.kappa_a * math.sin(th),
        kappa_a_fb=params.kappa_a * (1.0 - 2.0 * r * math.cos(th)),
        lambda_noise=(1.0 - r * r) * abs(1.0 - r * complex(math.cos(th), math.sin(th))) ** 2,
    )


def _amplitudes(params, eff, delta_m_eff):
    # steady-state equations for (alpha, beta) are linear once delta_m_eff is fixed
    M = np.array([
        [1j * eff.delta_a_fb + eff.kappa_a_fb, 1j * params.g_ma],
        [1j * params.g_ma, 1j * delta_m_eff + params.kappa_m],
    ])
    drive = np.array([
        -1j * params.epsilon * params.drive_amplitude * np.exp(1j * params.drive_phase),
        params.rabi_omega,
    ])
    if not np.any(drive):
        return 0j, 0j
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    if abs(det) == 0:
        raise NumericalError("steady-state amplitude equations are singular")
    alpha = (M[1, 1] * drive[0] - M[0, 1] * drive[1]) / det
    beta = (M[0, 0] * drive[1] - M[1, 0] * drive[0]) / det
    return complex(alpha), complex(beta)


def solve_steady_state(params, *, tol=1e-12, max_iter=10_000):
    """Self-consistent mean fields for a given bare coupling ``params.J_md``.

    Iterates ``q -> -J_md |beta(q)|^2 / omega_d``. Switches to 0.5
    under-relaxation if the residual fails to decrease for 100 consecutive
    iterations.
    """
    eff = feedback_transform(params)
    J, wd = params.J_md, params.omega_d
    q = 0.0
    relax = 1.0
    best = math.inf
    stalled = 0
    residual = math.inf
    for it in range(1, max_iter + 1):
        delta_m_eff = params.delta_m + J * q
        alpha, beta = _amplitudes(params, eff, delta_m_eff)
        q_new = -J * abs(beta) ** 2 / wd
        residual = abs(q_new - q) / max(abs(q_new), abs(q), 1e-300) if (q_new or q) else 0.0
        q = q + relax * (q_new - q)
        if residual <= tol:
            break
        if residual < best:
            best, stalled = residual, 0
        else:
            stalled += 1
            if stalled >= 100 and relax == 1.0:
                relax, stalled = 0.5, 0
    else:
        raise ConvergenceError("mean-field fixed point did not converge", residual)
    delta_m_eff = params.delta_m + J * q
    alpha, beta = _amplitudes(params, eff, delta_m_eff)
    return SteadyState(
        alpha=alpha, beta=beta, q=-J * abs(beta) ** 2 / wd, p=0.0,
        delta_m_eff=delta_m_eff, g_md_realized=1j * math.sqrt(2.0) * J * beta,
        J_md=J, iterations=it,
    )


def solve_for_coupling(params, g_md=None):
    """Steady state whose effective coupling magnitude equals ``g_md``.

    Because ``|g_md|^2 = 2 J_md^2 |beta|^2``, the magnon frequency shift is
    ``J_md q_s = -g_md^2 / (2 omega_d)`` independently of ``beta``, so the
    fixed point closes in one linear solve and ``J_md`` follows directly.
    """
    g = params.g_md if g_md is None else g_md
    if g is None or g < 0:
        raise DomainError("a non-negative target g_md is required")
    eff = feedback_transform(params)
    delta_m_eff = params.delta_m - g * g / (2.0 * params.omega_d)
    alpha, beta = _amplitudes(params, eff, delta_m_eff)
    if abs(beta) > 0:
        J = g / (math.sqrt(2.0) * abs(beta))
        g_complex = 1j * math.sqrt(2.0) * J * beta
    else:
        # undriven magnon: the coupling cannot be realized by any finite J_md
        J = math.inf if g > 0 else 0.0
        g_complex = 1j * g
    q = -g * abs(beta) / (math.sqrt(2.0) * params.omega_d)
    return SteadyState(alpha=alpha, beta=beta, q=q, p=0.0, delta_m_eff=delta_m_eff,
                       g_md_realized=complex(g_complex), J_md=J, iterations=1)


def steady_state(params):
    if params.g_md is not None:
        return solve_for_coupling(params)
    return solve_steady_state(params)


def build_drift_matrix(eff, ss, params):
    k, d = eff.kappa_a_fb, eff.delta_a_fb
    g, G = params.g_ma, ss.g_md
    km, dm = params.kappa_m, ss.delta_m_eff
    wd, gd = params.omega_d, params.gamma_d
    return np.array([
        [-k, d, 0.0, g, 0.0, 0.0],
        [-d, -k, -g, 0.0, 0.0, 0.0],
        [0.0, g, -km, dm, -G, 0.0],
        [-g, 0.0, -dm, -km, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, wd],
        [0.0, 0.0, 0.0, G, -wd, -gd],
    ])


def build_diffusion_matrix(eff, params):
    T = params.temperature
    cav = params.kappa_a * eff.lambda_noise * (2.0 * thermal_occupancy(params.omega_a, T) + 1.0)
    mag = params.kappa_m * (2.0 * thermal_occupancy(params.omega_m, T) + 1.0)
    mech = params.gamma_d * (2.0 * thermal_occupancy(params.omega_d, T) + 1.0)
    return np.diag([cav, cav, mag, mag, 0.0, mech])


def check_stability(A):
    """Return ``(stable, spectral_abscissa)``.

    Eigenvalue test equivalent to Routh-Hurwitz; a point counts as stable only
    if every real part is below ``-1e-9 ||A||``.
    """
    A = np.asarray(A, dtype=float)
    try:
        eig = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    abscissa = float(np.max(eig.real))
    return bool(abscissa < -1e-9 * np.linalg.norm(A, 2)), abscissa


def displacement_vector(ss):
    s2 = math.sqrt(2.0)
    return np.array([s2 * ss.alpha.real, s2 * ss.alpha.imag,
                     s2 * ss.beta.real, s2 * ss.beta.imag, ss.q, 0.0])


def linearize(params, ss=None):
    """Steady state, drift, diffusion and stability verdict for ``params``."""
    eff = feedback_transform(params)
    ss = steady_state(params) if ss is None else ss
    A = build_drift_matrix(eff, ss, params)
    D = build_diffusion_matrix(eff, params)
    stable, abscissa = check_stability(A)
    return LinearizedModel(A=A, D=D, R_mean=displacement_vector(ss), stable=stable,
                           spectral_abscissa=abscissa, feedback=eff, steady=ss)


def mode_occupations(V, R_mean, tol=1e-9):
    """Mean quanta ``(n_photon, n_magnon, n_phonon)`` from first and second moments."""
    V = np.asarray(V)
    R = np.asarray(R_mean)
    out = []
    for i in (0, 2, 4):
        n = 0.5 * (R[i] ** 2 + R[i + 1] ** 2) + 0.5 * (V[i, i] + V[i + 1, i + 1] - 1.0)
        scale = max(1.0, abs(V[i, i]) + abs(V[i + 1, i + 1]))
        if n < -tol * scale:
            raise PhysicalityError(f"negative occupation {n:.3e} for mode {QUADRATURES[i][-1]}")
        out.append(float(n))
    return tuple(out)

"""Local nonlinear flag dynamics: closed-form propagator and RK4 oracle.

The flag qubit evolves under i|psi'> = eps * tanh(alpha <A - eta*1>) A |psi>
extended to the full register as 1 (x) A. Because <1 (x) A> is a constant of
motion, the closed form freezes the oscillation frequency from the initial
flag reduction; the RK4 integrator re-evaluates the tanh argument every step
and therefore provides an independent check.

Frequency sign: the trace form Tr rho (A - eta*1) evaluates to
-eta*s/2^(n-1), the negative of the argument in the displayed frequency
formula. Every observable depends on the frequency only through cos(2wt)
and sin^2(wt), both even in w, so |w| is used throughout.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .qstate import StateVector, partial_trace

DEFAULT_ETA = 0.01
DEFAULT_EPSILON = 1.0

NORM_DRIFT_LIMIT = 1e-6


class NormDriftError(RuntimeError):
    """RK4 norm drift exceeded the limit; shrink the time step."""


class TrajectoryTooShortError(ValueError):
    """Trajectory does not cover the minimum decision duration."""


class NoOscillationError(ValueError):
    """No marked inputs: the dynamics is frozen and has no hold time."""


@dataclass(frozen=True)
class FlagOperator:
    """2x2 Hermitian generator A with A^2 = 1, parametrized by eta."""

    eta: float

    def __post_init__(self):
        if not 0.0 < self.eta < 1.0:
            raise ValueError(f"eta={self.eta} outside (0, 1)")

    @property
    def matrix(self):
        beta = math.sqrt(1.0 - self.eta**2)
        return np.array([[self.eta, beta], [beta, -self.eta]])


@dataclass(frozen=True)
class NonlinearParams:
    """Nonlinearity magnitude eps, gain alpha, and operator tilt eta."""

    epsilon: float = DEFAULT_EPSILON
    alpha: float = 0.0
    eta: float = DEFAULT_ETA

    def __post_init__(self):
        if self.epsilon <= 0 or self.alpha <= 0 or not 0 < self.eta < 1:
            raise ValueError(
                f"need epsilon > 0, alpha > 0, 0 < eta < 1; got "
                f"({self.epsilon}, {self.alpha}, {self.eta})"
            )

    @property
    def flag_operator(self):
        return FlagOperator(self.eta)


def default_alpha(n, eta=DEFAULT_ETA):
    """Gain large enough that tanh saturates for s = 1 at this n and eta."""
    return max(2.0**n, 10.0 * 2.0 ** (n - 1) / eta)


def default_params(n, eta=DEFAULT_ETA, epsilon=DEFAULT_EPSILON):
    return NonlinearParams(epsilon=epsilon, alpha=default_alpha(n, eta), eta=eta)


def default_dt(p):
    """Step small enough that RK4 error sits far below the 1e-6 oracle tolerance."""
    return 1e-3 * (2.0 * math.pi / p.epsilon)


@dataclass(frozen=True)
class Trajectory:
    """Time series of flag <sigma3> samples plus run metadata."""

    times: np.ndarray
    sigma3: np.ndarray
    source: str
    params: NonlinearParams
    n: int
    s: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        z = np.asarray(self.sigma3, dtype=float)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "sigma3", z)
        if t.shape != z.shape or t.ndim != 1:
            raise ValueError("times and sigma3 must be matching 1-d arrays")
        if t.size >= 2 and np.any(np.diff(t) <= 0):
            raise ValueError("sample times must be strictly increasing")
        if np.any(np.abs(z) > 1.0 + 1e-9):
            raise ValueError("sigma3 samples leave [-1, 1] beyond 1e-9")


def omega(n, s, p):
    """|w| = eps * tanh(alpha * eta * s / 2^(n-1))."""
    if n < 1 or s < 0:
        raise ValueError(f"need n >= 1 and s >= 0, got n={n}, s={s}")
    return p.epsilon * math.tanh(p.alpha * p.eta * s / 2.0 ** (n - 1))


def omega_trace_form(n, s, p):
    """Frequency from the trace form eps * tanh(alpha * Tr rho (A - eta*1)).

    Evaluated with the actual matrices; comes out with the opposite sign to
    ``omega`` but identical magnitude (see module docstring).
    """
    a = p.flag_operator.matrix
    rho = np.diag([(2.0**n - s) / 2.0**n, s / 2.0**n])
    theta = np.trace(rho @ (a - p.eta * np.eye(2))).real
    return p.epsilon * math.tanh(p.alpha * theta)


def closed_form_evolve(state, t, p):
    """Propagate by cos(wt) - i sin(wt) (1 (x) A), w frozen from `state`.

    The frequency is read off the flag reduced density matrix of the input
    state, which is self-consistent because <1 (x) A> is conserved.
    """
    a = p.flag_operator.matrix
    rho = partial_trace(state, "flag").entries
    theta = np.trace(rho @ (a - p.eta * np.eye(2))).real
    w = p.epsilon * math.tanh(p.alpha * abs(theta))
    rows = state.amplitudes.reshape(-1, 2)
    out = math.cos(w * t) * rows - 1j * math.sin(w * t) * (rows @ a)
    return StateVector(state.n_inputs, out.reshape(-1))


def sigma3_closed_form(t, n, s, p):
    """Flag <sigma3>(t) = z0 cos(2wt) + 2 eta^2 z0 sin^2(wt), z0 = (2^(n-1)-s)/2^(n-1)."""
    if not 0 <= s <= 2**n:
        raise ValueError(f"s={s} outside [0, 2^{n}]")
    w = omega(n, s, p)
    z0 = (2.0 ** (n - 1) - s) / 2.0 ** (n - 1)
    t = np.asarray(t, dtype=float)
    out = z0 * np.cos(2.0 * w * t) + 2.0 * p.eta**2 * z0 * np.sin(w * t) ** 2
    return float(out) if out.ndim == 0 else out


def closed_form_trajectory(n, s, p, t_max, dt):
    """Analytic <sigma3> trajectory on a uniform grid; no dense vector needed.

    This is the large-n path: valid for any n since the closed form depends
    only on (n, s, eta, alpha, eps).
    """
    times = np.arange(0.0, t_max + 0.5 * dt, dt)
    return Trajectory(
        times=times,
        sigma3=sigma3_closed_form(times, n, s, p),
        source="closed-form",
        params=p,
        n=n,
        s=s,
    )


@dataclass(frozen=True)
class RK4Result:
    trajectory: Trajectory
    final_state: StateVector
    max_norm_drift: float
    a_expect: np.ndarray


def rk4_evolve(state, t_max, dt, p, s=None):
    """Integrate the full nonlinear equation of motion with classical RK4.

    Serves as the independent oracle for the closed form: the tanh argument
    is re-evaluated at every stage. Norm drift is recorded as a diagnostic
    and the run is rejected if it exceeds ``NORM_DRIFT_LIMIT``.
    """
    if dt <= 0 or t_max < dt:
        raise ValueError(f"need dt > 0 and t_max >= dt, got dt={dt}, t_max={t_max}")
    n_steps = int(round(t_max / dt))
    psi, sigma3, a_expect, norm = kernels.rk4_nonlinear(
        state.amplitudes, p.eta, p.epsilon, p.alpha, dt, n_steps
    )
    drift = float(np.max(np.abs(norm - 1.0)))
    if drift > NORM_DRIFT_LIMIT:
        raise NormDriftError(
            f"norm drift {drift:.3e} exceeds {NORM_DRIFT_LIMIT}; shrink dt"
        )
    traj = Trajectory(
        times=dt * np.arange(n_steps + 1),
        sigma3=sigma3,
        source="rk4",
        params=p,
        n=state.n_inputs,
        s=s,
        meta={"dt": dt, "max_norm_drift": drift},
    )
    final = StateVector(state.n_inputs, psi / np.linalg.norm(psi))
    return RK4Result(traj, final, drift, a_expect)


@dataclass(frozen=True)
class SingleQubitResult:
    trajectory: Trajectory
    theta: np.ndarray
    final_psi: np.ndarray


def single_qubit_evolve(psi, t_max, dt, p):
    """RK4 integration of the bare 1-qubit nonlinear equation.

    Reports <sigma3>(t) together with the tanh argument <A - eta*1> over
    time. |0> is a fixed point; any admixture of |1> starts the motion.
    """
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.shape != (2,):
        raise ValueError("psi must be a 2-component vector")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-12:
        raise ValueError("psi must have unit norm")
    n_steps = int(round(t_max / dt))
    out, sigma3, a_expect, norm = kernels.rk4_nonlinear(
        psi, p.eta, p.epsilon, p.alpha, dt, n_steps
    )
    drift = float(np.max(np.abs(norm - 1.0)))
    if drift > NORM_DRIFT_LIMIT:
        raise NormDriftError(
            f"norm drift {drift:.3e} exceeds {NORM_DRIFT_LIMIT}; shrink dt"
        )
    traj = Trajectory(
        times=dt * np.arange(n_steps + 1),
        sigma3=sigma3,
        source="rk4",
        params=p,
        n=0,
        meta={"dt": dt, "max_norm_drift": drift},
    )
    theta = a_expect - p.eta * norm**2
    return SingleQubitResult(traj, theta, out)


def decide_s(traj, n):
    """Decide "zero" vs "nonzero" from a <sigma3> trajectory.

    Nonzero iff the sampled minimum dips below 1 - 1/2^n. The trajectory
    must cover at least the first expected minimum for s = 1, pi/(2 w_min).
    """
    w_min = omega(n, 1, traj.params)
    required = math.pi / (2.0 * w_min)
    duration = float(traj.times[-1] - traj.times[0])
    if duration < required:
        raise TrajectoryTooShortError(
            f"trajectory covers {duration:.6g}, needs at least {required:.6g}"
        )
    margin = 1.0 / 2.0**n
    return "nonzero" if float(np.min(traj.sigma3)) < 1.0 - margin else "zero"


def hold_time(n, s, p):
    """First minimizer t* = pi/(2w) of the closed-form <sigma3>."""
    if s < 1:
        raise NoOscillationError("no oscillation: s = 0 has no finite hold time")
    return math.pi / (2.0 * omega(n, s, p))

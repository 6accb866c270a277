"""State-adaptive open-system amplifier.

The single-qubit summary state psi = alpha0*e0 + alpha1*e1 selects the dynamics
of a probe qubit coupled to an environment. With both amplitudes nonzero the
coupling reduces (independently of their values) to a dipole interaction whose
reduced dynamics is a damping master equation

    d/dt rho = i*Im(gamma)*[rho, P1] + Re(gamma)*(2 D rho D+ - {P1, rho})

with D = |e0><e1| and P1 = D+ D = |e1><e1|: the ground state is the unique
invariant state and everything relaxes to it exponentially. With alpha1 = 0 the
coupling is diagonal and the probe merely precesses under a shifted two-level
Hamiltonian: populations stay put and the coherence rotates periodically. SAT
vs UNSAT is read off as damping vs oscillation of the probe.

The printed master equation above carries the GKSL-normalized 2*D rho D+ term;
the verbatim single-recycling variant (which leaks trace at rate
Re(gamma)*rho_11) is available behind raw=True for comparison.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .dynamics import (
    DensityMatrix2,
    LOWERING,
    PROJ_EXCITED,
    Superoperator,
    evolve,
    left_mult,
    right_mult,
    sandwich,
)

_ZERO_AMP_TOL = 1e-12


@dataclass(frozen=True)
class InputAmplitudes:
    """Normalized amplitudes of the summary state fed to the amplifier."""

    alpha0: complex
    alpha1: complex

    def __post_init__(self):
        norm = abs(self.alpha0) ** 2 + abs(self.alpha1) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"|alpha0|^2 + |alpha1|^2 = {norm} is not 1 within 1e-12")


@dataclass(frozen=True)
class TwoLevelHamiltonian:
    """Diagonal system Hamiltonian with level splitting E1 - E0 > 0.

    Integer energies (the default) make the coherent branch exactly periodic;
    effective_hamiltonian enforces that in strict mode."""

    E0: float = 0
    E1: float = 2

    def __post_init__(self):
        if not self.E0 < self.E1:
            raise ValueError(f"need E0 < E1, got E0={self.E0}, E1={self.E1}")

    @property
    def bohr_frequency(self) -> float:
        return float(self.E1 - self.E0)


@dataclass(frozen=True)
class Susceptibility:
    """Complex environment susceptibility; the real part drives damping."""

    gamma: complex = 1.0

    def __post_init__(self):
        if not complex(self.gamma).real > 0:
            raise ValueError(f"Re(gamma) must be positive, got {self.gamma}")


@dataclass(frozen=True)
class DampingRates:
    """Closed-form decay constants of the damping master equation."""

    population_decay: float
    coherence_decay: float
    coherence_rotation: float


@dataclass(frozen=True)
class DampingDynamics:
    """Dissipative branch: generator pair plus its analytic rates."""

    generator: Superoperator
    heisenberg: Superoperator
    rates: DampingRates
    gamma: complex


@dataclass(frozen=True)
class CoherentDynamics:
    """Unitary branch: shifted diagonal Hamiltonian, periodic or stationary."""

    hamiltonian: np.ndarray
    period: float | None
    trivially_sat: bool = False

    @property
    def delta(self) -> float:
        """Coherence rotation frequency (level splitting of the shifted H)."""
        return float((self.hamiltonian[1, 1] - self.hamiltonian[0, 0]).real)


AdaptiveDynamics = DampingDynamics | CoherentDynamics


def damping_rates(g: Susceptibility) -> DampingRates:
    gamma = complex(g.gamma)
    return DampingRates(
        population_decay=2.0 * gamma.real,
        coherence_decay=gamma.real,
        coherence_rotation=gamma.imag,
    )


def damping_generator(g: Susceptibility, raw: bool = False) -> tuple[Superoperator, Superoperator]:
    """Build the (state-propagating, observable-propagating) generator pair.

    raw=True keeps the single D rho D+ recycling term and full anticommutator
    coefficient; that variant is not trace-preserving and exists only for
    diagnostics.
    """
    gamma = complex(g.gamma)
    p1_left, p1_right = left_mult(PROJ_EXCITED), right_mult(PROJ_EXCITED)
    raising = LOWERING.conj().T
    recycle_state = sandwich(LOWERING, raising)  # rho -> D rho D+
    recycle_obs = sandwich(raising, LOWERING)  # x -> D+ x D
    rotation_state = 1j * gamma.imag * (p1_right - p1_left)  # i Im(g) [rho, P1]
    rotation_obs = 1j * gamma.imag * (p1_left - p1_right)  # i Im(g) [P1, x]
    if raw:
        dissip_state = gamma.real * (recycle_state - p1_left - p1_right)
        dissip_obs = gamma.real * (recycle_obs - p1_left - p1_right)
        labels = ("damping raw state generator", "damping raw observable generator")
    else:
        dissip_state = gamma.real * (2.0 * recycle_state - p1_left - p1_right)
        dissip_obs = gamma.real * (2.0 * recycle_obs - p1_left - p1_right)
        labels = ("damping state generator", "damping observable generator")
    return (
        Superoperator(rotation_state + dissip_state, label=labels[0]),
        Superoperator(rotation_obs + dissip_obs, label=labels[1]),
    )


def effective_hamiltonian(
    H: TwoLevelHamiltonian, shifted_level: int = 0, strict: bool = True
) -> tuple[np.ndarray, float | None]:
    """Shifted Hamiltonian of the coherent branch and the evolution period.

    The diagonal coupling adds one unit to the level the summary state sits in.
    The period is 2*pi over the shifted splitting; None when the shift makes
    the two levels degenerate (stationary evolution).
    """
    e0, e1 = H.E0, H.E1
    if e0 != int(e0) or e1 != int(e1):
        msg = f"non-integer energies (E0={e0}, E1={e1}) give an aperiodic evolution"
        if strict:
            raise ValueError(msg)
        warnings.warn(msg, stacklevel=2)
    if shifted_level == 0:
        h_eff = np.diag([e0 + 1.0, float(e1)]).astype(complex)
    elif shifted_level == 1:
        h_eff = np.diag([float(e0), e1 + 1.0]).astype(complex)
    else:
        raise ValueError(f"shifted_level must be 0 or 1, got {shifted_level}")
    delta = (h_eff[1, 1] - h_eff[0, 0]).real
    if delta == 0:
        warnings.warn(
            "shifted Hamiltonian is degenerate (E1 = E0 + 1): the probe is "
            "stationary; prefer E1 >= E0 + 2",
            stacklevel=2,
        )
        return h_eff, None
    return h_eff, 2.0 * math.pi / abs(delta)


def adapt(
    psi: InputAmplitudes,
    H: TwoLevelHamiltonian,
    g: Susceptibility,
    zero_tol: float = _ZERO_AMP_TOL,
) -> AdaptiveDynamics:
    """Pick the dynamics the input state switches on.

    Both amplitudes nonzero: damping branch, whose generator does not depend
    on the amplitude values at all. alpha1 = 0: coherent branch (the UNSAT
    signature). alpha0 = 0: coherent branch with the shift on the excited
    level, flagged trivially SAT since the input weight is already maximal.
    """
    a0, a1 = abs(psi.alpha0), abs(psi.alpha1)
    if a0 * a1 > zero_tol:
        l_star, l_heis = damping_generator(g)
        return DampingDynamics(
            generator=l_star,
            heisenberg=l_heis,
            rates=damping_rates(g),
            gamma=complex(g.gamma),
        )
    if a1 <= zero_tol:
        h_eff, period = effective_hamiltonian(H, shifted_level=0)
        return CoherentDynamics(hamiltonian=h_eff, period=period)
    h_eff, period = effective_hamiltonian(H, shifted_level=1)
    return CoherentDynamics(hamiltonian=h_eff, period=period, trivially_sat=True)


def evolve_adaptive(dyn: AdaptiveDynamics, rho0: DensityMatrix2, t: float) -> DensityMatrix2:
    """Propagate the probe: master equation for the damping branch, exact
    diagonal-unitary conjugation for the coherent one."""
    if isinstance(dyn, DampingDynamics):
        return evolve(dyn.generator, rho0, t)
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    phases = np.exp(-1j * np.diag(dyn.hamiltonian) * t)
    u = np.diag(phases)
    return DensityMatrix2(u @ rho0.matrix @ u.conj().T)


def damping_closed_form(g: Susceptibility, rho0: DensityMatrix2, t: float) -> DensityMatrix2:
    """Analytic solution of the damping master equation; the populations and
    the coherence decouple into plain exponentials."""
    gamma = complex(g.gamma)
    p1 = rho0.p1 * math.exp(-2.0 * gamma.real * t)
    coh = rho0.coherence * cmath.exp((1j * gamma.imag - gamma.real) * t)
    return DensityMatrix2(np.array([[1.0 - p1, coh], [coh.conjugate(), p1]], dtype=complex))


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    p1: float
    coh_abs: float
    coh_phase: float


@dataclass(frozen=True)
class ClassifierConfig:
    """Sampling protocol for the damping-vs-oscillation readout."""

    probe: DensityMatrix2 = field(default_factory=DensityMatrix2.plus)
    horizon: float = 20.0
    dt: float = 0.05
    threshold: float = 0.1

    def __post_init__(self):
        if not self.horizon > 0:
            raise ValueError(f"horizon must be positive, got {self.horizon}")
        if not 0 < self.dt < self.horizon:
            raise ValueError(f"dt={self.dt} must lie in (0, horizon)")
        if not 0 < self.threshold < 1:
            raise ValueError(f"threshold={self.threshold} must lie in (0, 1)")


@dataclass(frozen=True)
class DynVerdict:
    """Classifier outcome plus the sampled evidence."""

    damped: bool
    satisfiable: bool
    tail_mean: float
    fitted_rate: float | None
    trajectory: tuple[TrajectoryPoint, ...]

    def __post_init__(self):
        if self.damped and not self.satisfiable:
            raise ValueError("a damped verdict implies satisfiable")


def fit_exponential_rate(ts, ys, floor: float = 1e-280) -> float:
    """Decay constant from a log-linear least-squares fit of ys ~ exp(-r t)."""
    ts = np.asarray(ts, dtype=float)
    ys = np.asarray(ys, dtype=float)
    mask = ys > floor
    if int(mask.sum()) < 2:
        raise ValueError("need at least two positive samples to fit a rate")
    slope, _ = np.polyfit(ts[mask], np.log(ys[mask]), 1)
    return float(-slope)


def classify(dyn: AdaptiveDynamics, cfg: ClassifierConfig = ClassifierConfig()) -> DynVerdict:
    """Sample the probe and decide: damped (tail of p1 collapses under
    threshold * p1(0)) means SAT; a flat or oscillating tail means UNSAT
    unless the dynamics was already flagged trivially SAT."""
    probe = cfg.probe
    if probe.p1 < 0.25 or abs(probe.coherence) < 0.25:
        raise ValueError(
            "probe must carry both population and coherence signal "
            "(p1 >= 0.25 and |rho01| >= 0.25); use DensityMatrix2.plus()"
        )
    ts = np.arange(0.0, cfg.horizon + cfg.dt / 2, cfg.dt)
    points = []
    for t in ts:
        rho = evolve_adaptive(dyn, probe, float(t))
        coh = rho.coherence
        points.append(
            TrajectoryPoint(
                t=float(t), p1=rho.p1, coh_abs=abs(coh), coh_phase=cmath.phase(coh)
            )
        )
    p1s = np.array([p.p1 for p in points])
    tail = ts >= cfg.horizon / 2
    tail_mean = float(p1s[tail].mean())
    damped = bool(tail_mean < cfg.threshold * float(p1s[0]))
    trivially_sat = isinstance(dyn, CoherentDynamics) and dyn.trivially_sat
    fitted = fit_exponential_rate(ts, p1s) if damped else None
    return DynVerdict(
        damped=damped,
        satisfiable=damped or trivially_sat,
        tail_mean=tail_mean,
        fitted_rate=fitted,
        trajectory=tuple(points),
    )

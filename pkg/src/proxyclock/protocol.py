"""Proxy-qubit clock synchronization protocol.

Alice holds the clock qubit A at x = a, Bob holds B at x = b, and the pair
starts in the singlet.  At t_u Alice couples a degenerate proxy qubit C
(prepared in |+>) to A and ships it to Bob, who measures C at t1 and then B,
both in the +/- basis.  The C/B correlations are fixed by the clock phase
w * t_a at the moment A is disentangled, and the reduction model decides
which t_a that is.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from . import qstate
from .probs import JointCounts, JointProbs
from .qstate import Basis, StateVector
from .rng import trial_uniforms, uniform
from .spacetime import FlatHypersurface, SpacetimeEvent, StaticWorldline, intercept_time

C, A, B = 0, 1, 2


class ConfigError(ValueError):
    """A ProtocolConfig invariant does not hold."""


class AnchorMismatchError(ValueError):
    """Collapse surface is not anchored at Bob's C measurement (b, t1)."""


class CollapseBeforeInteractionError(ValueError):
    """Collapse surface meets Alice's worldline before the proxy interaction."""


@dataclass(frozen=True)
class StandardQM:
    """Unitary evolution plus the Born rule on the full three-qubit state."""

    name = "standard"


@dataclass(frozen=True)
class HypersurfaceCollapse:
    """Reduction along ``surface``; A is disentangled where it meets Alice."""

    surface: FlatHypersurface
    name = "hypersurface"


@dataclass(frozen=True)
class DirectMeasurement:
    """Alice measures A herself at ``t_a``."""

    t_a: float
    name = "direct"

    def __post_init__(self):
        if not math.isfinite(self.t_a):
            raise ConfigError("direct-measurement time t_a must be finite")


ReductionModel = Union[StandardQM, HypersurfaceCollapse, DirectMeasurement]


@dataclass(frozen=True)
class ProtocolConfig:
    omega: float
    a: float
    b: float
    t_u: float
    t1: float
    t2: float
    model: ReductionModel = StandardQM()
    n_trials: int = 1
    seed: int = 0

    def __post_init__(self):
        for name in ("omega", "a", "b", "t_u", "t1", "t2"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")
        if self.omega <= 0:
            raise ConfigError(f"omega > 0 violated (omega={self.omega!r})")
        if self.a == self.b:
            raise ConfigError("a != b violated: Alice and Bob must be at distinct positions")
        if not 0 <= self.t_u <= self.t1 <= self.t2:
            raise ConfigError(
                f"0 <= t_u <= t1 <= t2 violated (t_u={self.t_u!r}, t1={self.t1!r}, t2={self.t2!r})"
            )
        if int(self.n_trials) != self.n_trials or self.n_trials < 1:
            raise ConfigError(f"n_trials >= 1 violated (n_trials={self.n_trials!r})")
        if int(self.seed) != self.seed or not 0 <= self.seed < 1 << 64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer (seed={self.seed!r})")
        if not isinstance(self.model, (StandardQM, HypersurfaceCollapse, DirectMeasurement)):
            raise ConfigError(f"unknown reduction model {self.model!r}")

    @property
    def bob_event(self) -> SpacetimeEvent:
        """Bob's measurement of C, the anchor of every candidate surface."""
        return SpacetimeEvent(self.b, self.t1)

    @property
    def alice(self) -> StaticWorldline:
        return StaticWorldline(self.a)

    def with_surface(self, v: float) -> ProtocolConfig:
        """Same experiment under hypersurface collapse at simultaneity velocity ``v``."""
        return self.replace(model=HypersurfaceCollapse(FlatHypersurface(self.bob_event, v)))

    def replace(self, **changes) -> ProtocolConfig:
        return dataclasses.replace(self, **changes)


class TrialRecord(NamedTuple):
    index: int
    c_outcome: int
    b_outcome: int
    t_collapse: float


def analytic_joint(omega: float, t_a: float) -> JointProbs:
    """C/B outcome probabilities for clock phase w*t_a.

    P(+,+) = P(-,-) = sin^2(w t_a)/2 and P(+,-) = P(-,+) = cos^2(w t_a)/2.
    """
    if not (math.isfinite(omega) and math.isfinite(t_a)):
        raise ValueError("omega and t_a must be finite")
    s2 = math.sin(omega * t_a) ** 2
    same = 0.5 * s2
    diff = 0.5 - same
    return JointProbs(same, diff, diff, same)


def effective_collapse_time(config: ProtocolConfig) -> float:
    model = config.model
    if isinstance(model, StandardQM):
        return config.t_u
    if isinstance(model, DirectMeasurement):
        return model.t_a
    surface = model.surface
    if surface.anchor != config.bob_event:
        raise AnchorMismatchError(
            f"surface anchor ({surface.anchor.x}, {surface.anchor.t}) != (b, t1) = ({config.b}, {config.t1})"
        )
    t_a = intercept_time(surface, config.alice)
    if t_a < config.t_u:
        raise CollapseBeforeInteractionError(
            f"surface meets Alice at t_a={t_a!r}, before the proxy interaction t_u={config.t_u!r}"
        )
    return t_a


def build_state(config: ProtocolConfig, t: float) -> StateVector:
    """First-principles (C, A, B) state at time ``t`` in [0, t1]."""
    if not 0 <= t <= config.t1:
        raise ValueError(f"t={t!r} outside [0, t1={config.t1!r}]")
    state = qstate.ket("+") @ qstate.singlet()
    first = min(t, config.t_u)
    state = qstate.apply_single(state, A, qstate.clock_evolution(config.omega, first))
    if t >= config.t_u:
        state = qstate.proxy_interaction(state)
        state = qstate.apply_single(state, A, qstate.clock_evolution(config.omega, t - config.t_u))
    return state


def oracle_joint(config: ProtocolConfig) -> JointProbs:
    """Exact standard-QM C/B distribution from the full state at t1."""
    return qstate.joint_distribution(build_state(config, config.t1), C, B, Basis.PLUS_MINUS)


def model_joint(config: ProtocolConfig) -> JointProbs:
    return analytic_joint(config.omega, effective_collapse_time(config))


def _b_plus_given_c(probs: JointProbs) -> tuple[float, float]:
    """P(B=+ | C=+) and P(B=+ | C=-)."""
    c_plus, c_minus = probs.first_marginal
    return probs.p_pp / c_plus, probs.p_mp / c_minus


def _sample(config: ProtocolConfig, start: int, stop: int, stream: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Outcome arrays (c, b) in +1/-1 for trials start..stop-1.

    Draw 0 picks C (+ iff u0 < 1/2), draw 1 picks B (+ iff u1 < P(B=+ | C)),
    the same thresholds ``qstate.measure`` applies to the full state.
    """
    probs = model_joint(config)
    p_plus_c, p_plus_m = _b_plus_given_c(probs)
    u = trial_uniforms(config.seed, start, stop, stream)
    c_plus = u[:, 0] < probs.first_marginal[0]
    threshold = np.where(c_plus, p_plus_c, p_plus_m)
    b_plus = u[:, 1] < threshold
    c = np.where(c_plus, 1, -1).astype(np.int8)
    b = np.where(b_plus, 1, -1).astype(np.int8)
    return c, b


def run_trial(config: ProtocolConfig, trial_index: int) -> TrialRecord:
    if not 0 <= trial_index < config.n_trials:
        raise IndexError(f"trial {trial_index} outside [0, {config.n_trials})")
    t_a = effective_collapse_time(config)
    c, b = _sample(config, trial_index, trial_index + 1)
    return TrialRecord(trial_index, int(c[0]), int(b[0]), t_a)


def run_trial_statevector(config: ProtocolConfig, trial_index: int) -> TrialRecord:
    """Standard-QM trial by sequential measurement of C then B on the state at t1.

    Shares the per-trial draws with :func:`run_trial`, so for StandardQM the
    two paths agree trial by trial, not only in distribution.
    """
    if not 0 <= trial_index < config.n_trials:
        raise IndexError(f"trial {trial_index} outside [0, {config.n_trials})")
    state = build_state(config, config.t1)
    c, state, _ = qstate.measure(state, C, Basis.PLUS_MINUS, uniform(config.seed, trial_index, 0))
    b, _, _ = qstate.measure(state, B, Basis.PLUS_MINUS, uniform(config.seed, trial_index, 1))
    return TrialRecord(trial_index, c, b, config.t_u)


def sample_outcomes(config: ProtocolConfig, workers: int = 1, stream: int = 0,
                    chunk: int = 1 << 16) -> tuple[np.ndarray, np.ndarray]:
    """All ``n_trials`` outcomes as +1/-1 arrays, optionally computed in parallel chunks."""
    n = config.n_trials
    effective_collapse_time(config)  # surface errors before any work
    if workers <= 1 or n <= chunk:
        return _sample(config, 0, n, stream)
    bounds = [(lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda r: _sample(config, r[0], r[1], stream), bounds))
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def run_trials(config: ProtocolConfig, workers: int = 1) -> tuple[list[TrialRecord], JointCounts]:
    t_a = effective_collapse_time(config)
    c, b = sample_outcomes(config, workers=workers)
    records = [TrialRecord(i, ci, bi, t_a) for i, (ci, bi) in enumerate(zip(c.tolist(), b.tolist()))]
    return records, JointCounts.from_outcomes(c, b)


def run_counts(config: ProtocolConfig, workers: int = 1, stream: int = 0) -> JointCounts:
    """Outcome tallies without materializing per-trial records."""
    return JointCounts.from_outcomes(*sample_outcomes(config, workers=workers, stream=stream))

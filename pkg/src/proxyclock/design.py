"""Two-surface discrimination experiment: sample size and Monte Carlo power."""

from __future__ import annotations

from dataclasses import dataclass

from .probs import JointProbs
from .protocol import ProtocolConfig, effective_collapse_time, model_joint, run_counts
from .stats import likelihood_ratio_decision, required_samples


@dataclass(frozen=True)
class DistinguishReport:
    v0: float
    v1: float
    t_a0: float
    t_a1: float
    h0: JointProbs
    h1: JointProbs
    alpha: float
    power: float
    n_required: int
    repetitions: int
    h1_selected_under_h1: int
    h0_selected_under_h0: int

    @property
    def empirical_power(self) -> float:
        return self.h1_selected_under_h1 / self.repetitions

    @property
    def empirical_h0_retention(self) -> float:
        return self.h0_selected_under_h0 / self.repetitions


def lr_hits(config: ProtocolConfig, h0: JointProbs, h1: JointProbs, truth: str,
            repetitions: int, workers: int = 1) -> int:
    """How many of ``repetitions`` runs of ``config`` the likelihood-ratio rule labels ``truth``.

    Repetition r draws from keyed stream r + 1; stream 0 is left to ordinary runs.
    """
    hits = 0
    for r in range(repetitions):
        counts = run_counts(config, workers=workers, stream=r + 1)
        hits += likelihood_ratio_decision(counts, h0, h1).chosen == truth
    return hits


def distinguish(config: ProtocolConfig, v0: float, v1: float, alpha: float = 0.05,
                power: float = 0.90, repetitions: int = 100) -> DistinguishReport:
    """Compare collapse surfaces through (b, t1) with simultaneity velocities v0 and v1."""
    cfg0 = config.with_surface(v0)
    cfg1 = config.with_surface(v1)
    t_a0 = effective_collapse_time(cfg0)
    t_a1 = effective_collapse_time(cfg1)
    h0 = model_joint(cfg0)
    h1 = model_joint(cfg1)
    n = required_samples(h0.p_same, h1.p_same, alpha, power)
    under_h1 = lr_hits(cfg1.replace(n_trials=n), h0, h1, "h1", repetitions)
    under_h0 = lr_hits(cfg0.replace(n_trials=n), h0, h1, "h0", repetitions)
    return DistinguishReport(v0, v1, t_a0, t_a1, h0, h1, alpha, power, n,
                             repetitions, under_h1, under_h0)

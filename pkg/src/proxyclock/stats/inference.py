"""Estimation and testing on C/B outcome tallies.

Only the fraction of equal outcomes carries information about the clock
phase: P(same) = sin^2(theta) with theta = omega * t_a.  Since sin^2 has
period pi and is symmetric about pi/2, theta is identifiable only after
folding into [0, pi/2]; :func:`phase_preimages` lists the unfolded
candidates inside a time window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from ..probs import JointCounts, JointProbs
from .special import chi2_sf, norm_ppf

HALF_PI = 0.5 * math.pi
MIN_EXPECTED = 5.0
# expected probabilities at or below this count as structural zeros
ZERO_PROB = 1e-12


class UnderSampledError(ValueError):
    """A non-empty expected cell has fewer than five expected counts."""


def _require_total(counts: JointCounts) -> int:
    n = counts.total
    if n < 1:
        raise ValueError("counts are empty (total = 0)")
    return n


def empirical(counts: JointCounts) -> JointProbs:
    n = _require_total(counts)
    return JointProbs(*(c / n for c in counts))


def wilson_interval(successes: int, n: int, confidence: float) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must lie in (0, 1), got {confidence!r}")
    z = norm_ppf(0.5 + 0.5 * confidence)
    f = successes / n
    z2n = z * z / n
    centre = (f + 0.5 * z2n) / (1.0 + z2n)
    half = z / (1.0 + z2n) * math.sqrt(f * (1.0 - f) / n + 0.25 * z2n / n)
    return max(0.0, centre - half), min(1.0, centre + half)


def _fold(f: float) -> float:
    return math.asin(math.sqrt(min(1.0, max(0.0, f))))


@dataclass(frozen=True)
class PhaseEstimate:
    theta_hat: float
    ci_low: float
    ci_high: float
    n: int
    confidence: float
    f_same: float

    @property
    def degenerate(self) -> bool:
        """All outcomes equal or all opposite, so the estimate sits on a fold boundary."""
        return self.f_same in (0.0, 1.0)

    def contains(self, theta: float) -> bool:
        return self.ci_low <= theta <= self.ci_high


def mle_phase(counts: JointCounts, confidence: float = 0.95) -> PhaseEstimate:
    """Maximum-likelihood folded phase arcsin(sqrt(f_same)) with a Wilson-based interval."""
    n = _require_total(counts)
    f = counts.n_same / n
    lo, hi = wilson_interval(counts.n_same, n, confidence)
    theta = _fold(f)
    return PhaseEstimate(
        theta_hat=theta,
        ci_low=min(_fold(lo), theta),
        ci_high=max(_fold(hi), theta),
        n=n,
        confidence=confidence,
        f_same=f,
    )


def phase_preimages(theta: float, omega: float, t_lo: float, t_hi: float) -> list[float]:
    """All t in [t_lo, t_hi] with sin^2(omega t) = sin^2(theta)."""
    if omega <= 0:
        raise ValueError("omega must be positive")
    if t_lo > t_hi:
        raise ValueError("empty time window")
    found: list[float] = []
    k_lo = math.floor((omega * t_lo - HALF_PI) / math.pi) - 1
    k_hi = math.ceil((omega * t_hi + HALF_PI) / math.pi) + 1
    for k in range(k_lo, k_hi + 1):
        for phase in (k * math.pi + theta, k * math.pi - theta):
            t = phase / omega
            if t_lo <= t <= t_hi and not any(math.isclose(t, u, rel_tol=1e-12, abs_tol=1e-12) for u in found):
                found.append(t)
    return sorted(found)


class ChiSquareResult(NamedTuple):
    stat: float
    dof: int
    p_value: float


def chi_square_gof(counts: JointCounts, expected: JointProbs) -> ChiSquareResult:
    """Pearson goodness of fit of ``counts`` against ``expected``.

    Cells with (numerically) zero expected probability are left out of the
    statistic and the degrees of freedom; any observation in such a cell
    makes the data impossible under ``expected`` and gives p = 0.
    """
    n = _require_total(counts)
    live = [(o, p) for o, p in zip(counts, expected) if p > ZERO_PROB]
    dof = len(live) - 1
    if any(o > 0 for o, p in zip(counts, expected) if p <= ZERO_PROB):
        return ChiSquareResult(math.inf, dof, 0.0)
    for o, p in live:
        if n * p < MIN_EXPECTED:
            raise UnderSampledError(f"expected count {n * p:.3g} < {MIN_EXPECTED:g}; more trials needed")
    # renormalize over the live cells so dropped mass below ZERO_PROB cannot bias the statistic
    mass = math.fsum(p for _, p in live)
    stat = math.fsum((o - n * p / mass) ** 2 / (n * p / mass) for o, p in live)
    if dof == 0:
        return ChiSquareResult(stat, 0, 1.0)
    return ChiSquareResult(stat, dof, chi2_sf(stat, dof))


def log_likelihood(counts: JointCounts, probs: JointProbs) -> float:
    """Multinomial log-likelihood up to the combinatorial constant; -inf if impossible."""
    total = 0.0
    for n, p in zip(counts, probs):
        if n == 0:
            continue
        if p <= 0.0:
            return -math.inf
        total += n * math.log(p)
    return total


class Decision(NamedTuple):
    chosen: str
    log_lr: float


def likelihood_ratio_decision(counts: JointCounts, h0: JointProbs, h1: JointProbs) -> Decision:
    """Pick h1 iff its log-likelihood strictly exceeds that of h0."""
    if h0.as_tuple() == h1.as_tuple():
        raise ValueError("h0 and h1 are identical; nothing to decide")
    ll0 = log_likelihood(counts, h0)
    ll1 = log_likelihood(counts, h1)
    if ll0 == ll1:
        # covers both impossible (-inf) as well as exact ties
        return Decision("h0", 0.0)
    log_lr = ll1 - ll0
    return Decision("h1" if log_lr > 0 else "h0", log_lr)


def required_samples(p0: float, p1: float, alpha: float = 0.05, power: float = 0.90) -> int:
    """Trials needed for a one-sided test of p0 against p1 at level ``alpha``.

    n = ceil(((z_{1-alpha} sqrt(p0 q0) + z_power sqrt(p1 q1)) / |p1 - p0|)^2),
    evaluated in double precision with no intermediate rounding.
    """
    for name, p in (("p0", p0), ("p1", p1)):
        if not 0.0 < p < 1.0:
            raise ValueError(f"{name}={p!r} must lie strictly inside (0, 1)")
    if p0 == p1:
        raise ValueError("p0 == p1: hypotheses cannot be distinguished")
    for name, level in (("alpha", alpha), ("power", power)):
        if not 0.0 < level < 1.0:
            raise ValueError(f"{name}={level!r} must lie in (0, 1)")
    z_alpha = norm_ppf(1.0 - alpha)
    z_power = norm_ppf(power)
    root = (z_alpha * math.sqrt(p0 * (1.0 - p0)) + z_power * math.sqrt(p1 * (1.0 - p1))) / abs(p1 - p0)
    return max(1, math.ceil(root * root))

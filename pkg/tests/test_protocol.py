import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from proxyclock import qstate
from proxyclock.probs import JointCounts
from proxyclock.protocol import (
    AnchorMismatchError,
    CollapseBeforeInteractionError,
    ConfigError,
    DirectMeasurement,
    HypersurfaceCollapse,
    ProtocolConfig,
    StandardQM,
    analytic_joint,
    build_state,
    effective_collapse_time,
    model_joint,
    oracle_joint,
    run_trial,
    run_trial_statevector,
    run_trials,
)
from proxyclock.spacetime import FlatHypersurface, GeometryError, SpacetimeEvent, intercept_bounds

R = 1 / math.sqrt(2)
PLUS = np.array([R, R])
MINUS = np.array([R, -R])

# geometry used throughout: Alice at 0, Bob at 4, Bob measures C at t1 = 10
BASE = ProtocolConfig(omega=0.1, a=0.0, b=4.0, t_u=3.0, t1=10.0, t2=11.0, n_trials=1000, seed=1)


def psi(sign, omega, t):
    """Conditional B states: psi+ = i sin|+> - cos|->, psi- = -i sin|-> + cos|+>."""
    s, c = math.sin(omega * t), math.cos(omega * t)
    if sign > 0:
        return 1j * s * PLUS - c * MINUS
    return -1j * s * MINUS + c * PLUS


# --- analytic -----------------------------------------------------------------------

@pytest.mark.parametrize("phase,expected", [
    (0.0, (0, 0.5, 0.5, 0)),
    (math.pi / 4, (0.25, 0.25, 0.25, 0.25)),
    (math.pi / 2, (0.5, 0, 0, 0.5)),
])
def test_analytic_examples(phase, expected):
    assert analytic_joint(1.0, phase).as_tuple() == pytest.approx(expected, abs=1e-15)


def test_analytic_rejects_non_finite():
    with pytest.raises(ValueError):
        analytic_joint(1.0, math.inf)


# --- collapse time -----------------------------------------------------------------------

def test_collapse_time_per_model():
    assert effective_collapse_time(BASE) == 3.0
    assert effective_collapse_time(BASE.with_surface(0.0)) == 10.0
    assert effective_collapse_time(BASE.with_surface(0.5)) == pytest.approx(8.0, abs=1e-12)
    assert effective_collapse_time(BASE.replace(model=DirectMeasurement(4.25))) == 4.25


def test_collapse_anchor_must_be_bob_event():
    off = HypersurfaceCollapse(FlatHypersurface(SpacetimeEvent(4.0, 9.0), 0.0))
    with pytest.raises(AnchorMismatchError):
        effective_collapse_time(BASE.replace(model=off))


def test_collapse_before_proxy_interaction_rejected():
    # v = 0.9 meets Alice at 10 - 3.6 = 6.4 < t_u = 7
    with pytest.raises(CollapseBeforeInteractionError):
        effective_collapse_time(BASE.replace(t_u=7.0).with_surface(0.9))


def test_superluminal_surface_rejected():
    with pytest.raises(GeometryError):
        BASE.with_surface(1.0)


@pytest.mark.parametrize("changes", [
    dict(a=4.0), dict(omega=0.0), dict(t_u=-1.0), dict(t_u=11.0), dict(t2=9.0),
    dict(n_trials=0), dict(seed=-1), dict(omega=math.nan),
])
def test_config_invariants(changes):
    with pytest.raises(ConfigError):
        BASE.replace(**changes)


# --- state construction -----------------------------------------------------------------

def test_build_state_initial():
    expected = qstate.ket("+") @ qstate.singlet()
    assert build_state(BASE, 0.0).allclose(expected, atol=1e-15)


@pytest.mark.parametrize("t_u", [0.0, 1.7, 6.0, 10.0])
def test_build_state_after_interaction(t_u):
    cfg = BASE.replace(t_u=t_u)
    w = cfg.omega
    # first-principles expansion: (|++>|psi+> + |-->|psi->)/sqrt2
    upsilon = R * (np.kron(np.kron(PLUS, PLUS), psi(1, w, t_u))
                   + np.kron(np.kron(MINUS, MINUS), psi(-1, w, t_u)))
    state = build_state(cfg, t_u)
    np.testing.assert_allclose(state.amps, upsilon, atol=1e-14)

    # the opposite relative sign differs only by a relative phase that no C/B
    # +/- statistic can see
    flipped = R * (np.kron(np.kron(PLUS, PLUS), psi(1, w, t_u))
                   - np.kron(np.kron(MINUS, MINUS), psi(-1, w, t_u)))
    ours = qstate.joint_distribution(state, 0, 2, qstate.Basis.PLUS_MINUS)
    theirs = qstate.joint_distribution(qstate.StateVector(flipped), 0, 2, qstate.Basis.PLUS_MINUS)
    assert ours.tv_distance(theirs) < 1e-14


def test_build_state_rejects_out_of_range():
    with pytest.raises(ValueError):
        build_state(BASE, 10.5)
    with pytest.raises(ValueError):
        build_state(BASE, -0.1)


def test_cb_distribution_frozen_after_interaction():
    ref = qstate.joint_distribution(build_state(BASE, BASE.t_u), 0, 2, qstate.Basis.PLUS_MINUS)
    for t in np.linspace(BASE.t_u, BASE.t1, 25):
        got = qstate.joint_distribution(build_state(BASE, t), 0, 2, qstate.Basis.PLUS_MINUS)
        assert got.tv_distance(ref) < 1e-12


def test_cb_uncorrelated_before_interaction():
    got = qstate.joint_distribution(build_state(BASE.replace(t_u=8.0), 5.0), 0, 2, qstate.Basis.PLUS_MINUS)
    # C is still |+>: always +, B unbiased
    assert got.as_tuple() == pytest.approx((0.5, 0.5, 0, 0), abs=1e-12)


# --- oracle vs analytic -----------------------------------------------------------------------

@pytest.mark.parametrize("k", range(0, 73, 6))
def test_oracle_matches_analytic_on_grid(k):
    omega = 1.3
    t_u = k * math.pi / 36 / omega
    cfg = ProtocolConfig(omega=omega, a=0, b=4, t_u=t_u, t1=t_u + 2.0, t2=t_u + 3.0)
    assert oracle_joint(cfg).tv_distance(analytic_joint(omega, t_u)) < 1e-12


def test_oracle_quarter_phase():
    cfg = BASE.replace(omega=1.0, t_u=math.pi / 4)
    assert oracle_joint(cfg).as_tuple() == pytest.approx((0.25,) * 4, abs=1e-12)


def test_oracle_ignores_t1_and_model():
    ref = oracle_joint(BASE)
    for t1 in (3.0, 5.5, 10.0, 40.0):
        assert oracle_joint(BASE.replace(t1=t1, t2=t1 + 1)).tv_distance(ref) < 1e-12
    for v in (-0.9, 0.0, 0.4):
        assert oracle_joint(BASE.with_surface(v)).tv_distance(ref) < 1e-12


def test_model_joint_examples():
    assert model_joint(BASE).tv_distance(oracle_joint(BASE)) < 1e-12
    assert model_joint(BASE.with_surface(0.0)) == analytic_joint(0.1, 10.0)
    j = model_joint(BASE.with_surface(0.5))
    assert j.p_same == pytest.approx(0.514600, abs=5e-7)
    assert j.p_pp == j.p_mm


def test_direct_at_interaction_time_equals_standard():
    direct = BASE.replace(model=DirectMeasurement(BASE.t_u))
    assert model_joint(direct) == model_joint(BASE)
    assert model_joint(direct).tv_distance(oracle_joint(BASE)) < 1e-12


models = st.one_of(
    st.just(StandardQM()),
    st.floats(-0.99, 0.99).map(lambda v: ("v", v)),
    st.floats(0, 50).map(DirectMeasurement),
)


@given(st.floats(0.01, 5.0), models)
def test_no_signaling_and_symmetry(omega, model):
    cfg = BASE.replace(omega=omega, t_u=0.0)
    cfg = cfg.with_surface(model[1]) if isinstance(model, tuple) else cfg.replace(model=model)
    j = model_joint(cfg)
    assert j.first_marginal == pytest.approx((0.5, 0.5), abs=1e-15)
    assert j.second_marginal == pytest.approx((0.5, 0.5), abs=1e-15)
    assert j.p_pp == j.p_mm and j.p_pm == j.p_mp


@given(st.floats(-0.99, 0.99), st.floats(-0.99, 0.99))
def test_hypersurface_sensitivity(v, w):
    cfg = BASE.replace(t_u=0.0)
    t_v = effective_collapse_time(cfg.with_surface(v))
    t_w = effective_collapse_time(cfg.with_surface(w))
    tv = model_joint(cfg.with_surface(v)).tv_distance(model_joint(cfg.with_surface(w)))
    expected = abs(math.sin(cfg.omega * t_v) ** 2 - math.sin(cfg.omega * t_w) ** 2)
    assert tv == pytest.approx(expected, abs=1e-12)


def test_sensitivity_is_positive_for_reference_geometry_surfaces():
    h1 = model_joint(BASE.with_surface(0.0))
    h2 = model_joint(BASE.with_surface(0.5))
    assert h1.tv_distance(h2) > 0.19


# --- trials -----------------------------------------------------------------------

def test_zero_phase_always_anticorrelated():
    cfg = BASE.replace(t_u=0.0, n_trials=2000)
    records, counts = run_trials(cfg)
    assert all(r.b_outcome != r.c_outcome for r in records)
    assert counts.n_pp == counts.n_mm == 0


def test_run_trial_deterministic_and_matches_batch():
    cfg = BASE.with_surface(0.5).replace(n_trials=300, seed=12345)
    records, _ = run_trials(cfg)
    for i in (0, 1, 57, 299):
        assert run_trial(cfg, i) == records[i] == run_trial(cfg, i)
        assert records[i].t_collapse == pytest.approx(8.0, abs=1e-12)


def test_run_trial_index_range():
    with pytest.raises(IndexError):
        run_trial(BASE, BASE.n_trials)


def test_collapse_times_inside_bounds():
    lo, hi = intercept_bounds(BASE.bob_event, BASE.alice)
    for v in np.linspace(-0.95, 0.95, 9):
        records, _ = run_trials(BASE.replace(t_u=0.0, n_trials=3).with_surface(v))
        assert all(lo < r.t_collapse < hi for r in records)


def test_c_marginal_half_for_every_model():
    n = 40000
    sigma = math.sqrt(n * 0.25)
    for cfg in (BASE, BASE.with_surface(0.5), BASE.replace(model=DirectMeasurement(7.0))):
        _, counts = run_trials(cfg.replace(n_trials=n))
        assert abs(counts.n_pp + counts.n_pm - n / 2) < 4 * sigma


def test_cells_within_binomial_bounds():
    n = 10**5
    cfg = BASE.replace(omega=1.0, t_u=math.pi / 4, n_trials=n, seed=77)
    records, counts = run_trials(cfg)
    sigma = math.sqrt(n * 0.25 * 0.75)
    assert len(records) == counts.total == n
    for c in counts:
        assert abs(c - n / 4) < 4 * sigma


def test_single_trial_run():
    records, counts = run_trials(BASE.replace(n_trials=1))
    assert len(records) == 1 and counts.total == 1


def test_runs_repeat_and_parallel_matches_serial():
    cfg = BASE.with_surface(0.3).replace(n_trials=200_000, seed=2**63 + 5)
    records, counts = run_trials(cfg)
    again, counts_again = run_trials(cfg, workers=4)
    assert counts == counts_again
    assert records == again


@settings(max_examples=20, deadline=None)
@given(st.floats(0.0, 10.0), st.integers(0, 2**64 - 1))
def test_statevector_path_agrees_with_sampler(t_u, seed):
    cfg = BASE.replace(omega=0.37, t_u=t_u, seed=seed, n_trials=40)
    for i in range(cfg.n_trials):
        assert run_trial_statevector(cfg, i) == run_trial(cfg, i)


def test_statevector_path_distribution():
    cfg = BASE.replace(omega=1.0, t_u=0.6, n_trials=4000, seed=3)
    c, b = zip(*[(r.c_outcome, r.b_outcome) for r in map(lambda i: run_trial_statevector(cfg, i), range(cfg.n_trials))])
    counts = JointCounts.from_outcomes(c, b)
    exact = oracle_joint(cfg)
    for got, p in zip(counts, exact):
        assert abs(got - cfg.n_trials * p) < 4 * math.sqrt(cfg.n_trials * p * (1 - p))

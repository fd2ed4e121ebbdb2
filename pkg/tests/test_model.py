import numpy as np
import pytest
from hypothesis import given, strategies as st

from robust_contracts import (
    Instance,
    Membership,
    delta_best_responses,
    gen_tight_lb,
    psi,
    validate_instance,
    worst_delta_response,
)
from robust_contracts.model import (
    agent_utility,
    batch_worst_delta_response,
    best_responses,
    optimistic_best_response,
    principal_utility,
    response_report,
)

from . import oracles
from .strategies import contracts, deltas, instances


def test_validate_family2_has_opt_out(family2):
    rep = validate_instance(family2)
    assert rep.ok and not rep.warnings
    assert family2.opt_out_actions() == [0]


def test_validate_row_not_stochastic():
    inst = Instance([[0.5, 0.4], [0.0, 1.0]], [0.0, 1.0], [0.0, 0.0])
    rep = validate_instance(inst)
    assert not rep.ok
    assert any("row 0 not stochastic" in e for e in rep.errors)


def test_validate_warns_without_opt_out():
    inst = Instance([[1.0, 0.0], [0.0, 1.0]], [0.0, 1.0], [0.5, 0.5])
    rep = validate_instance(inst)
    assert rep.ok
    assert any("no opt-out action" in w for w in rep.warnings)


def test_validate_dimension_mismatch():
    rep = validate_instance(Instance([[1.0, 0.0]], [0.0, 1.0, 0.0], [0.0]))
    assert any("dimension mismatch" in e for e in rep.errors)


def test_agent_utility_examples(family2):
    assert agent_utility(family2, [0.0, 0.3], 1) == pytest.approx(0.3)
    assert agent_utility(family2, [0.0, 0.0], 0) == 0.0
    inst = Instance([[0.5, 0.5]], [1.0, 0.0], [0.1])
    assert agent_utility(inst, [0.2, 0.4], 0) == pytest.approx(0.2)


def test_principal_utility_examples(family2):
    assert principal_utility(family2, [0.0, 0.25], 1) == pytest.approx(0.75)
    inst = Instance([[0.5, 0.5]], [1.0, 0.0], [0.0])
    assert principal_utility(inst, [0.0, 0.0], 0) == pytest.approx(0.5)


@given(contracts(2))
def test_opt_out_principal_utility_nonpositive(p):
    inst = Instance([[1.0, 0.0], [0.0, 1.0]], [0.0, 1.0], [0.0, 0.0])
    assert principal_utility(inst, p, 0) <= 0.0


def test_boundary_action_excluded(family2):
    # a1 sits exactly delta below a2: strict membership drops it
    assert delta_best_responses(family2, [0.0, 0.25], 0.25) == {1}
    assert delta_best_responses(family2, [0.0, 0.25], 0.25, Membership.PESSIMISTIC) == {0, 1}


def test_all_equal_utilities_give_all_actions():
    inst = Instance(np.eye(3), [0.1, 0.5, 0.9], [0.0, 0.0, 0.0])
    assert delta_best_responses(inst, [0.0, 0.0, 0.0], 0.1) == {0, 1, 2}


def test_gap_below_delta(family2):
    assert delta_best_responses(family2, [0.0, 0.1], 0.25) == {0, 1}


def test_worst_delta_response_examples(family2):
    a, v = worst_delta_response(family2, [0.0, 0.25], 0.25)
    assert a == 1 and v == pytest.approx(0.75)
    assert worst_delta_response(family2, [0.0, 0.0], 0.25) == (0, 0.0)


def test_worst_delta_response_matches_exhaustive_scan():
    rng = np.random.default_rng(11)
    for _ in range(50):
        F = rng.random((3, 2))
        F /= F.sum(axis=1, keepdims=True)
        inst = Instance(F, rng.random(2), rng.random(3) * 0.3)
        p = rng.random(2)
        a, v = worst_delta_response(inst, p, 0.2)
        ra, rv = oracles.worst_response(F.tolist(), inst.r.tolist(), inst.c.tolist(), p.tolist(), 0.2)
        assert a == ra and v == pytest.approx(rv, abs=1e-12)


def test_optimistic_examples():
    fam1 = gen_tight_lb(0.25, 10)
    assert optimistic_best_response(fam1, np.zeros(2)) == fam1.n - 1
    assert optimistic_best_response(Instance([[0.3, 0.7]], [1.0, 0.0], [0.0]), [0.5, 0.5]) == 0
    inst = Instance(np.eye(2), [1.0, 0.0], [0.0, 0.0])
    # action 1 pays the principal nothing but is the strict maximizer
    assert optimistic_best_response(inst, [0.0, 0.01]) == 1


@given(instances(), deltas, st.data())
def test_response_report_invariants(inst, delta, data):
    p = data.draw(contracts(inst.m))
    rep = response_report(inst, p, delta)
    assert rep.optimistic_action in rep.best_set
    assert rep.worst_delta_action in rep.delta_set
    assert rep.best_set <= rep.delta_set
    assert rep.psi == principal_utility(inst, p, rep.worst_delta_action)


@given(instances(), deltas, deltas, st.data())
def test_delta_sets_nested(inst, d1, d2, data):
    p = data.draw(contracts(inst.m))
    lo, hi = sorted((d1, d2))
    assert delta_best_responses(inst, p, lo) <= delta_best_responses(inst, p, hi)


@given(instances(), deltas, st.data())
def test_psi_is_min_over_delta_set(inst, delta, data):
    p = data.draw(contracts(inst.m))
    value = psi(inst, p, delta)
    for a in delta_best_responses(inst, p, delta):
        assert value <= principal_utility(inst, p, a)


@given(instances(), deltas, st.data())
def test_batch_matches_scalar(inst, delta, data):
    P = np.array([data.draw(contracts(inst.m)) for _ in range(4)])
    a, v = batch_worst_delta_response(inst.F, inst.r, inst.c, P, delta)
    for k in range(4):
        # gemm and gemv may round differently; the values must still agree
        assert float(v[k]) == pytest.approx(psi(inst, P[k], delta), abs=1e-12)


def test_best_set_inside_delta_set_at_tiny_delta(family2):
    assert best_responses(family2, [0.0, 0.0]) == {0, 1}
    assert best_responses(family2, [0.0, 0.0]) <= delta_best_responses(family2, [0.0, 0.0], 1e-6)


def test_rejects_bad_inputs(family2):
    with pytest.raises(ValueError):
        psi(family2, [0.0, 0.1], 0.0)
    with pytest.raises(ValueError):
        psi(family2, [0.0, 0.1], 1.0)
    with pytest.raises(ValueError):
        psi(family2, [-0.1, 0.1], 0.2)
    with pytest.raises(ValueError):
        psi(family2, [0.1, 0.1, 0.1], 0.2)

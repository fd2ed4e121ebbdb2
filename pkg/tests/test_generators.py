import math

import numpy as np
import pytest

from robust_contracts import gen_random, gen_tight_lb, gen_tight_ub, social_welfare, solve_robust, validate_instance
from robust_contracts.generators import TightLbParams, kappa


def test_kappa():
    # sqrt(0.25) == 1/2 exactly, so i = 2 fails the strict inequality
    assert kappa(0.25) == 3
    assert kappa(0.5) == 4
    assert kappa(0.01) == 2


def test_tight_lb_shape():
    inst = gen_tight_lb(0.25, 10)
    assert inst.n == 21 and inst.m == 2
    assert inst.F[20, 0] == 1.0
    assert np.all(inst.F[:2, 0] == 0.0)
    assert inst.r.tolist() == [1.0, 0.0] and np.all(inst.c == 0.0)


@pytest.mark.parametrize("delta,n", [(0.25, 10), (0.1, 5), (0.5, 8), (0.04, 30)])
def test_tight_lb_rows_valid(delta, n):
    rep = validate_instance(gen_tight_lb(delta, n))
    assert rep.ok


@pytest.mark.parametrize("delta,n", [(0.25, 10), (0.5, 8)])
def test_gamma_non_increasing(delta, n):
    params = TightLbParams(delta, n)
    gammas = [params.gamma(i) for i in range(params.kappa, 2 * n + 2)]
    assert all(a >= b for a, b in zip(gammas, gammas[1:]))
    assert all(0.0 <= 1 - g * math.sqrt(delta) <= 1.0 for g in gammas)


def test_tight_lb_rejects_small_n():
    with pytest.raises(ValueError):
        gen_tight_lb(0.25, 3)


def test_tight_ub():
    inst = gen_tight_ub(0.25)
    assert solve_robust(inst, 0.25).psi == pytest.approx(0.75)
    assert social_welfare(inst) == 1.0
    assert 0 in inst.opt_out_actions()


def test_random_deterministic():
    assert gen_random(5, 3, 42) == gen_random(5, 3, 42)
    assert not gen_random(5, 3, 42) == gen_random(5, 3, 43)


def test_random_opt_out_no_warning():
    for seed in range(20):
        rep = validate_instance(gen_random(4, 3, seed, with_opt_out=True))
        assert rep.ok and not rep.warnings


def test_random_rows_normalized():
    inst = gen_random(4, 2, 7)
    assert np.all(np.abs(inst.F.sum(axis=1) - 1.0) <= 1e-12)
    assert np.any(inst.c == 0.0)

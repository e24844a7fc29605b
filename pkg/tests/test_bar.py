import pytest
from hypothesis import given, strategies as st

from dgaforge.bar import (AugmentationModule, HochschildChains, TruncationModule, bar_tor,
                          bialgebra_primitivity_check, center_vanishing_check, check_module,
                          hochschild_cohomology, hochschild_homology, is_power_of, lucas_binomial_mod,
                          verify_center_certificate)
from dgaforge.complexes import BudgetExceeded
from dgaforge.core import DGAError, base_change, d_vec, formal_truncated_polynomial
from dgaforge.tower import trivial_algebra_model
from conftest import tower


@pytest.mark.parametrize("m,n", [(2, 1), (3, 1), (2, 2)])
def test_hochschild_d_squared(m, n):
    H = HochschildChains(tower(m, n).presentation, AugmentationModule(m), None)
    for t in range(1, 6):
        for x in H.basis(t):
            assert not d_vec(H, H.boundary(x))


def test_truncation_module_d_squared():
    S = tower(2, 1).presentation
    H = HochschildChains(S, TruncationModule(S, 4), None)
    for t in range(1, 5):
        for x in H.basis(t):
            assert not d_vec(H, H.boundary(x))


@pytest.mark.parametrize("m,n", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_tor_cp_pattern(m, n):
    A = base_change(tower(m, n).presentation, m)
    T = bar_tor(A, 2 * n + 3)
    for t in range(2 * n + 4):
        assert T.groups[t] == ([m] if t % 2 == 0 and t <= 2 * n else [])


def test_tor_requires_modulus():
    with pytest.raises(DGAError):
        bar_tor(tower(2, 1).presentation, 3)


@pytest.mark.parametrize("m,n", [(2, 1), (3, 1)])
def test_hh_cohomology_methods_agree(m, n):
    S = tower(m, n).presentation
    a = hochschild_cohomology(S, m, 2 * n + 2)
    b = hochschild_cohomology(S, m, 2 * n + 2, method="derivation")
    assert a.groups == b.groups


@pytest.mark.parametrize("m,n", [(2, 1), (3, 1), (2, 2)])
def test_hh_homology_dual_to_cohomology(m, n):
    S = tower(m, n).presentation
    N = 2 * n + 2
    assert hochschild_homology(S, m, N).ranks() == hochschild_cohomology(S, m, N).ranks()


def test_hh_trivial_model_polynomial_pattern():
    A = trivial_algebra_model(2, 9)
    H = hochschild_cohomology(A, 2, 8)
    assert [H.groups[t] for t in range(9)] == [[2] if t % 2 == 0 else [] for t in range(9)]


def test_incompatible_module_rejected():
    with pytest.raises(DGAError, match="incompatible"):
        check_module(tower(3, 1).presentation, AugmentationModule(2))


def test_budget_enforced():
    with pytest.raises(BudgetExceeded) as ei:
        hochschild_cohomology(tower(2, 2).presentation, 2, 12, budget=50)
    assert ei.value.report["budget"] == 50


def test_center_check_p2():
    verdict, cert = center_vanishing_check(2, 4)
    assert verdict is True
    assert verify_center_certificate(2, 4, cert["cochain"])
    # a corrupted cochain must not verify
    bad = [[c + 1, k] for c, k in cert["cochain"]]
    assert not verify_center_certificate(2, 4, bad)


def test_center_check_needs_prime():
    with pytest.raises(DGAError):
        center_vanishing_check(4, 8)


@pytest.mark.parametrize("k,p,expected", [(1, 2, True), (2, 2, False), (3, 2, True), (8, 3, True),
                                          (5, 3, False), (24, 5, True), (48, 7, True), (47, 7, False)])
def test_primitivity_examples(k, p, expected):
    assert bialgebra_primitivity_check(k, p) is expected


@given(st.integers(1, 300), st.sampled_from([2, 3, 5, 7, 11]))
def test_primitivity_matches_lucas(k, p):
    lucas = all(lucas_binomial_mod(k + 1, i, p) == 0 for i in range(1, k + 1))
    assert bialgebra_primitivity_check(k, p) == lucas == is_power_of(k + 1, p)


def test_formal_ring_hh_is_defined():
    A = formal_truncated_polynomial(2, 2, 6, modulus=2)
    T = bar_tor(A, 4)
    assert T.groups[0] == [2]

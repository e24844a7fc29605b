import pytest
from hypothesis import given, strategies as st

from dgaforge.core import (DGAError, Element, ExplicitDGA, Generator, SemifreePresentation, base_change,
                           d_vec, differentiate, dumps_presentation, enumerate_basis, formal_exterior,
                           formal_tensor_exterior, formal_truncated_polynomial, free_presentation,
                           loads_presentation, mul_vec, multiply, truncate, truncation_map)
from conftest import TOWER_CASES, tower


def moore():
    return free_presentation([("y1", 1)], {"y1": {(): 2}})


def test_generator_validation():
    with pytest.raises(DGAError):
        Generator("x", 0)
    with pytest.raises(DGAError):
        Generator("a b", 2)


def test_presentation_rejects_bad_differentials():
    with pytest.raises(DGAError, match="unknown"):
        free_presentation([("y1", 1)], {"y1": {("z",): 1}})
    with pytest.raises(DGAError, match="homogeneous"):
        free_presentation([("y1", 1), ("y3", 3)], {"y3": {("y1",): 1}})
    with pytest.raises(DGAError, match="unique"):
        free_presentation([("y1", 1), ("y1", 1)])
    # d(y2) = y1 and d(y1) = 2 gives d^2 y2 = 2
    with pytest.raises(DGAError, match="d\\^2"):
        free_presentation([("y1", 1), ("y2", 2)], {"y1": {(): 2}, "y2": {("y1",): 1}})
    with pytest.raises(DGAError):
        free_presentation([("y1", 1)], modulus=1)


def test_basis_counts_follow_compositions():
    P = free_presentation([("a", 1), ("b", 3)])
    counts = [len(enumerate_basis(P, k)) for k in range(12)]
    # compositions of k into parts 1 and 3
    ref = [1, 1, 1, 2]
    while len(ref) < 12:
        ref.append(ref[-1] + ref[-3])
    assert counts == ref
    assert enumerate_basis(P, 4) == [("a", "a", "a", "a"), ("a", "b"), ("b", "a")]


def test_leibniz_signs_on_moore_space():
    P = moore()
    assert P.boundary(("y1", "y1")) == {}
    # d(y1 y1 y1) = 2 y1y1 - 2 y1y1 + 2 y1y1
    assert P.boundary(("y1", "y1", "y1")) == {("y1", "y1"): 2}


def test_element_helpers():
    P = moore()
    e = P.element({("y1",): 3})
    assert differentiate(P, e) == Element({(): 6}, 0)
    sq = multiply(e, e)
    assert sq.terms == {("y1", "y1"): 9} and sq.degree == 2
    with pytest.raises(DGAError):
        P.element({("y1",): 1, (): 1})
    assert Element({(): 4}, 0, modulus=2).is_zero()


@pytest.mark.parametrize("m,n", TOWER_CASES)
def test_tower_d_squared_on_basis(m, n):
    P = tower(m, n).presentation
    for k in range(1, 4 * n + 2):
        for w in P.basis(k):
            assert not d_vec(P, P.boundary(w))


words = st.lists(st.sampled_from(["y1", "y3", "y5"]), max_size=4).map(tuple)


@given(words, words)
def test_leibniz_random_pairs(w1, w2):
    P = tower(2, 3).presentation
    lhs = d_vec(P, {w1 + w2: 1})
    rhs = mul_vec(P, P.boundary(w1), {w2: 1})
    s = -1 if P.word_degree(w1) % 2 else 1
    for k, c in mul_vec(P, {w1: 1}, P.boundary(w2)).items():
        rhs[k] = rhs.get(k, 0) + s * c
    assert lhs == {k: c for k, c in rhs.items() if c}


@pytest.mark.parametrize("m,n", TOWER_CASES)
def test_format_roundtrip(m, n):
    P = tower(m, n).presentation
    text = dumps_presentation(P)
    Q = loads_presentation(text)
    assert Q == P
    assert dumps_presentation(Q) == text


def test_format_errors():
    with pytest.raises(DGAError, match="header"):
        loads_presentation("gen y1 1\n")
    with pytest.raises(DGAError, match="base"):
        loads_presentation("dga-forge presentation 1\ngen y1 1\n")
    with pytest.raises(DGAError, match="unknown line"):
        loads_presentation("dga-forge presentation 1\nbase Z\nfoo\n")
    P = loads_presentation("dga-forge presentation 1\n# comment\nbase Z/3\ngen y1 1\ndiff y1 3\n")
    assert P.modulus == 3 and P.diff["y1"].is_zero()


def test_base_change():
    P = tower(3, 1).presentation
    Q = base_change(P, 3)
    assert Q.modulus == 3
    assert Q.boundary(("y1",)) == {}
    with pytest.raises(DGAError):
        base_change(Q, 3)


def test_permuted_keeps_algebra():
    P = tower(2, 2).presentation
    Q = P.permuted([1, 0])
    assert [g.name for g in Q.generators] == ["y3", "y1"]
    assert Q.diff == P.diff


def test_formal_models_pass_checks():
    A = formal_truncated_polynomial(4, 2, 10)
    assert A.product("x2", "x2^2") == {"x2^3": 1}
    assert A.top == 10
    E = formal_exterior(3, 4)
    assert E.product("x4", "x4") == {}
    T = formal_tensor_exterior(2, 2, 6)
    assert T.product("e1", "u2") == {"u2*e1": 1}
    assert T.product("e1", "e1") == {}
    for X in (A, E, T):
        X.check()
    B = formal_truncated_polynomial(2, 4, 20, k=3)
    assert B.top == 8


def test_explicit_dga_rejects_broken_leibniz():
    basis = {0: ["1"], 1: ["e"], 2: ["f"]}
    orders = {0: [0], 1: [0], 2: [0]}
    mult = {("1", "1"): {"1": 1}, ("1", "e"): {"e": 1}, ("e", "1"): {"e": 1},
            ("1", "f"): {"f": 1}, ("f", "1"): {"f": 1}, ("e", "e"): {"f": 1}}
    ExplicitDGA(basis, orders, {}, mult, "1")
    with pytest.raises(DGAError, match="Leibniz"):
        ExplicitDGA(basis, orders, {"f": {"e": 1}}, mult, "1")


def test_explicit_dga_torsion_well_definedness():
    basis = {0: ["1"], 1: ["e"]}
    with pytest.raises(DGAError, match="well defined"):
        ExplicitDGA(basis, {0: [0], 1: [2]}, {"e": {"1": 1}}, {("1", "1"): {"1": 1}, ("1", "e"): {"e": 1},
                                                             ("e", "1"): {"e": 1}}, "1")


@pytest.mark.parametrize("m,n,K", [(2, 1, 2), (2, 1, 4), (3, 1, 4), (2, 2, 4), (3, 2, 8)])
def test_truncations_are_dgas(m, n, K):
    P = tower(m, n).presentation
    T = truncate(P, K)
    T.check()
    f = truncation_map(P, T, K)
    # the truncation map commutes with the differential and products
    for k in range(1, K + 1):
        for w in P.basis(k):
            assert f(P.boundary(w)) == d_vec(T, f({w: 1}))
    for k1 in range(K + 1):
        for w1 in P.basis(k1)[:6]:
            for w2 in P.basis(K - k1)[:6]:
                assert f({w1 + w2: 1}) == mul_vec(T, f({w1: 1}), f({w2: 1}))

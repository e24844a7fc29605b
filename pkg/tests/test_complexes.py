import random

import pytest
from hypothesis import given, strategies as st

from dgaforge.complexes import LIMITS, BudgetExceeded, ChainComplex, algebra_complex
from dgaforge.linalg import homology_with_orders, kernel_basis
from conftest import tower


def random_complex(seed, modulus=0):
    """Dense differentials d_k: C_k -> C_{k-1} on degrees 0..3 with d d = 0."""
    rng = random.Random(seed)
    dims = [rng.randint(0, 8) for _ in range(4)]
    mats = {}
    prev = None
    for k in range(1, 4):
        r, c = dims[k - 1], dims[k]
        if prev is None:
            M = [[rng.randint(-3, 3) for _ in range(c)] for _ in range(r)]
        else:
            K = kernel_basis(prev, dims[k - 2], r) if dims[k - 2] else \
                [[int(i == j) for i in range(r)] for j in range(r)]
            R = [[rng.randint(-2, 2) for _ in range(c)] for _ in K]
            M = [[sum(K[t][i] * R[t][j] for t in range(len(K))) for j in range(c)] for i in range(r)]
        f = rng.choice([1, 1, 2, 3])  # non-unit scalings give torsion
        M = [[v * f for v in row] for row in M]
        mats[k] = M
        prev = M
    keys = {k: [(k, i) for i in range(dims[k])] for k in range(4)}

    def boundary(key):
        k, j = key
        if k == 0:
            return {}
        return {(k - 1, i): mats[k][i][j] for i in range(dims[k - 1]) if mats[k][i][j]}

    cx = ChainComplex(0, 3, lambda k: keys.get(k, []), lambda key: modulus, boundary)
    return cx, dims, mats


def dense_factors(dims, mats, k, modulus):
    d_in = mats.get(k + 1)
    d_out = mats.get(k) if k > 0 else None
    om = [modulus] * dims[k] if modulus else None
    oo = [modulus] * dims[k - 1] if modulus and k > 0 else None
    q = homology_with_orders(d_in, d_out, dims[k + 1], dims[k], dims[k - 1] if k > 0 else 0, om, oo)
    return sorted(q.factors)


@given(st.integers(0, 10 ** 6), st.sampled_from([0, 0, 2, 4, 6]))
def test_sparse_reduction_matches_dense(seed, modulus):
    cx, dims, mats = random_complex(seed, modulus)
    for k in range(3):
        assert sorted(cx.homology(k).factors) == dense_factors(dims, mats, k, modulus)


@given(st.integers(0, 10 ** 6))
def test_solve_finds_preimages(seed):
    cx, dims, mats = random_complex(seed)
    rng = random.Random(seed + 1)
    for k in range(2):
        w = {(k + 1, j): rng.randint(-3, 3) for j in range(dims[k + 1])}
        # boundary of w through the original matrices
        z = {}
        for (_, j), c in w.items():
            for i in range(dims[k]):
                z[(k, i)] = z.get((k, i), 0) + mats[k + 1][i][j] * c
        z = {key: c for key, c in z.items() if c}
        sol = cx.solve(k, z)
        assert sol is not None
        back = {}
        for (_, j), c in sol.items():
            for i in range(dims[k]):
                back[(k, i)] = back.get((k, i), 0) + mats[k + 1][i][j] * c
        assert {key: c for key, c in back.items() if c} == z


@given(st.integers(0, 10 ** 6))
def test_generators_are_cycles_and_classify_to_basis(seed):
    cx, dims, mats = random_complex(seed)
    for k in range(3):
        h = cx.homology(k)
        for i, g in enumerate(h.generators):
            if k > 0:
                for r in range(dims[k - 1]):
                    assert sum(mats[k][r][j] * c for (_, j), c in g.items()) == 0
            coords = h.classify(g)
            assert coords == [int(t == i) for t in range(len(h.factors))]


def test_non_boundary_is_not_solved():
    P = tower(2, 1).presentation
    cx = algebra_complex(P, 0, 3)
    assert cx.solve(0, {(): 1}) is None
    assert cx.solve(0, {(): 2}) == {("y1",): 1}
    assert cx.solve(2, {("y1", "y1"): 1}) is None


def test_homology_degree_range_checked():
    cx = algebra_complex(tower(2, 1).presentation, 0, 3)
    with pytest.raises(ValueError):
        cx.homology(3)


def test_cell_budget_and_limits():
    P = tower(2, 2).presentation
    with pytest.raises(BudgetExceeded) as ei:
        algebra_complex(P, 0, 30, budget=40)
    assert ei.value.report["budget"] == 40
    tok = LIMITS.set((None, 0))
    try:
        with pytest.raises(BudgetExceeded):
            algebra_complex(P, 0, 5).homology(4)
    finally:
        LIMITS.reset(tok)
    assert algebra_complex(P, 0, 5).homology(4).factors == [2]


def test_env_budget(monkeypatch):
    monkeypatch.setenv("DGA_FORGE_MAX_CELLS", "10")
    with pytest.raises(BudgetExceeded):
        algebra_complex(tower(2, 2).presentation, 0, 20)

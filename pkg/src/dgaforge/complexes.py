"""Chain complexes of finitely generated abelian groups with sparse reduction.

A complex is given degreewise by ordered keys, an additive order per key
(0 = Z) and a boundary function.  Before any dense Smith form is taken, unit
pivots (pairs a, b with d(b) = u*a + ..., equal orders, u a unit) are
cancelled by Gaussian elimination.  The recorded steps give chain maps
f: C -> C_res, g: C_res -> C and a homotopy h, which are used to lift
residual representatives, classify cycles and solve d(w) = z exactly.
"""

from __future__ import annotations

import os
from contextvars import ContextVar
from math import gcd

from .linalg import homology_with_orders, solve_with_orders


class BudgetExceeded(RuntimeError):
    def __init__(self, msg, report=None):
        super().__init__(msg)
        self.report = report or {}


# (max cells per complex, max residual matrix dimension); None = unlimited
LIMITS = ContextVar("dga_forge_limits", default=None)


def current_limits():
    lim = LIMITS.get()
    if lim is not None:
        return lim
    cells = os.environ.get("DGA_FORGE_MAX_CELLS")
    dim = os.environ.get("DGA_FORGE_MAX_DIM")
    return (int(cells) if cells else None, int(dim) if dim else None)


def _unit_inverse(u, o):
    if o == 0:
        return u if u in (1, -1) else None
    u %= o
    if gcd(u, o) != 1:
        return None
    return pow(u, -1, o)


class _Step:
    __slots__ = ("a", "b", "uinv", "db", "beta")

    def __init__(self, a, b, uinv, db, beta):
        self.a, self.b, self.uinv, self.db, self.beta = a, b, uinv, db, beta


class Homology:
    """Homology group in one degree, tied to its parent complex."""

    def __init__(self, cx, k, quotient, keys):
        self.cx = cx
        self.degree = k
        self._q = quotient
        self._keys = keys
        self.factors = list(quotient.factors)
        self.generators = [cx.lift_residual(k, dict(zip(keys, g))) for g in quotient.generators]

    @property
    def rank(self):
        return len(self.factors)

    def classify(self, z):
        """Coordinates of the class of a cycle z (dict key -> coef)."""
        r = self.cx.project(self.degree, z)
        vec = [r.get(key, 0) for key in self._keys]
        return self._q.classify(vec)

    def is_zero_class(self, z):
        return not any(self.classify(z))


class ChainComplex:
    """Complex on degrees lo..hi; d_lo is taken to be zero."""

    def __init__(self, lo, hi, basis, order, boundary, budget=None):
        self.lo, self.hi = lo, hi
        self.order = order
        lim_cells, self.max_dim = current_limits()
        if budget is None:
            budget = lim_cells
        self.keys = {}
        size = 0
        for k in range(lo, hi + 1):
            self.keys[k] = list(basis(k))
            size += len(self.keys[k])
            if budget is not None and size > budget:
                raise BudgetExceeded(f"complex exceeds the cell budget {budget}",
                                     {"degrees": [lo, hi], "cells_so_far": size, "budget": budget})
        self.size = size
        self.cols = {}
        self.rows = {}
        for k in range(lo + 1, hi + 1):
            ck, rk = {}, {}
            for x in self.keys[k]:
                v = {}
                for y, c in boundary(x).items():
                    o = order(y)
                    c = c % o if o else c
                    if c:
                        v[y] = c
                ck[x] = v
                for y in v:
                    rk.setdefault(y, set()).add(x)
            self.cols[k] = ck
            self.rows[k] = rk
        self.alive = {k: dict.fromkeys(self.keys[k]) for k in self.keys}
        self.steps = {k: [] for k in range(lo, hi)}
        self._hom = {}
        self._reduce()

    # -- elimination
    def _reduce(self):
        for k in range(self.lo, self.hi):
            cols, rows = self.cols[k + 1], self.rows[k + 1]
            for b in list(self.keys[k + 1]):
                col = cols.get(b)
                if not col:
                    continue
                ob = self.order(b)
                best = None
                for a, u in col.items():
                    if self.order(a) != ob:
                        continue
                    ui = _unit_inverse(u, ob)
                    if ui is None:
                        continue
                    w = len(rows[a])
                    if best is None or w < best[0]:
                        best = (w, a, ui)
                        if w == 1:
                            break
                if best is not None:
                    self._eliminate(k, best[1], b, best[2])

    def _eliminate(self, k, a, b, uinv):
        cols, rows = self.cols[k + 1], self.rows[k + 1]
        db = cols.pop(b)
        for y in db:
            rows[y].discard(b)
        beta = {}
        for x in list(rows.get(a, ())):
            colx = cols[x]
            c = colx[a]
            beta[x] = c
            s = -c * uinv
            for y, v in db.items():
                o = self.order(y)
                n = colx.get(y, 0) + s * v
                if o:
                    n %= o
                if n:
                    if y not in colx:
                        rows.setdefault(y, set()).add(x)
                    colx[y] = n
                elif y in colx:
                    del colx[y]
                    rows[y].discard(x)
        rows.pop(a, None)
        # drop a as a column of d_k and b as a row of d_{k+2}
        if k in self.cols:
            va = self.cols[k].pop(a, {})
            for y in va:
                self.rows[k][y].discard(a)
        if k + 2 in self.cols:
            for x in self.rows[k + 2].pop(b, ()):
                del self.cols[k + 2][x][b]
        del self.alive[k][a]
        del self.alive[k + 1][b]
        self.steps[k].append(_Step(a, b, uinv, db, beta))

    # -- maps
    def _red(self, v):
        out = {}
        for key, c in v.items():
            o = self.order(key)
            if o:
                c %= o
            if c:
                out[key] = c
        return out

    def project(self, k, z):
        """f: C_k -> residual C_k."""
        z = dict(z)
        for st in self.steps.get(k, ()):
            c = z.get(st.a, 0)
            if c:
                s = -c * st.uinv
                for y, v in st.db.items():
                    z[y] = z.get(y, 0) + s * v
        alive = self.alive[k]
        return self._red({key: c for key, c in z.items() if key in alive})

    def lift_residual(self, k, x):
        """g: residual C_k -> C_k."""
        x = dict(x)
        for st in reversed(self.steps.get(k - 1, ())):
            t = sum(c * st.beta.get(key, 0) for key, c in x.items())
            if t:
                x[st.b] = x.get(st.b, 0) - st.uinv * t
        return self._red(x)

    def residual_matrix(self, k):
        """Dense residual d_k with rows alive[k-1], cols alive[k]."""
        if k not in self.cols:
            return None
        rk = list(self.alive[k - 1])
        ck = list(self.alive[k])
        idx = {y: i for i, y in enumerate(rk)}
        M = [[0] * len(ck) for _ in rk]
        for j, x in enumerate(ck):
            for y, c in self.cols[k][x].items():
                M[idx[y]][j] = c
        return M

    def residual_size(self, k):
        return len(self.alive[k])

    def homology(self, k):
        if not (self.lo <= k < self.hi):
            raise ValueError(f"homology in degree {k} needs degrees {k}..{k + 1} in the complex")
        h = self._hom.get(k)
        if h is None:
            keys = list(self.alive[k])
            n_mid = len(keys)
            if self.max_dim is not None and n_mid > self.max_dim:
                raise BudgetExceeded(f"residual dimension {n_mid} in degree {k} exceeds {self.max_dim}",
                                     {"degree": k, "dimension": n_mid, "max_dim": self.max_dim})
            prev = list(self.alive[k - 1]) if k > self.lo else []
            nxt = list(self.alive[k + 1])
            d_out = self.residual_matrix(k) if k > self.lo else None
            d_in = self.residual_matrix(k + 1)
            q = homology_with_orders(d_in, d_out, len(nxt), n_mid, len(prev),
                                     [self.order(x) for x in keys],
                                     [self.order(y) for y in prev])
            h = Homology(self, k, q, keys)
            self._hom[k] = h
        return h

    def solve(self, k, z):
        """Some w in C_{k+1} with d(w) = z for a cycle z in C_k, or None."""
        if not (self.lo <= k < self.hi):
            raise ValueError("solve needs degrees k and k+1 in the complex")
        zs = []
        cur = dict(z)
        for st in self.steps[k]:
            c = self._red({st.a: cur.get(st.a, 0)}).get(st.a, 0)
            zs.append(c * st.uinv)
            if c:
                s = -c * st.uinv
                for y, v in st.db.items():
                    cur[y] = cur.get(y, 0) + s * v
        alive = self.alive[k]
        res = self._red({key: c for key, c in cur.items() if key in alive})
        rk = list(alive)
        ck = list(self.alive[k + 1])
        if res:
            M = self.residual_matrix(k + 1)
            bvec = [res.get(y, 0) for y in rk]
            x = solve_with_orders(M, len(rk), len(ck), bvec, [self.order(y) for y in rk])
            if x is None:
                return None
            w = {key: c for key, c in zip(ck, x) if c}
        else:
            w = {}
        for st, hz in zip(reversed(self.steps[k]), reversed(zs)):
            t = sum(c * st.beta.get(key, 0) for key, c in w.items())
            coef = hz - st.uinv * t
            if coef:
                w[st.b] = w.get(st.b, 0) + coef
        return self._red(w)


def algebra_complex(A, lo, hi, budget=None):
    """The underlying chain complex of a graded algebra interface object."""
    top = A.top

    def basis(k):
        if k < 0 or (top is not None and k > top):
            return []
        return A.basis(k)

    return ChainComplex(lo, hi, basis, A.order, A.boundary, budget)

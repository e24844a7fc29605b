"""Minimal semifree resolutions of k = Z/p and the Ext algebra Ext_A(k, k).

F = A (x) W with cells attached degree by degree to kill homology.  Since
every killed class is a basis of H_k of the previous stage, the induced
differential on k (x)_A F vanishes and rank W equals the Tor rank.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import BudgetExceeded, ChainComplex
from .core import DGAError, add_into, reduce_vec


def _is_prime(p):
    return p > 1 and all(p % q for q in range(2, int(p ** 0.5) + 1))


@dataclass
class Cell:
    name: str
    degree: int
    stage: int
    boundary: dict          # (a_key, cell_name) -> coef

    @property
    def internal(self):
        return self.degree - self.stage


class FreeModule:
    """Degreewise basis (a, w) of A (x) W with its differential."""

    def __init__(self, A, cells):
        self.A = A
        self.cells = {c.name: c for c in cells}
        self.order_list = [c.name for c in cells]
        self.p = A.modulus

    def basis(self, k):
        out = []
        for name in self.order_list:
            c = self.cells[name]
            if c.degree <= k:
                out.extend((a, name) for a in self.A.basis(k - c.degree))
        return out

    def order(self, key):
        return self.p

    def act(self, a, vec):
        out = {}
        for (b, w), c in vec.items():
            for ab, e in self.A.product(a, b).items():
                add_into(out, {(ab, w): c * e})
        return out

    def boundary(self, key):
        a, w = key
        out = {}
        for b, c in self.A.boundary(a).items():
            add_into(out, {(b, w): c})
        s = -1 if self.A.degree_of(a) % 2 else 1
        add_into(out, self.act(a, self.cells[w].boundary), s)
        return reduce_vec(out, self.order)

    def complex(self, hi):
        return ChainComplex(0, hi, self.basis, self.order, self.boundary)


@dataclass
class ResolutionData:
    A: object
    cells: list
    bound: int
    checks: dict = field(default_factory=dict)

    def ranks(self):
        r = [0] * (self.bound + 1)
        for c in self.cells:
            if c.degree <= self.bound:
                r[c.degree] += 1
        return r

    def stages(self):
        out = {}
        for c in self.cells:
            out.setdefault(c.stage, []).append(c.internal)
        return out

    def to_json(self):
        return {"bound": self.bound,
                "cells": [{"name": c.name, "degree": c.degree, "stage": c.stage,
                           "internal": c.internal} for c in self.cells],
                "checks": self.checks}


def _check_algebra(A):
    p = A.modulus
    if not _is_prime(p):
        raise DGAError("Koszul duals are computed over F_p: the algebra needs a prime modulus")
    b0 = A.basis(0)
    if len(b0) != 1:
        raise DGAError("algebra must be connected")
    for a in A.basis(1):
        if any(A.degree_of(b) == 0 and c % p for b, c in A.boundary(a).items()):
            raise DGAError("algebra is not augmented")
    return p


def minimal_free_resolution(A, L, N, budget=None) -> ResolutionData:
    """Cells of the minimal resolution of k through total degree N, stages <= L."""
    p = _check_algebra(A)
    unit = A.basis(0)[0]
    cells = [Cell("w0", 0, 0, {})]
    count = 0
    for k in range(1, N + 1):
        F = FreeModule(A, cells)
        h = F.complex(k + 1).homology(k)
        if budget is not None and len(cells) + len(h.generators) > budget:
            raise BudgetExceeded("resolution exceeds the cell budget", {"degree": k, "cells": len(cells)})
        stage_of = {c.name: c.stage for c in cells}
        for z in h.generators:
            count += 1
            st = 1 + max(stage_of[w] for (_, w) in z)
            cells.append(Cell(f"w{count}", k + 1, st, dict(z)))
    F = FreeModule(A, cells)
    cx = F.complex(N + 1)
    exact = cx.homology(0).factors == [p] and all(not cx.homology(k).factors for k in range(1, N + 1))
    minimal = all(A.degree_of(a) > 0 for c in cells for (a, _) in c.boundary)
    kept = [c for c in cells if c.stage <= L]
    res = ResolutionData(A, kept, N, {"exact_through": N if exact else None, "minimal": minimal})
    res._all = cells
    res._cx = cx
    res._unit = unit
    return res


@dataclass
class ExtTable:
    p: int
    bound: int
    bigraded: dict          # (s, t) -> rank, t = internal degree
    total: list             # rank per total degree
    classes: list           # (name, s, t)
    products: dict          # (u, v) -> {w: coef}
    pattern: str = ""
    dictionary: str = ("Ext^s in internal degree t sits in KD-degree -(s + t); "
                       "equivalently t' - s with cohomological internal degree t' = -t")

    def kd_degrees(self):
        return {name: -(s + t) for name, s, t in self.classes}

    def to_json(self):
        return {"p": self.p, "bound": self.bound, "indexing": self.dictionary,
                "bigraded": [[s, t, r] for (s, t), r in sorted(self.bigraded.items())],
                "total": self.total,
                "classes": [{"name": n, "s": s, "t": t, "kd_degree": -(s + t)} for n, s, t in self.classes],
                "products": [[u, v, sorted(w.items())] for (u, v), w in sorted(self.products.items()) if w],
                "pattern": self.pattern}


def _lift(res, F, cx, v):
    """A-linear chain map Phi_v: F -> F of degree -|v| lifting the dual of v."""
    A = res.A
    unit = res._unit
    rv = F.cells[v].degree
    phi = {}
    for c in res._all:
        if c.degree < rv:
            phi[c.name] = {}
            continue
        if c.degree == rv:
            phi[c.name] = {(unit, "w0"): 1} if c.name == v else {}
            continue
        rhs = {}
        for (a, w), coef in c.boundary.items():
            s = -1 if (A.degree_of(a) * rv) % 2 else 1
            add_into(rhs, F.act(a, phi[w]), s * coef)
        if rv % 2:
            rhs = {k: -x for k, x in rhs.items()}
        rhs = reduce_vec(rhs, F.order)
        j = c.degree - rv - 1
        if not rhs:
            phi[c.name] = {}
            continue
        x = cx.solve(j, rhs)
        if x is None:
            raise DGAError(f"lifting failed at cell {c.name}")
        phi[c.name] = x
    return phi


def koszul_dual_homology(A, N, L=None, products=True) -> ExtTable:
    res = minimal_free_resolution(A, L if L is not None else N, N)
    if not res.checks["exact_through"]:
        raise DGAError("resolution is not exact in the window")
    p = A.modulus
    cells = res._all
    F = FreeModule(A, cells)
    cx = res._cx
    big = {}
    for c in cells:
        if c.degree <= N:
            big[c.stage, c.internal] = big.get((c.stage, c.internal), 0) + 1
    total = res.ranks()
    classes = [(c.name, c.stage, c.internal) for c in cells if c.degree <= N]
    prods = {}
    if products:
        pos = [c for c in cells if 0 < c.degree <= N]
        for cv in pos:
            phi = None
            for cu in pos:
                if cu.degree + cv.degree > N:
                    continue
                if phi is None:
                    phi = _lift(res, F, cx, cv.name)
                out = {}
                for cw in cells:
                    if cw.degree == cu.degree + cv.degree:
                        c = phi[cw.name].get((res._unit, cu.name), 0) % p
                        if c:
                            out[cw.name] = c
                prods[cu.name, cv.name] = out
    T = ExtTable(p, N, big, total, classes, prods)
    T.pattern = _pattern(T, cells, N)
    return T


def _pattern(T, cells, N):
    pos = [c for c in cells if 0 < c.degree <= N]
    if not pos:
        return "trivial"
    if any(r > 1 for r in T.total):
        return "other"
    g = pos[0]
    d = g.degree
    ranks = sorted(k for k, r in enumerate(T.total) if r)
    j = len(ranks) - 1
    if ranks != [i * d for i in range(j + 1)]:
        return "other"
    cur = g.name
    for _ in range(2, j + 1):
        nxt = T.products.get((cur, g.name), {})
        if len(nxt) != 1:
            return "other"
        cur = next(iter(nxt))
    if (j + 1) * d > N:
        return "polynomial" if j > 1 else "exterior (square outside window)"
    if (cur, g.name) in T.products and T.products[cur, g.name]:
        return "other"
    return "exterior" if j == 1 else f"truncated polynomial (height {j + 1})"


def yoneda_associative(T: ExtTable):
    """Check (a b) c = a (b c) on all triples in the window."""
    deg = {n: s + t for n, s, t in T.classes}

    def mul(x, y):
        out = {}
        for u, a in x.items():
            for v, b in y.items():
                if deg[u] == 0:
                    add_into(out, {v: a * b})
                elif deg[v] == 0:
                    add_into(out, {u: a * b})
                elif deg[u] + deg[v] <= T.bound:
                    add_into(out, T.products.get((u, v), {}), a * b)
        return {k: c % T.p for k, c in out.items() if c % T.p}

    names = [n for n, s, t in T.classes if deg[n] > 0]
    for a in names:
        for b in names:
            for c in names:
                if deg[a] + deg[b] + deg[c] > T.bound:
                    continue
                if mul(mul({a: 1}, {b: 1}), {c: 1}) != mul({a: 1}, mul({b: 1}, {c: 1})):
                    return False
    return True

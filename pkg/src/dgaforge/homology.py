"""Homology rings of DGAs up to a degree bound."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .complexes import algebra_complex
from .core import DGAError, _key_label, mul_vec


def key_to_json(k):
    return _key_label(k)


def vec_to_json(v):
    return [[c, _key_label(k)] for k, c in sorted(v.items(), key=lambda t: _sort_key(t[0]))]


def _sort_key(k):
    if isinstance(k, tuple):
        return (0, len(k), k)
    return (1, 0, (str(k),))


class HomologyTable:
    """Groups, representatives and products of H_*(A) in degrees 0..N."""

    def __init__(self, A, N, complex_=None, budget=None, with_products=True):
        if N < 0:
            raise DGAError("bound must be nonnegative")
        self.algebra = A
        self.bound = N
        self.modulus = A.modulus
        self.complex = complex_ or algebra_complex(A, 0, N + 1, budget)
        self.groups = {}
        self.reps = {}
        for k in range(N + 1):
            h = self.complex.homology(k)
            self.groups[k] = list(h.factors)
            self.reps[k] = list(h.generators)
        self.products = {}
        self.names = {}
        if with_products:
            self._products()

    def classify(self, k, z):
        return self.complex.homology(k).classify(z)

    def _products(self):
        A = self.algebra
        N = self.bound
        for k1 in range(N + 1):
            for k2 in range(N + 1 - k1):
                if not self.reps[k1] or not self.reps[k2]:
                    continue
                for i, a in enumerate(self.reps[k1]):
                    for j, b in enumerate(self.reps[k2]):
                        self.products[k1, i, k2, j] = self.classify(k1 + k2, mul_vec(A, a, b))

    def product_coords(self, k1, x, k2, y):
        """Class of (sum x_i g_i)(sum y_j g_j) from structure constants."""
        out = [0] * len(self.groups[k1 + k2])
        for i, a in enumerate(x):
            for j, b in enumerate(y):
                if a and b:
                    for t, c in enumerate(self.products[k1, i, k2, j]):
                        out[t] += a * b * c
        return [c % f if f else c for c, f in zip(out, self.groups[k1 + k2])]

    def poincare(self):
        return [len(self.groups[k]) for k in range(self.bound + 1)]

    def to_json(self):
        degs = []
        for k in range(self.bound + 1):
            degs.append({"degree": k, "factors": self.groups[k],
                         "representatives": [vec_to_json(v) for v in self.reps[k]]})
        prods = []
        for (k1, i, k2, j), c in sorted(self.products.items()):
            if any(c):
                prods.append({"left": [k1, i], "right": [k2, j], "coords": c})
        return {"bound": self.bound, "base": self.modulus, "degrees": degs,
                "products": prods, "names": {n: list(v) for n, v in sorted(self.names.items())}}


def homology_table(A, N, budget=None):
    return HomologyTable(A, N, budget=budget)


def poincare_series(T: HomologyTable):
    return T.poincare()


# ----------------------------------------------------------------------------
# targets

@dataclass
class RingTarget:
    kind: str          # polynomial | truncated | exterior | tensor | explicit
    m: int = 2
    d: int = 2
    k: int | None = None
    explicit: object = None

    def __post_init__(self):
        if self.kind not in ("polynomial", "truncated", "exterior", "tensor", "explicit"):
            raise DGAError(f"unknown ring target kind {self.kind}")
        if self.kind != "explicit":
            if self.m <= 1 or self.d < 1:
                raise DGAError("ring target needs m > 1 and d >= 1")
            if self.kind == "truncated" and (self.k is None or self.k < 1):
                raise DGAError("truncated polynomial target needs k >= 1")
        if self.kind == "exterior":
            self.k = 2

    def describe(self):
        if self.kind == "polynomial":
            return f"Z/{self.m}[x{self.d}]"
        if self.kind == "truncated":
            return f"Z/{self.m}[x{self.d}]/x{self.d}^{self.k}"
        if self.kind == "exterior":
            return f"Lambda_Z/{self.m}[x{self.d}]"
        if self.kind == "tensor":
            return f"Z/{self.m}[u{self.d}](x)Lambda[e1]"
        return getattr(self.explicit, "name", "explicit")

    def structure(self, N):
        """(orders per degree, generator names, products) for a cyclic-per-degree ring."""
        if self.kind == "explicit":
            return _structure_of_table(HomologyTable(self.explicit, N))
        orders, names, prods = {}, {}, {}
        m, d = self.m, self.d
        if self.kind == "tensor":
            elems = {}
            j = 0
            while j * d <= N:
                for eps in (0, 1):
                    if j * d + eps <= N:
                        elems[j * d + eps] = (j, eps)
                j += 1
            for deg, (j, eps) in elems.items():
                orders[deg] = m
                base = "1" if j == 0 else (f"u{d}" if j == 1 else f"u{d}^{j}")
                names[deg] = ("e1" if j == 0 else base + "*e1") if eps else base
            for a, (ja, ea) in elems.items():
                for b, (jb, eb) in elems.items():
                    if a + b in elems and not (ea and eb):
                        prods[a, b] = 1
            return orders, names, prods
        top = None if self.kind == "polynomial" else self.k
        j = 0
        while j * d <= N and (top is None or j < top):
            orders[j * d] = m
            names[j * d] = "1" if j == 0 else (f"x{d}" if j == 1 else f"x{d}^{j}")
            j += 1
        for a in orders:
            for b in orders:
                if a + b in orders:
                    prods[a, b] = 1
        return orders, names, prods


def _structure_of_table(T):
    """Cyclic-per-degree view of a table, or None if some group is not cyclic."""
    orders, names, prods = {}, {}, {}
    for k, f in T.groups.items():
        if len(f) > 1:
            return None
        if f:
            orders[k] = f[0]
    for a in orders:
        for b in orders:
            if a + b in orders:
                prods[a, b] = T.products[a, 0, b, 0][0]
    for k in orders:
        names[k] = f"h{k}"
    return orders, names, prods


@dataclass
class IsoResult:
    ok: bool
    witness: dict = field(default_factory=dict)
    failing_degree: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def _units(o):
    if o == 0:
        return [1, -1]
    return [u for u in range(1, o) if gcd(u, o) == 1] or [1]


def _search_scalings(src, tgt, N):
    """Find units c_k with src_gen_k -> c_k tgt_gen_k multiplicative.

    Returns (scalings, None) or (None, (degree, reason)).
    """
    so, _, sp = src
    to, _, tp = tgt
    for k in range(N + 1):
        if so.get(k) != to.get(k):
            return None, (k, f"groups differ in degree {k}: {so.get(k)} vs {to.get(k)}")
    degs = sorted(so)
    c = {}
    fail = [None]

    def consistent(k):
        o = so[k]
        for a in degs:
            b = k - a
            if a > k or b not in so:
                continue
            lhs = sp.get((a, b), 0) * c[k]
            rhs = c[a] * c[b] * tp.get((a, b), 0)
            if (lhs - rhs) % o if o else lhs != rhs:
                fail[0] = (k, f"product of degrees {a} and {b} does not match")
                return False
        return True

    def rec(i):
        if i == len(degs):
            return True
        k = degs[i]
        cands = [1] if k == 0 else _units(so[k])
        for u in cands:
            c[k] = u
            if consistent(k) and rec(i + 1):
                return True
        del c[k]
        return False

    if rec(0):
        return c, None
    return None, fail[0] or (0, "no isomorphism")


def ring_iso_check(T: HomologyTable, target: RingTarget) -> IsoResult:
    N = T.bound
    src = _structure_of_table(T)
    if src is None:
        k = min(k for k, f in T.groups.items() if len(f) > 1)
        return IsoResult(False, failing_degree=k, reason=f"degree {k} group {T.groups[k]} is not cyclic")
    tgt = target.structure(N)
    c, fail = _search_scalings(src, tgt, N)
    if c is None:
        return IsoResult(False, failing_degree=fail[0], reason=fail[1])
    wit = {}
    names = tgt[1]
    for k, u in sorted(c.items()):
        # target generator h maps to u^{-1} times the chosen representative
        o = src[0][k]
        inv = pow(u, -1, o) if o else u
        wit[names[k]] = {"degree": k, "scale": inv % o if o else inv,
                         "representative": vec_to_json(T.reps[k][0])}
    return IsoResult(True, witness=wit)


def tables_isomorphic(T1: HomologyTable, T2: HomologyTable) -> IsoResult:
    """Compare two tables up to unit rescaling of cyclic generators."""
    if T1.bound != T2.bound:
        return IsoResult(False, reason="different bounds")
    for k in range(T1.bound + 1):
        if sorted(T1.groups[k]) != sorted(T2.groups[k]):
            return IsoResult(False, failing_degree=k, reason="groups differ")
    s1, s2 = _structure_of_table(T1), _structure_of_table(T2)
    if s1 is None or s2 is None:
        return IsoResult(True, reason="groups agree; products not compared (non-cyclic degree)")
    c, fail = _search_scalings(s1, s2, T1.bound)
    if c is None:
        return IsoResult(False, failing_degree=fail[0], reason=fail[1])
    return IsoResult(True, witness={str(k): u for k, u in c.items()})

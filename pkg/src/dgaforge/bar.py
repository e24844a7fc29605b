"""Bar complexes: Tor, Hochschild homology and cohomology, center checks.

Bar elements are tuples of positive-degree basis keys of the algebra, of
total degree sum(|a_i| + 1).  Coefficient bimodules implement

    basis(k), order(key), degree_of(key), boundary(key), top,
    left(a, key), right(key, a)       (a a basis key of the algebra)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, gcd

from .complexes import BudgetExceeded, ChainComplex, current_limits
from .core import DGAError, add_into, mul_vec, reduce_vec, truncate, truncation_map

DEFAULT_BUDGET = 200000


def cell_budget(budget=None):
    if budget is not None:
        return budget
    cells, _ = current_limits()
    return cells if cells is not None else DEFAULT_BUDGET


# ----------------------------------------------------------------------------
# coefficient bimodules

class AugmentationModule:
    """Z/m in degree 0; positive-degree elements act by zero."""

    def __init__(self, m):
        if m <= 1:
            raise DGAError("need m > 1")
        self.modulus = m
        self.top = 0
        self.name = f"Z/{m}"

    def basis(self, k):
        return ["1"] if k == 0 else []

    def order(self, key):
        return self.modulus

    def degree_of(self, key):
        return 0

    def boundary(self, key):
        return {}

    def left(self, a, key):
        return {}

    def right(self, key, a):
        return {}


class TruncationModule:
    """tau_{<=N} A as an A-bimodule through the truncation map."""

    def __init__(self, A, N):
        self.A = A
        self.T = truncate(A, N)
        self.pi = truncation_map(A, self.T, N)
        self.top = N
        self.modulus = A.modulus
        self.name = f"trunc{N}"
        self._cache = {}

    def basis(self, k):
        return self.T.basis(k) if 0 <= k <= self.top else []

    def order(self, key):
        return self.T.order(key)

    def degree_of(self, key):
        return self.T.degree_of(key)

    def boundary(self, key):
        return self.T.boundary(key)

    def _image(self, a):
        v = self._cache.get(a)
        if v is None:
            v = self.pi({a: 1})
            self._cache[a] = v
        return v

    def left(self, a, key):
        if self.A.degree_of(a) + self.T.degree_of(key) > self.top:
            return {}
        return mul_vec(self.T, self._image(a), {key: 1})

    def right(self, key, a):
        if self.A.degree_of(a) + self.T.degree_of(key) > self.top:
            return {}
        return mul_vec(self.T, {key: 1}, self._image(a))

    def unit(self):
        return self.T.unit


def check_module(A, M):
    """Z/m through the augmentation needs d(A_1) to vanish mod m."""
    if isinstance(M, AugmentationModule):
        for a in A.basis(1):
            for b, c in A.boundary(a).items():
                if c % M.modulus:
                    raise DGAError(f"incompatible module action: d({a}) is not 0 mod {M.modulus}")


# ----------------------------------------------------------------------------
# bar elements

class BarBasis:
    def __init__(self, A):
        self.A = A
        self._cache = {0: [()]}

    def __call__(self, t):
        if t < 0:
            return []
        out = self._cache.get(t)
        if out is None:
            out = []
            for d in range(1, t):
                if self.A.top is not None and d > self.A.top:
                    break
                for a in self.A.basis(d):
                    for rest in self(t - d - 1):
                        out.append((a,) + rest)
            self._cache[t] = out
        return out

    def levels(self, t):
        counts = {}
        for b in self(t):
            counts[len(b)] = counts.get(len(b), 0) + 1
        return counts


def _deg(A, a):
    return A.degree_of(a)


def bar_boundary(A, bar, mdeg=0):
    """Internal plus merge terms of d(mu[a_1|...|a_s]) with |mu| = mdeg.

    Returns dict bar_tuple -> coefficient (the mu factor is unchanged).
    """
    out = {}
    eps = mdeg
    s = len(bar)
    for i, a in enumerate(bar):
        sign = -1 if eps % 2 == 0 else 1          # -(-1)^{eps_{i-1}}
        for b, c in A.boundary(a).items():
            if A.degree_of(b) == 0:
                continue  # normalized complex: scalars in a bar slot vanish
            key = bar[:i] + (b,) + bar[i + 1:]
            add_into(out, {key: sign * c})
        eps += _deg(A, a) + 1
        if i < s - 1:
            sign2 = -1 if eps % 2 else 1            # (-1)^{eps_i}
            for ab, c in A.product(a, bar[i + 1]).items():
                key = bar[:i] + (ab,) + bar[i + 2:]
                add_into(out, {key: sign2 * c})
    return out


class HochschildChains:
    """Normalized Hochschild chains M (x) (sA-bar)^{(x)s} over the base of A."""

    def __init__(self, A, M, budget=None):
        check_module(A, M)
        self.A, self.M = A, M
        self.bars = BarBasis(A)
        self.budget = cell_budget(budget)
        self.modulus = A.modulus

    def basis(self, t):
        out = []
        top = self.M.top if self.M.top is not None else t
        for q in range(0, min(top, t) + 1):
            mb = self.M.basis(q)
            if not mb:
                continue
            for bar in self.bars(t - q):
                for mu in mb:
                    out.append((mu, bar))
        return out

    def order(self, key):
        o = self.M.order(key[0])
        if self.modulus:
            o = gcd(o, self.modulus) if o else self.modulus
        return o

    def boundary(self, key):
        A, M = self.A, self.M
        mu, bar = key
        q = M.degree_of(mu)
        out = {}
        for nu, c in M.boundary(mu).items():
            add_into(out, {(nu, bar): c})
        for b, c in bar_boundary(A, bar, q).items():
            add_into(out, {(mu, b): c})
        if bar:
            a1 = bar[0]
            s1 = -1 if q % 2 else 1
            for nu, c in M.right(mu, a1).items():
                add_into(out, {(nu, bar[1:]): s1 * c})
            a_s = bar[-1]
            eps = q + sum(A.degree_of(a) + 1 for a in bar[:-1])
            s2 = 1 if ((A.degree_of(a_s) + 1) * eps) % 2 else -1
            for nu, c in M.left(a_s, mu).items():
                add_into(out, {(nu, bar[:-1]): s2 * c})
        return out

    def window(self, lo, hi):
        rep = {}
        for t in range(lo, hi + 1):
            lv = {}
            for mu, bar in self.basis(t):
                lv[len(bar)] = lv.get(len(bar), 0) + 1
            rep[t] = dict(sorted(lv.items()))
        return rep

    def complex(self, lo, hi):
        rep = self.window(max(lo, 0), hi)
        total = sum(sum(v.values()) for v in rep.values())
        if total > self.budget:
            raise BudgetExceeded(f"bar window needs {total} cells, budget {self.budget}",
                                 {"window": _window_json(rep), "cells": total, "budget": self.budget})
        cx = ChainComplex(lo, hi, lambda t: self.basis(t) if t >= 0 else [], self.order, self.boundary)
        return cx, rep


def _window_json(rep):
    return {str(t): {str(s): c for s, c in v.items()} for t, v in sorted(rep.items())}


@dataclass
class HHTable:
    kind: str                  # tor | hh | hh-cohomology
    degrees: list
    groups: dict
    window: dict = field(default_factory=dict)
    names: dict = field(default_factory=dict)
    reps: dict = field(default_factory=dict)

    def ranks(self):
        return [len(self.groups[t]) for t in self.degrees]

    def to_json(self):
        return {"kind": self.kind, "degrees": self.degrees,
                "groups": {str(t): self.groups[t] for t in self.degrees},
                "window": _window_json(self.window), "names": self.names}


def _check_augmented(A):
    b0 = A.basis(0)
    if len(b0) != 1 or A.order(b0[0]) != A.modulus:
        raise DGAError("algebra must be connected with degree 0 equal to the base ring")


def bar_tor(A, N, budget=None) -> HHTable:
    """Tor^A(k, k) through degree N for A over Z/m, k = Z/m."""
    if not A.modulus:
        raise DGAError("bar_tor expects an algebra over Z/m")
    _check_augmented(A)
    H = HochschildChains(A, AugmentationModule(A.modulus), budget)
    cx, rep = H.complex(0, N + 1)
    groups = {t: cx.homology(t).factors for t in range(N + 1)}
    return HHTable("tor", list(range(N + 1)), groups, rep)


def hochschild_homology(A, M, N, budget=None) -> HHTable:
    _check_augmented(A)
    if isinstance(M, int):
        M = AugmentationModule(M)
    H = HochschildChains(A, M, budget)
    cx, rep = H.complex(0, N + 1)
    groups = {t: cx.homology(t).factors for t in range(N + 1)}
    return HHTable("hh", list(range(N + 1)), groups, rep)


def hochschild_cohomology(A, M, tmax, tmin=0, budget=None, method="bar") -> HHTable:
    """HH^t(A, M) for tmin <= t <= tmax.

    method "bar": dual of the bar complex, for M = Z/m with the augmentation
    action; needs bar cells of total degree tmin-1 .. tmax+1.
    method "derivation": the small complex M + Der(A, M) for semifree A.
    """
    if isinstance(M, int):
        M = AugmentationModule(M)
    _check_augmented(A)
    if method == "derivation":
        K = DerivationComplex(A, M)
        cx = K.complex(-(tmax + 1), -tmin + 1)
        groups = {t: cx.homology(-t).factors for t in range(tmin, tmax + 1)}
        return HHTable("hh-cohomology", list(range(tmin, tmax + 1)), groups,
                       {t: {"cells": len(K.basis(-t))} for t in range(tmin, tmax + 1)})
    if not isinstance(M, AugmentationModule):
        raise DGAError("the dual bar method handles Z/m coefficients; use method='derivation'")
    H = HochschildChains(A, M, budget)
    rep = H.window(max(tmin - 1, 0), tmax + 1)
    total = sum(sum(v.values()) for v in rep.values())
    if total > H.budget:
        raise BudgetExceeded(f"bar window needs {total} cells, budget {H.budget}",
                             {"window": _window_json(rep), "cells": total, "budget": H.budget})
    dual = {}
    for t in range(max(tmin, 1), tmax + 2):
        for y in H.basis(t):
            for x, c in H.boundary(y).items():
                dual.setdefault(x, {})[y] = c
    cx = ChainComplex(-(tmax + 1), -tmin + 1, lambda q: H.basis(-q) if q <= 0 else [],
                      H.order, lambda x: dual.get(x, {}))
    groups = {t: cx.homology(-t).factors for t in range(tmin, tmax + 1)}
    return HHTable("hh-cohomology", list(range(tmin, tmax + 1)), groups,
                   {t: rep[t] for t in rep if t >= tmin})


# ----------------------------------------------------------------------------
# derivation complex for semifree algebras

class DerivationComplex:
    """M (+) Der(A, M) for A = (T(V), d): computes HH^t(A, M) = H_{-t}.

    Keys: ("m", mu) in degree |mu|, ("D", v, mu) in degree |mu| - |v| - 1,
    the latter standing for the derivation sending v to mu and the other
    generators to zero.
    """

    def __init__(self, A, M):
        if not hasattr(A, "generators"):
            raise DGAError("the derivation complex needs a semifree presentation")
        check_module(A, M)
        self.A, self.M = A, M
        self.gens = [g.name for g in A.generators]
        self.gdeg = {g.name: g.degree for g in A.generators}
        self.modulus = A.modulus

    def basis(self, q):
        out = []
        if q >= 0:
            out.extend(("m", mu) for mu in self.M.basis(q))
        for v in self.gens:
            out.extend(("D", v, mu) for mu in self.M.basis(q + self.gdeg[v] + 1))
        return out

    def order(self, key):
        o = self.M.order(key[-1])
        if self.modulus:
            o = gcd(o, self.modulus) if o else self.modulus
        return o

    def _act_word_left(self, w, vec):
        for x in reversed(w):
            nv = {}
            for mu, c in vec.items():
                add_into(nv, self.M.left((x,), mu), c)
            vec = nv
        return vec

    def _act_word_right(self, vec, w):
        for x in w:
            nv = {}
            for mu, c in vec.items():
                add_into(nv, self.M.right(mu, (x,)), c)
            vec = nv
        return vec

    def _apply_derivation(self, v, mu, r, word):
        """D(word) for the derivation D(v) = mu of degree r."""
        out = {}
        pre = 0
        for i, x in enumerate(word):
            if x == v:
                s = -1 if (r * pre) % 2 else 1
                val = self._act_word_right({mu: s}, word[i + 1:])
                val = self._act_word_left(word[:i], val)
                add_into(out, val)
            pre += self.gdeg[x]
        return out

    def boundary(self, key):
        M, A = self.M, self.A
        out = {}
        if key[0] == "m":
            mu = key[1]
            q = M.degree_of(mu)
            for nu, c in M.boundary(mu).items():
                add_into(out, {("m", nu): c})
            for v in self.gens:
                # ad_mu(v) = mu v - (-1)^{|mu||v|} v mu
                val = dict(M.right(mu, (v,)))
                s = -1 if (q * self.gdeg[v]) % 2 == 0 else 1
                add_into(val, M.left((v,), mu), s)
                for nu, c in val.items():
                    add_into(out, {("D", v, nu): c})
            return out
        _, v, mu = key
        r = M.degree_of(mu) - self.gdeg[v]
        # -[d, D](w) = -(d_M D(w) - (-1)^r D(d w))
        for w in self.gens:
            val = {}
            if w == v:
                add_into(val, M.boundary(mu))
            sgn = -1 if r % 2 == 0 else 1
            for word, c in A.diff[w].terms.items():
                if v in word:
                    add_into(val, self._apply_derivation(v, mu, r, word), sgn * c)
            for nu, c in val.items():
                add_into(out, {("D", w, nu): -c})
        return out

    def complex(self, lo, hi):
        return ChainComplex(lo, hi, self.basis, self.order, self.boundary)


def center_vanishing_check(p, N):
    """Is p times the unit zero in HH^0_Z(S_{2p-2}^p, tau_{<=N} S_{2p-2}^p)?

    Returns (verdict, certificate) with verdict True or "inconclusive".
    """
    from .tower import build_tower
    if p < 2 or any(p % q == 0 for q in range(2, p)):
        raise DGAError("p must be prime")
    S = build_tower(p, p - 1, max(N, 2 * p - 2), certify=False).presentation
    M = TruncationModule(S, N)
    K = DerivationComplex(S, M)
    cx = K.complex(-1, 1)
    target = {("m", M.unit()): p}
    w = cx.solve(0, target)
    cert = {"p": p, "bound": N, "stable_bound": 4 * p - 4, "target": "p*1"}
    if w is None:
        return "inconclusive", cert
    cert["cochain"] = [[c, list(k)] for k, c in sorted(w.items(), key=lambda t: repr(t[0]))]
    return True, cert


def verify_center_certificate(p, N, cochain):
    from .tower import build_tower
    S = build_tower(p, p - 1, max(N, 2 * p - 2), certify=False).presentation
    M = TruncationModule(S, N)
    K = DerivationComplex(S, M)
    out = {}
    for c, key in cochain:
        add_into(out, K.boundary(tuple(key)), c)
    unit = ("m", M.unit())
    return reduce_vec(out, K.order) == reduce_vec({unit: p}, K.order)


# ----------------------------------------------------------------------------
# binomial obstruction

def bialgebra_primitivity_check(k, p):
    """All C(k+1, i), 0 < i < k+1, divisible by p."""
    if k < 1:
        raise DGAError("k must be positive")
    return all(comb(k + 1, i) % p == 0 for i in range(1, k + 1))


def is_power_of(n, p):
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1


def lucas_binomial_mod(n, i, p):
    """C(n, i) mod p via base-p digits."""
    out = 1
    while n or i:
        a, b = n % p, i % p
        if b > a:
            return 0
        out = out * comb(a, b) % p
        n //= p
        i //= p
    return out

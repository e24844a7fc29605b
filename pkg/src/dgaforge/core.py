"""Finitely presented DGAs: free (semifree) presentations and explicit models.

Two concrete algebra kinds share one duck-typed interface used by every
engine in the package:

    modulus            0 for Z, m for Z/m (the base ring)
    top                highest nonzero degree, or None if unbounded
    unit               key of the unit in degree 0
    basis(k)           ordered list of basis keys in degree k
    order(key)         additive order of a basis key (0 = infinite)
    degree_of(key)
    boundary(key)      dict key -> coefficient, in degree - 1
    product(k1, k2)    dict key -> coefficient

A SemifreePresentation uses words (tuples of generator names) as keys; an
ExplicitDGA uses string labels.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import identity, matvec, smith_normal_form


class DGAError(ValueError):
    pass


# ----------------------------------------------------------------------------
# vectors as dicts

def reduce_vec(v, order_of):
    out = {}
    for k, c in v.items():
        o = order_of(k)
        if o:
            c %= o
        if c:
            out[k] = c
    return out


def add_into(acc, v, scale=1):
    for k, c in v.items():
        n = acc.get(k, 0) + scale * c
        if n:
            acc[k] = n
        else:
            acc.pop(k, None)
    return acc


def d_vec(A, v):
    out = {}
    for k, c in v.items():
        add_into(out, A.boundary(k), c)
    return reduce_vec(out, A.order)


def mul_vec(A, x, y):
    out = {}
    for k1, c1 in x.items():
        for k2, c2 in y.items():
            add_into(out, A.product(k1, k2), c1 * c2)
    return reduce_vec(out, A.order)


def vec_degree(A, v):
    degs = {A.degree_of(k) for k in v}
    if len(degs) > 1:
        raise DGAError(f"inhomogeneous element with degrees {sorted(degs)}")
    return degs.pop() if degs else None


# ----------------------------------------------------------------------------
# presentations

@dataclass(frozen=True)
class Generator:
    name: str
    degree: int

    def __post_init__(self):
        if self.degree < 1:
            raise DGAError(f"generator {self.name} must have positive degree")
        if not self.name or any(ch.isspace() for ch in self.name):
            raise DGAError(f"bad generator name {self.name!r}")


class Element:
    """Homogeneous element of a free algebra: word -> nonzero coefficient."""

    __slots__ = ("terms", "degree", "modulus")

    def __init__(self, terms, degree, modulus=0):
        t = {}
        for w, c in dict(terms).items():
            w = tuple(w)
            c = c % modulus if modulus else c
            if c:
                t[w] = t.get(w, 0) + c
                if modulus:
                    t[w] %= modulus
                if not t[w]:
                    del t[w]
        self.terms = t
        self.degree = degree
        self.modulus = modulus

    @classmethod
    def scalar(cls, c, modulus=0):
        return cls({(): c}, 0, modulus)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, Element) and self.terms == other.terms
                and self.modulus == other.modulus
                and (self.degree == other.degree or not self.terms))

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.modulus))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items()):
            parts.append(f"{c}*{'.'.join(w) if w else '1'}")
        return " + ".join(parts)


class SemifreePresentation:
    """Free graded algebra over Z or Z/m with differentials on generators."""

    def __init__(self, generators, diff=None, modulus=0, check=True):
        if modulus < 0 or modulus == 1:
            raise DGAError("modulus must be 0 (for Z) or > 1")
        self.modulus = modulus
        self.generators = tuple(generators)
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise DGAError("generator names must be unique")
        self._deg = {g.name: g.degree for g in self.generators}
        self._index = {g.name: i for i, g in enumerate(self.generators)}
        self.diff = {}
        for name, e in (diff or {}).items():
            if name not in self._deg:
                raise DGAError(f"differential given for unknown generator {name}")
            terms = e.terms if isinstance(e, Element) else dict(e)
            self.diff[name] = Element(terms, self._deg[name] - 1, modulus)
        for g in self.generators:
            e = self.diff.get(g.name)
            if e is None:
                self.diff[g.name] = Element({}, g.degree - 1, modulus)
                continue
            for w in e.terms:
                if any(x not in self._deg for x in w):
                    raise DGAError(f"d({g.name}) uses an unknown generator")
                if self.word_degree(w) != g.degree - 1:
                    raise DGAError(f"d({g.name}) is not homogeneous of degree {g.degree - 1}")
                if any(self._deg[x] >= g.degree for x in w):
                    raise DGAError(f"d({g.name}) must only use generators of smaller degree")
        self.top = None
        self.unit = ()
        self._basis_cache = {}
        self._bd_cache = {}
        if check:
            self.check_d_squared()

    # -- interface
    def word_degree(self, w):
        return sum(self._deg[x] for x in w)

    degree_of = word_degree

    def gen_degree(self, name):
        return self._deg[name]

    def order(self, key):
        return self.modulus

    def basis(self, k):
        if k < 0:
            return []
        b = self._basis_cache.get(k)
        if b is None:
            if k == 0:
                b = [()]
            else:
                b = []
                for g in self.generators:
                    if g.degree <= k:
                        b.extend((g.name,) + w for w in self.basis(k - g.degree))
            self._basis_cache[k] = b
        return b

    def product(self, w1, w2):
        return {w1 + w2: 1}

    def boundary(self, w):
        out = self._bd_cache.get(w)
        if out is not None:
            return out
        out = {}
        sign_deg = 0
        for i, x in enumerate(w):
            dx = self.diff[x].terms
            if dx:
                s = -1 if sign_deg % 2 else 1
                pre, post = w[:i], w[i + 1:]
                for u, c in dx.items():
                    key = pre + u + post
                    n = out.get(key, 0) + s * c
                    if self.modulus:
                        n %= self.modulus
                    if n:
                        out[key] = n
                    else:
                        out.pop(key, None)
            sign_deg += self._deg[x]
        self._bd_cache[w] = out
        return out

    # -- conveniences
    def element(self, terms):
        terms = dict(terms)
        degs = {self.word_degree(w) for w in terms}
        if len(degs) > 1:
            raise DGAError("inhomogeneous element")
        return Element(terms, degs.pop() if degs else 0, self.modulus)

    def check_d_squared(self):
        for g in self.generators:
            dd = d_vec(self, self.diff[g.name].terms)
            if dd:
                raise DGAError(f"d^2 != 0 on generator {g.name}: {dd}")

    def with_generator(self, gen, dterms):
        gens = self.generators + (gen,)
        diff = {g.name: self.diff[g.name] for g in self.generators}
        diff[gen.name] = dterms
        return SemifreePresentation(gens, diff, self.modulus)

    def permuted(self, order):
        """Same algebra with the generator list reordered (names kept)."""
        gens = [self.generators[i] for i in order]
        return SemifreePresentation(gens, self.diff, self.modulus)

    def __repr__(self):
        base = f"Z/{self.modulus}" if self.modulus else "Z"
        gens = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"SemifreePresentation({base}; {gens})"

    def __eq__(self, other):
        return (isinstance(other, SemifreePresentation) and self.modulus == other.modulus
                and self.generators == other.generators and self.diff == other.diff)

    def __hash__(self):
        return hash((self.modulus, self.generators))


def enumerate_basis(P: SemifreePresentation, k: int):
    if k < 0:
        raise DGAError("degree must be nonnegative")
    return list(P.basis(k))


def differentiate(P: SemifreePresentation, e: Element) -> Element:
    if e.modulus != P.modulus:
        raise DGAError("element and presentation have different base rings")
    degs = {P.word_degree(w) for w in e.terms}
    if len(degs) > 1:
        raise DGAError("cannot differentiate an inhomogeneous element")
    return Element(d_vec(P, e.terms), e.degree - 1, P.modulus)


def multiply(e1: Element, e2: Element) -> Element:
    if e1.modulus != e2.modulus:
        raise DGAError("mismatched base rings")
    out = {}
    for w1, c1 in e1.terms.items():
        for w2, c2 in e2.terms.items():
            out[w1 + w2] = out.get(w1 + w2, 0) + c1 * c2
    return Element(out, e1.degree + e2.degree, e1.modulus)


def base_change(P: SemifreePresentation, m: int) -> SemifreePresentation:
    if m <= 1:
        raise DGAError("base change needs m > 1")
    if P.modulus:
        raise DGAError("base change expects a presentation over Z")
    return SemifreePresentation(P.generators, {k: v.terms for k, v in P.diff.items()}, m)


def free_presentation(gens, diff=None, modulus=0):
    """Shorthand: gens as [(name, degree)], diff as {name: {word_tuple: coef}}."""
    return SemifreePresentation([Generator(n, d) for n, d in gens], diff or {}, modulus)


# ----------------------------------------------------------------------------
# text format

FORMAT_HEADER = "dga-forge presentation 1"


def dumps_presentation(P: SemifreePresentation) -> str:
    lines = [FORMAT_HEADER, f"base Z/{P.modulus}" if P.modulus else "base Z"]
    for g in P.generators:
        lines.append(f"gen {g.name} {g.degree}")
    rank = {g.name: i for i, g in enumerate(P.generators)}
    for g in P.generators:
        terms = P.diff[g.name].terms
        for w in sorted(terms, key=lambda w: (len(w), [rank[x] for x in w])):
            lines.append(" ".join(["diff", g.name, str(terms[w])] + list(w)))
    return "\n".join(lines) + "\n"


def loads_presentation(text: str) -> SemifreePresentation:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != FORMAT_HEADER:
        raise DGAError("missing or unsupported presentation header")
    modulus = None
    gens, diff = [], {}
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "base":
            if len(parts) != 2 or modulus is not None:
                raise DGAError(f"bad base line: {ln}")
            modulus = 0 if parts[1] == "Z" else int(parts[1].removeprefix("Z/"))
        elif parts[0] == "gen":
            if len(parts) != 3:
                raise DGAError(f"bad generator line: {ln}")
            gens.append(Generator(parts[1], int(parts[2])))
        elif parts[0] == "diff":
            if len(parts) < 3:
                raise DGAError(f"bad differential line: {ln}")
            t = diff.setdefault(parts[1], {})
            w = tuple(parts[3:])
            t[w] = t.get(w, 0) + int(parts[2])
        else:
            raise DGAError(f"unknown line: {ln}")
    if modulus is None:
        raise DGAError("missing base line")
    return SemifreePresentation(gens, diff, modulus)


# ----------------------------------------------------------------------------
# explicit models

class ExplicitDGA:
    """Degreewise finite DGA with explicit bases, differentials and products.

    Each basis element carries an additive order (0 = copy of Z), which lets
    quotient truncations over Z and Z/m-modules inside Z-DGAs live here.
    """

    def __init__(self, basis, orders, diff, mult, unit, modulus=0, name="", check=True):
        self.modulus = modulus
        self.name = name
        self._basis = {k: list(v) for k, v in basis.items()}
        self.top = max((k for k, v in self._basis.items() if v), default=0)
        self._deg = {}
        self._order = {}
        for k, labels in self._basis.items():
            for lab, o in zip(labels, orders[k]):
                if lab in self._deg:
                    raise DGAError(f"duplicate basis label {lab}")
                self._deg[lab] = k
                self._order[lab] = o
        self._diff = {lab: reduce_vec(dict(diff.get(lab, {})), self.order) for lab in self._deg}
        self._mult = {}
        for (a, b), v in mult.items():
            v = reduce_vec(dict(v), self.order)
            if v:
                self._mult[a, b] = v
        self.unit = unit
        if check:
            self.check()

    def basis(self, k):
        return self._basis.get(k, [])

    def degree_of(self, lab):
        return self._deg[lab]

    def order(self, lab):
        return self._order[lab]

    def boundary(self, lab):
        return self._diff[lab]

    def product(self, a, b):
        return self._mult.get((a, b), {})

    def labels(self):
        return list(self._deg)

    def check(self):
        labs = list(self._deg)
        for a in labs:
            if d_vec(self, self._diff[a]):
                raise DGAError(f"d^2 != 0 on {a}")
            for k in self._diff[a]:
                if self._deg[k] != self._deg[a] - 1:
                    raise DGAError(f"d({a}) has wrong degree")
            o = self._order[a]
            if o:
                bad = reduce_vec({k: c * o for k, c in self._diff[a].items()}, self.order)
                if bad:
                    raise DGAError(f"differential of {a} is not well defined on Z/{o}")
        for a in labs:
            if self.product(self.unit, a) != {a: 1} and self.reduce({a: 1}):
                raise DGAError(f"unit fails on {a}")
            if self.product(a, self.unit) != {a: 1} and self.reduce({a: 1}):
                raise DGAError(f"unit fails on {a}")
        for a in labs:
            for b in labs:
                da, db = self._deg[a], self._deg[b]
                if da + db > self.top:
                    continue
                lhs = d_vec(self, self.product(a, b))
                rhs = mul_vec(self, self._diff[a], {b: 1})
                add_into(rhs, mul_vec(self, {a: 1}, self._diff[b]), -1 if da % 2 else 1)
                if lhs != reduce_vec(rhs, self.order):
                    raise DGAError(f"Leibniz rule fails on ({a}, {b})")
                for c in labs:
                    if da + db + self._deg[c] > self.top:
                        continue
                    l = mul_vec(self, self.product(a, b), {c: 1})
                    r = mul_vec(self, {a: 1}, self.product(b, c))
                    if l != r:
                        raise DGAError(f"associativity fails on ({a}, {b}, {c})")

    def reduce(self, v):
        return reduce_vec(v, self.order)

    def __repr__(self):
        return f"ExplicitDGA({self.name or '?'}; top={self.top})"


def formal_truncated_polynomial(m, d, N, k=None, modulus=0, var="x"):
    """Z/m[x_d]/x^k with zero differential, through degree N (k=None: polynomial).

    `modulus` is the base ring tag; the modules are Z/m either way.
    """
    if m <= 1 or d < 1:
        raise DGAError("need m > 1 and d >= 1")
    basis, orders, mult = {}, {}, {}
    powers = []
    j = 0
    while j * d <= N and (k is None or j < k):
        lab = "1" if j == 0 else (f"{var}{d}" if j == 1 else f"{var}{d}^{j}")
        basis[j * d] = [lab]
        orders[j * d] = [m]
        powers.append(lab)
        j += 1
    for i, a in enumerate(powers):
        for jj, b in enumerate(powers):
            if i + jj < len(powers):
                mult[a, b] = {powers[i + jj]: 1}
    name = f"Z/{m}[{var}{d}]" + (f"/{var}{d}^{k}" if k else "")
    return ExplicitDGA(basis, orders, {}, mult, "1", modulus, name)


def formal_exterior(m, d, N=None, modulus=0, var="x"):
    N = d if N is None else N
    A = formal_truncated_polynomial(m, d, N, 2, modulus, var)
    A.name = f"Lambda_Z/{m}[{var}{d}]"
    return A


def formal_tensor_exterior(m, d, N, modulus=0):
    """Z/m[u_d] (x) Lambda[e_1] with zero differential through degree N."""
    basis, orders, mult = {}, {}, {}
    elems = []  # (label, j, eps)
    j = 0
    while j * d <= N:
        for eps in (0, 1):
            deg = j * d + eps
            if deg > N:
                continue
            lab = ("1" if j == 0 else (f"u{d}" if j == 1 else f"u{d}^{j}"))
            if eps:
                lab = "e1" if j == 0 else lab + "*e1"
            basis.setdefault(deg, []).append(lab)
            orders.setdefault(deg, []).append(m)
            elems.append((lab, j, eps))
        j += 1
    lookup = {(j, e): lab for lab, j, e in elems}
    for la, ja, ea in elems:
        for lb, jb, eb in elems:
            if ea and eb:
                continue
            tgt = lookup.get((ja + jb, ea + eb))
            if tgt is not None:
                # e1 is odd, u even: u^a e * u^b = u^(a+b) e, graded commutative
                mult[la, lb] = {tgt: 1}
    return ExplicitDGA(basis, orders, {}, mult, "1", modulus, f"Z/{m}[u{d}]xLambda[e1]")


# ----------------------------------------------------------------------------
# truncation

class _Truncation:
    """Helper describing the quotient of degree N by boundaries."""

    def __init__(self, A, N):
        keys = A.basis(N)
        n = len(keys)
        self.keys = keys
        self.index = {k: i for i, k in enumerate(keys)}
        rel = []
        for b in A.basis(N + 1) if (A.top is None or N + 1 <= A.top) else []:
            v = A.boundary(b)
            col = [0] * n
            for k, c in v.items():
                col[self.index[k]] = c
            if any(col):
                rel.append(col)
        for i, k in enumerate(keys):
            o = A.order(k)
            if o:
                rel.append([o if j == i else 0 for j in range(n)])
        if n:
            M = [[col[i] for col in rel] for i in range(n)] if rel else [[] for _ in range(n)]
            if rel:
                snf = smith_normal_form(M)
                diag = [snf.D[i][i] if i < len(rel) else 0 for i in range(n)]
                self.U, self.Uinv = snf.U, snf.Uinv
            else:
                diag = [0] * n
                self.U, self.Uinv = identity(n), identity(n)
        else:
            diag, self.U, self.Uinv = [], [], []
        self.keep = [i for i in range(n) if diag[i] != 1]
        self.orders = [diag[i] for i in self.keep]

    def project(self, v):
        x = [0] * len(self.keys)
        for k, c in v.items():
            x[self.index[k]] += c
        y = matvec(self.U, x) if x else []
        out = []
        for i, o in zip(self.keep, self.orders):
            c = y[i] % o if o else y[i]
            out.append(c)
        return out

    def lift(self, j):
        col = self.keep[j]
        return {self.keys[i]: self.Uinv[i][col] for i in range(len(self.keys)) if self.Uinv[i][col]}


def _key_label(k):
    if isinstance(k, tuple):
        return ".".join(k) if k else "1"
    return str(k)


def truncate(A, N: int) -> ExplicitDGA:
    """Quotient truncation: degrees <= N, degree N modulo boundaries."""
    if N < 0:
        raise DGAError("truncation bound must be nonnegative")
    tr = _Truncation(A, N)
    basis, orders, diff, mult = {}, {}, {}, {}
    label = {}
    for k in range(N):
        for key in A.basis(k):
            label[key] = _key_label(key)
        basis[k] = [label[x] for x in A.basis(k)]
        orders[k] = [A.order(x) for x in A.basis(k)]
    top_labels = []
    for j in range(len(tr.keep)):
        lift = tr.lift(j)
        if len(lift) == 1 and abs(next(iter(lift.values()))) == 1:
            lab = "[" + _key_label(next(iter(lift))) + "]"
            if next(iter(lift.values())) < 0:
                lab = "-" + lab
        else:
            lab = f"[t{N}_{j}]"
        top_labels.append(lab)
    basis[N] = top_labels
    orders[N] = list(tr.orders)

    def convert(v, deg):
        if deg > N:
            return {}
        if deg < N:
            return {label[k]: c for k, c in v.items()}
        coords = tr.project(v)
        return {top_labels[j]: c for j, c in enumerate(coords) if c}

    for k in range(1, N):
        for key in A.basis(k):
            diff[label[key]] = convert(A.boundary(key), k - 1)
    for j, lab in enumerate(top_labels):
        if N >= 1:
            diff[lab] = convert(d_vec(A, tr.lift(j)), N - 1)
    elems = [(label[key], {key: 1}, k) for k in range(N) for key in A.basis(k)]
    elems += [(lab, tr.lift(j), N) for j, lab in enumerate(top_labels)]
    for la, va, da in elems:
        for lb, vb, db in elems:
            if da + db > N:
                continue
            mult[la, lb] = convert(mul_vec(A, va, vb), da + db)
    unit = label[A.unit] if N > 0 else top_labels[0] if top_labels else None
    name = f"trunc{N}({getattr(A, 'name', '') or repr(A)})"
    return ExplicitDGA(basis, orders, diff, mult, unit, A.modulus, name, check=False)


def truncation_map(A, T: ExplicitDGA, N: int):
    """Vector map A -> truncate(A, N) on homogeneous dict vectors."""
    tr = _Truncation(A, N)
    top = T.basis(N)

    def apply(v):
        if not v:
            return {}
        deg = A.degree_of(next(iter(v)))
        if deg > N:
            return {}
        if deg < N:
            return T.reduce({_key_label(k): c for k, c in v.items()})
        coords = tr.project(v)
        return {top[j]: c for j, c in enumerate(coords) if c}
    return apply

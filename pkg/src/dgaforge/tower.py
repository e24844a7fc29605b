"""Cell attachment, the towers S_{2n}^m and sculpted root-adjunction surrogates."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .complexes import algebra_complex
from .core import DGAError, Element, Generator, SemifreePresentation, d_vec
from .homology import HomologyTable, RingTarget, ring_iso_check, vec_to_json
from .linalg import LatticeQuotient, kernel_basis, solve_linear


class CertificationError(DGAError):
    def __init__(self, msg, degree=None, log=None):
        super().__init__(msg)
        self.degree = degree
        self.log = log or []


def _fresh_name(P, base):
    names = {g.name for g in P.generators}
    if base not in names:
        return base
    i = 2
    while f"{base}_{i}" in names:
        i += 1
    return f"{base}_{i}"


def _as_terms(P, z):
    if isinstance(z, Element):
        if z.modulus != P.modulus:
            raise DGAError("cycle lives over a different base ring")
        return dict(z.terms), z.degree
    z = dict(z)
    degs = {P.word_degree(w) for w in z}
    if len(degs) > 1:
        raise DGAError("cycle must be homogeneous")
    return z, (degs.pop() if degs else 0)


def kill_classes(P, cycles, names=None):
    """Attach one cell per cycle in a single step."""
    gens = list(P.generators)
    diff = {g.name: P.diff[g.name] for g in P.generators}
    Q = P
    for i, z in enumerate(cycles):
        terms, k = _as_terms(P, z)
        if d_vec(P, terms):
            raise DGAError("kill_class needs a cycle")
        name = names[i] if names else None
        name = name or _fresh_name(Q, f"y{k + 1}")
        if any(g.name == name for g in gens):
            raise DGAError(f"generator {name} already exists")
        gens.append(Generator(name, k + 1))
        diff[name] = terms
        Q = SemifreePresentation(gens, diff, P.modulus, check=False)
    Q = SemifreePresentation(gens, diff, P.modulus)
    return Q


def kill_class(P: SemifreePresentation, z, name=None) -> SemifreePresentation:
    return kill_classes(P, [z], [name] if name else None)


def empty_presentation(modulus=0):
    return SemifreePresentation([], {}, modulus)


@dataclass
class TowerSpec:
    m: int
    n: int
    N: int
    presentation: SemifreePresentation
    killed: list            # (generator name, cycle dict) in attachment order
    top_cycle: dict         # representative of x_{2n}
    table: HomologyTable = None
    certificate: object = None

    def stage_cycle(self, s):
        """Representative of x_{2s} in stage s (killed by y_{2s+1} for s < n)."""
        if s == self.n:
            return self.top_cycle
        return self.killed[s][1]

    def to_json(self):
        return {
            "m": self.m, "n": self.n, "bound": self.N,
            "stages": [{"generator": name, "degree": self.presentation.gen_degree(name),
                        "kills": vec_to_json(z)} for name, z in self.killed],
            "top_class": {"name": f"x{2 * self.n}", "representative": vec_to_json(self.top_cycle)},
            "certificate": {"target": f"Z/{self.m}[x{2 * self.n}]", "ok": bool(self.certificate),
                            "witness": self.certificate.witness if self.certificate else {},
                            "bound": self.N},
        }


def _tower_presentation(m, n):
    """Stage-n tower with the deterministic killed representatives."""
    if m <= 1 or n < 1:
        raise DGAError("need m > 1 and n >= 1")
    P = kill_class(empty_presentation(), {(): m}, "y1")
    killed = [("y1", {(): m})]
    for s in range(1, n):
        h = algebra_complex(P, 0, 2 * s + 1).homology(2 * s)
        if h.factors != [m]:
            raise CertificationError(f"stage {s}: H_{2 * s} = {h.factors}, expected Z/{m}", 2 * s)
        z = h.generators[0]
        P = kill_class(P, z, f"y{2 * s + 1}")
        killed.append((f"y{2 * s + 1}", z))
    h = algebra_complex(P, 0, 2 * n + 1).homology(2 * n)
    if h.factors != [m]:
        raise CertificationError(f"stage {n}: H_{2 * n} = {h.factors}, expected Z/{m}", 2 * n)
    return P, killed, h.generators[0]


def build_tower(m, n, N, certify=True, budget=None) -> TowerSpec:
    if N < 2 * n:
        raise DGAError("bound must satisfy N >= 2n")
    P, killed, top = _tower_presentation(m, n)
    spec = TowerSpec(m, n, N, P, killed, top)
    if certify:
        T = HomologyTable(P, N, budget=budget)
        iso = ring_iso_check(T, RingTarget("polynomial", m, 2 * n))
        if not iso:
            raise CertificationError(f"tower certification failed: {iso.reason}", iso.failing_degree)
        T.names[f"x{2 * n}"] = (2 * n, [1])
        spec.table, spec.certificate = T, iso
    return spec


def trivial_algebra_model(m, N) -> SemifreePresentation:
    """Tower continued until homology vanishes in degrees 1..N."""
    if m <= 1 or N < 1:
        raise DGAError("need m > 1 and N >= 1")
    P = kill_class(empty_presentation(), {(): m}, "y1")
    s = 1
    while 2 * s <= N:
        h = algebra_complex(P, 0, 2 * s + 1).homology(2 * s)
        P = kill_class(P, h.generators[0], f"y{2 * s + 1}")
        s += 1
    cx = algebra_complex(P, 0, N + 1)
    if cx.homology(0).factors != [m]:
        raise CertificationError("H_0 is not Z/m", 0)
    for k in range(1, N + 1):
        if cx.homology(k).factors:
            raise CertificationError(f"H_{k} does not vanish", k)
    return P


# ----------------------------------------------------------------------------
# sculpting

@dataclass
class SculptRecord:
    m: int
    n: int
    l: int
    N: int
    presentation: SemifreePresentation
    log: list = field(default_factory=list)
    table: HomologyTable = None
    certificate: object = None
    witness: dict = field(default_factory=dict)

    def to_json(self):
        P = self.presentation
        return {
            "m": self.m, "n": self.n, "l": self.l, "bound": self.N,
            "generators": [[g.name, g.degree] for g in P.generators],
            "log": self.log,
            "witness": self.witness,
            "certificate": {"target": f"Z/{self.m}[x{2 * self.n}]", "ok": bool(self.certificate),
                            "generator": "[g]", "bound": self.N},
        }


def _power(P, name, j):
    return {(name,) * j: 1}


def _split_off(h, coords, m):
    """Generators (as coordinate vectors) of ker(phi) for phi: H -> Z/m, phi(coords) = 1."""
    r = len(h.factors)
    # unknowns phi_i; rows: sum c_i phi_i = 1, o_i phi_i = 0 (mod m)
    rows = [list(coords)]
    rhs = [1]
    for i, o in enumerate(h.factors):
        if o:
            rows.append([o if j == i else 0 for j in range(r)])
            rhs.append(0)
    phi = solve_linear(rows, rhs, m)
    if phi is None:
        return None
    K = kernel_basis([phi + [m]], 1, r + 1)
    Kb = [v[:r] for v in K]
    rel = [[o if j == i else 0 for j in range(r)] for i, o in enumerate(h.factors) if o]
    Q = LatticeQuotient(r, Kb, rel)
    return Q.generators


def sculpt_polynomial(m, n, l, N, certify=True) -> SculptRecord:
    if m <= 1 or n < 1 or l < 1:
        raise DGAError("need m > 1 and n, l >= 1")
    if N < 2 * n * l:
        raise DGAError("bound must satisfy N >= 2nl")
    P, killed, top = _tower_presentation(m, n * l)
    log = [{"cell": name, "degree": P.gen_degree(name), "kills": vec_to_json(z), "reason": "tower"}
           for name, z in killed]
    P = SemifreePresentation(list(P.generators) + [Generator("g", 2 * n)],
                             {**{g.name: P.diff[g.name] for g in P.generators}, "g": {}}, 0)
    dc = dict(top)
    gl = ("g",) * l
    dc[gl] = dc.get(gl, 0) - 1
    P = kill_class(P, dc, "c")
    log.append({"cell": "c", "degree": 2 * n * l + 1, "kills": vec_to_json(dc),
                "reason": f"identify x{2 * n * l} with g^{l}"})
    for k in range(1, N + 1):
        h = algebra_complex(P, 0, k + 1).homology(k)
        if not h.factors:
            continue
        if k % (2 * n) == 0:
            j = k // (2 * n)
            coords = h.classify(_power(P, "g", j))
            gens = _split_off(h, coords, m)
            if gens is None:
                raise CertificationError(f"degree {k}: [g^{j}] does not split off a Z/{m}", k, log)
        else:
            gens = [[int(i == t) for i in range(len(h.factors))] for t in range(len(h.factors))]
        cycles = []
        for v in gens:
            z = {}
            for c, rep in zip(v, h.generators):
                if c:
                    for w, a in rep.items():
                        z[w] = z.get(w, 0) + c * a
            z = {w: a for w, a in z.items() if a}
            if z and any(h.classify(z)):
                cycles.append(z)
        names = [f"w{k + 1}_{i}" for i in range(len(cycles))]
        P = kill_classes(P, cycles, names)
        for name, z in zip(names, cycles):
            log.append({"cell": name, "degree": k + 1, "kills": vec_to_json(z), "reason": "surplus"})
    rec = SculptRecord(m, n, l, N, P, log)
    rec.witness = {"identifies": f"x{2 * n * l}", "with": f"g^{l}", "cell": "c",
                   "tower_class": vec_to_json(top)}
    if certify:
        T = HomologyTable(P, N)
        iso = ring_iso_check(T, RingTarget("polynomial", m, 2 * n))
        if not iso:
            raise CertificationError(f"sculpt certification failed: {iso.reason}", iso.failing_degree, log)
        gc = T.classify(2 * n, {("g",): 1})
        if not (len(gc) == 1 and gcd(gc[0], m) == 1):
            raise CertificationError("[g] does not generate H_2n", 2 * n, log)
        T.names[f"x{2 * n}"] = (2 * n, gc)
        rec.table, rec.certificate = T, iso
    return rec

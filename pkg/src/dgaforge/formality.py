"""Maps from tower stages into a target and formality profiles of truncations."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .complexes import algebra_complex
from .core import DGAError, add_into, d_vec, mul_vec, reduce_vec
from .homology import HomologyTable, RingTarget, ring_iso_check, tables_isomorphic, vec_to_json
from .tower import TowerSpec, _tower_presentation


class HypothesisViolation(DGAError):
    pass


def evaluate(A, images, z):
    """Image of a word polynomial z under generator images (dicts in A)."""
    out = {}
    unit = {A.unit: 1}
    for w, c in z.items():
        v = unit
        for x in w:
            v = mul_vec(A, v, images[x])
            if not v:
                break
        if v:
            add_into(out, v, c)
    return reduce_vec(out, A.order)


@dataclass
class MapAssignment:
    m: int
    stage: int
    images: dict
    verified: bool = False

    def to_json(self):
        return {"m": self.m, "stage": self.stage, "verified": self.verified,
                "images": {k: vec_to_json(v) for k, v in self.images.items()}}


@dataclass
class Obstruction:
    stage: int            # extension to y_{2s+1} failed
    degree: int           # 2s
    cycle: dict           # f(z_{2s}) in A
    coords: list          # its class in H_{2s}(A)
    partial: MapAssignment = None

    def to_json(self):
        return {"stage": self.stage, "degree": self.degree, "class": self.coords,
                "cycle": vec_to_json(self.cycle)}


class _Walker:
    """Extends a map S_{2s}^m -> A one generator at a time."""

    def __init__(self, A, m, N, cx=None, seed=None):
        self.A, self.m, self.N = A, m, N
        self.cx = cx or algebra_complex(A, 0, N + 1)
        self.rng = random.Random(seed) if seed is not None else None

    def _perturb(self, k, a):
        # add a random cycle in degree k: a boundary plus homology reps
        if self.rng is None or (self.A.top is not None and k > self.A.top):
            return a
        A = self.A
        out = dict(a)
        if k + 1 <= self.N + 1 and (A.top is None or k + 1 <= A.top):
            r = {x: self.rng.randint(-2, 2) for x in A.basis(k + 1)}
            add_into(out, d_vec(A, {x: c for x, c in r.items() if c}))
        if k < self.cx.hi:
            for g in self.cx.homology(k).generators:
                add_into(out, g, self.rng.randint(-2, 2))
        return reduce_vec(out, A.order)

    def solve(self, k, z):
        if self.A.top is not None and k > self.A.top:
            return {}
        if not z:
            return self._perturb(k + 1, {})
        w = self.cx.solve(k, z)
        if w is None:
            return None
        return self._perturb(k + 1, w)

    def classify(self, k, z):
        if self.A.top is not None and k > self.A.top:
            return []
        return self.cx.homology(k).classify(z)


def _walk(A, m, N, killed, upto, cx=None, seed=None, top=None):
    """Extend through killed cells; returns (MapAssignment, Obstruction or None)."""
    W = _Walker(A, m, N, cx, seed)
    images = {}
    a1 = W.solve(0, reduce_vec({A.unit: m}, A.order))
    if a1 is None:
        raise HypothesisViolation(f"m*1 is not a boundary in the target: H_0 is not Z/{m}")
    images["y1"] = a1
    for s in range(1, upto):
        name, z = killed[s]
        fz = evaluate(A, images, z)
        coords = W.classify(2 * s, fz)
        if any(coords):
            return MapAssignment(m, s, images), Obstruction(s, 2 * s, fz, coords)
        a = W.solve(2 * s, fz)
        if a is None:  # cannot happen for a zero class; guard anyway
            return MapAssignment(m, s, images), Obstruction(s, 2 * s, fz, coords)
        images[name] = a
    if top is not None and 2 * upto <= N:
        fz = evaluate(A, images, top)
        coords = W.classify(2 * upto, fz)
        if any(coords):
            return MapAssignment(m, upto, images), Obstruction(upto, 2 * upto, fz, coords)
    return MapAssignment(m, upto, images), None


def verify_map(A, P, images):
    """Chain-map identity d f(y) = f(d y) for every generator of P."""
    for g in P.generators:
        lhs = d_vec(A, images.get(g.name, {}))
        rhs = evaluate(A, images, P.diff[g.name].terms)
        if lhs != rhs:
            return False
    return True


def find_dga_map(stage: TowerSpec, A, N, seed=None):
    """Map S_{2n}^m -> A, or the obstruction class met on the way.

    Returns (MapAssignment or None, Obstruction or None, top_class) where
    top_class is the class of the image of x_{2n} (None if 2n > N).
    """
    n, m = stage.n, stage.m
    if N < 2 * n - 1:
        raise DGAError(f"bound {N} is below the top generator degree {2 * n - 1}")
    f, obs = _walk(A, m, N, stage.killed, n, seed=seed)
    if obs is not None:
        return None, obs, None
    f.verified = verify_map(A, stage.presentation, f.images)
    top_class = None
    if 2 * n <= N:
        W = _Walker(A, m, N)
        top_class = W.classify(2 * n, evaluate(A, f.images, stage.top_cycle))
    return f, None, top_class


@dataclass
class FormalityProfile:
    bound: int
    m: int
    t0: int | None
    obstruction: Obstruction = None
    map: MapAssignment = None
    notes: list = field(default_factory=list)

    @property
    def formal_through_bound(self):
        return self.t0 is None

    def describe(self):
        if self.t0 is None:
            return f"formal through {self.bound}"
        return f"first non-formal truncation at {self.t0}"

    def to_json(self):
        return {"bound": self.bound, "m": self.m, "t0": self.t0, "summary": self.describe(),
                "obstruction": self.obstruction.to_json() if self.obstruction else None,
                "map": self.map.to_json() if self.map else None}


def check_hypotheses(A, m, N, T=None):
    T = T or HomologyTable(A, N, with_products=False)
    if T.groups[0] != [m]:
        raise HypothesisViolation(f"H_0 = {T.groups[0] or 0}, expected Z/{m}")
    odd = [k for k in range(1, N + 1, 2) if T.groups[k]]
    if odd:
        raise HypothesisViolation(f"odd homology present in degrees {odd}")
    return T


def formality_profile(A, m, N, seed=None, check=True) -> FormalityProfile:
    if N < 1:
        raise DGAError("bound must be positive")
    cx = algebra_complex(A, 0, N + 1)
    if check:
        T = HomologyTable(A, N, complex_=cx, with_products=False)
        check_hypotheses(A, m, N, T)
    smax = max(N // 2, 1)
    _, killed, top = _tower_presentation(m, smax)
    f, obs = _walk(A, m, N, killed, smax, cx=cx, seed=seed, top=top)
    prof = FormalityProfile(N, m, None if obs is None else obs.degree, obs, f)
    f.verified = verify_profile(A, prof)
    return prof


def verify_profile(A, prof: FormalityProfile):
    """Re-check a profile: the images form a chain map on the stage they cover
    and the recorded obstruction cycle is a cycle which is not a boundary."""
    m, N = prof.m, prof.bound
    smax = max(N // 2, 1)
    P, killed, top = _tower_presentation(m, smax)
    images = prof.map.images
    names = [g.name for g in P.generators if g.name in images]
    for name in names:
        if d_vec(A, images[name]) != evaluate(A, images, P.diff[name].terms):
            return False
    if prof.t0 is None:
        return True
    cx = algebra_complex(A, 0, N + 1)
    z = prof.obstruction.cycle
    s = prof.obstruction.stage
    src = killed[s][1] if s < smax else top
    if evaluate(A, images, src) != z or d_vec(A, z):
        return False
    return cx.solve(prof.t0, z) is None


def distinguish(A, B, m, N):
    TA, TB = HomologyTable(A, N), HomologyTable(B, N)
    iso = tables_isomorphic(TA, TB)
    if not iso:
        return {"verdict": "distinct", "reason": f"homology differs: {iso.reason}"}
    pa, pb = formality_profile(A, m, N), formality_profile(B, m, N)
    if pa.t0 != pb.t0:
        return {"verdict": "distinct", "reason": "formality profiles differ",
                "profiles": [pa.describe(), pb.describe()]}
    return {"verdict": f"inconclusive at bound {N}", "profiles": [pa.describe(), pb.describe()]}


def exterior_formality_check(A, p, N):
    T = HomologyTable(A, N)
    pos = [k for k in range(1, N + 1) if T.groups[k]]
    if not pos or pos[0] % 2:
        raise HypothesisViolation("homology is not an exterior algebra on an even class")
    d = pos[0]
    iso = ring_iso_check(T, RingTarget("exterior", p, d))
    if not iso:
        raise HypothesisViolation(f"homology is not Lambda_Z/{p}[x{d}]: {iso.reason}")
    prof = formality_profile(A, p, N)
    return "formal" if prof.t0 is None else "non-formal"

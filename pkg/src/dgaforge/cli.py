"""dga-forge command line.

Exit codes: 0 success, 1 internal error, 2 hypothesis violation (also a
failed `verify`), 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .bar import (bar_tor, bialgebra_primitivity_check, center_vanishing_check, hochschild_cohomology,
                  hochschild_homology, is_power_of, lucas_binomial_mod, verify_center_certificate)
from .complexes import LIMITS, BudgetExceeded
from .core import (DGAError, base_change, dumps_presentation, formal_exterior, formal_tensor_exterior,
                   formal_truncated_polynomial, loads_presentation, truncate)
from .formality import HypothesisViolation, formality_profile, verify_profile
from .homology import HomologyTable
from .koszul import koszul_dual_homology
from .tower import CertificationError, build_tower, sculpt_polynomial, trivial_algebra_model

SCHEMA_VERSION = 1


@dataclass
class JobConfig:
    command: str
    m: int | None = None
    n: int | None = None
    l: int | None = None
    N: int | None = None
    p: int | None = None
    k: int | None = None
    target: str | None = None
    cohomology: bool = False
    trivial: bool = False
    seed: int | None = None
    max_cells: int | None = None
    max_dim: int | None = None
    extra: dict = field(default_factory=dict)

    def validate(self):
        for name in ("m", "n", "l", "N", "p", "k"):
            v = getattr(self, name)
            if v is not None and v < (0 if name == "N" else 1):
                raise DGAError(f"-{name} must be positive")
        if self.m is not None and self.m < 2:
            raise DGAError("-m must be at least 2")

    def job_json(self):
        d = asdict(self)
        d.pop("max_cells")
        d.pop("max_dim")
        return {k: v for k, v in d.items() if v not in (None, False, {})}


# ----------------------------------------------------------------------------
# targets

_FORMAL = re.compile(r"^Z/(\d+)\[x(\d+)\](?:/x\d+\^(\d+))?$")
_EXT = re.compile(r"^(?:Lambda_)?Z/(\d+)\[x(\d+)\]$")
_TENSOR = re.compile(r"^Z/(\d+)\[u(\d+)\]xLambda\[e1\]$")


def parse_target(text, N, base=0):
    """Build an algebra from a target string; returns (algebra, m or None)."""
    try:
        return _parse_target(text, N, base)
    except (ValueError, OSError) as e:
        if isinstance(e, DGAError):
            raise
        raise DGAError(f"bad target {text!r}: {e}") from e


def _parse_target(text, N, base):
    text = text.strip()
    trunc = None
    if "@" in text:
        text, t = text.rsplit("@", 1)
        trunc = int(t)
    kind, _, rest = text.partition(":")
    if kind == "formal":
        mt = _FORMAL.match(rest)
        mx = _TENSOR.match(rest)
        if mt:
            m, d, k = int(mt.group(1)), int(mt.group(2)), mt.group(3)
            A = formal_truncated_polynomial(m, d, N, int(k) if k else None, modulus=base)
        elif mx:
            m, d = int(mx.group(1)), int(mx.group(2))
            A = formal_tensor_exterior(m, d, N, modulus=base)
        else:
            raise DGAError(f"cannot parse formal target {rest!r}")
    elif kind == "exterior":
        mt = _EXT.match(rest)
        if not mt:
            raise DGAError(f"cannot parse exterior target {rest!r}")
        m, d = int(mt.group(1)), int(mt.group(2))
        A = formal_exterior(m, d, N, modulus=base)
    elif kind in ("tower", "sculpt", "trivial", "file"):
        if kind == "tower":
            m, n = (int(x) for x in rest.split(","))
            A = build_tower(m, n, max(N, 2 * n), certify=False).presentation
        elif kind == "sculpt":
            m, n, l = (int(x) for x in rest.split(","))
            A = sculpt_polynomial(m, n, l, max(N, 2 * n * l), certify=False).presentation
        elif kind == "trivial":
            m = int(rest)
            A = trivial_algebra_model(m, N)
        else:
            A = loads_presentation(Path(rest).read_text())
            m = None
        if base:
            A = base_change(A, base)
    else:
        raise DGAError(f"unknown target kind {kind!r}")
    if trunc is not None:
        A = truncate(A, trunc)
    return A, m


# ----------------------------------------------------------------------------
# jobs

def _job_build_tower(c):
    T = build_tower(c.m, c.n, c.N)
    return "tower", {"tower": T.to_json(), "homology": T.table.to_json(),
                     "poincare": T.table.poincare(),
                     "presentation": dumps_presentation(T.presentation)}


def _job_homology(c):
    A, _ = parse_target(c.target, c.N)
    T = HomologyTable(A, c.N)
    return "homology-table", {"homology": T.to_json(), "poincare": T.poincare()}


def _job_detect(c):
    A, m = parse_target(c.target, c.N)
    m = c.m or m
    if m is None:
        raise DGAError("cannot infer m from the target; pass -m")
    prof = formality_profile(A, m, c.N, seed=c.seed)
    if not verify_profile(A, prof):
        raise DGAError("internal: profile failed re-verification")
    return "formality-profile", prof.to_json()


def _job_sculpt(c):
    R = sculpt_polynomial(c.m, c.n, c.l, c.N)
    prof = formality_profile(R.presentation, c.m, c.N)
    return "sculpt-record", {"record": R.to_json(), "homology": R.table.to_json(),
                             "presentation": dumps_presentation(R.presentation),
                             "profile": prof.to_json()}


def _job_tor(c):
    if c.target:
        A, _ = parse_target(c.target, c.N, base=c.m)
    else:
        A = base_change(build_tower(c.m, c.n, max(c.N, 2 * c.n), certify=False).presentation, c.m)
    return "hh-table", bar_tor(A, c.N).to_json()


def _job_hochschild(c):
    if c.trivial:
        A = trivial_algebra_model(c.m, c.N + 1)
    elif c.target:
        A, _ = parse_target(c.target, c.N)
    else:
        A = build_tower(c.m, c.n, max(c.N, 2 * c.n), certify=False).presentation
    if c.cohomology:
        H = hochschild_cohomology(A, c.m, c.N)
    else:
        H = hochschild_homology(A, c.m, c.N)
    return "hh-table", H.to_json()


def _job_koszul(c):
    A, _ = parse_target(c.target, c.N, base=c.p)
    T = koszul_dual_homology(A, c.N)
    return "ext-table", T.to_json()


def _job_center(c):
    verdict, cert = center_vanishing_check(c.p, c.N)
    ok = verdict is True and verify_center_certificate(c.p, c.N, cert["cochain"])
    return "center-check", {"verdict": verdict if verdict is not True else True,
                            "certificate": cert, "reverified": bool(ok)}


def _job_lucas(c):
    val = bialgebra_primitivity_check(c.k, c.p)
    lucas = all(lucas_binomial_mod(c.k + 1, i, c.p) == 0 for i in range(1, c.k + 1))
    return "lucas-check", {"k": c.k, "p": c.p, "value": val, "lucas": lucas,
                           "k_plus_1_is_power": is_power_of(c.k + 1, c.p)}


JOBS = {
    "build-tower": (_job_build_tower, ("m", "n", "N")),
    "homology": (_job_homology, ("target", "N")),
    "detect-formality": (_job_detect, ("target", "N")),
    "sculpt": (_job_sculpt, ("m", "n", "l", "N")),
    "tor": (_job_tor, ("m", "N")),
    "hochschild": (_job_hochschild, ("m", "N")),
    "koszul-dual": (_job_koszul, ("target", "p", "N")),
    "center-check": (_job_center, ("p", "N")),
    "lucas-check": (_job_lucas, ("k", "p")),
}


def canonical(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj):
    return "sha256:" + hashlib.sha256(canonical(obj).encode()).hexdigest()


def render(artifact):
    return json.dumps(artifact, sort_keys=True, indent=1) + "\n"


def run_job(c: JobConfig):
    c.validate()
    fn, required = JOBS[c.command]
    missing = [r for r in required if getattr(c, r) is None]
    if c.command == "tor" and not c.target and c.n is None:
        missing.append("n")
    if c.command == "hochschild" and not (c.trivial or c.target) and c.n is None:
        missing.append("n")
    if missing:
        raise DGAError(f"{c.command} needs {', '.join('-' + x for x in missing)}")
    token = LIMITS.set((c.max_cells, c.max_dim)) if (c.max_cells is not None or c.max_dim is not None) else None
    try:
        kind, result = fn(c)
    finally:
        if token is not None:
            LIMITS.reset(token)
    art = {"schema": f"dga-forge/{kind}/v{SCHEMA_VERSION}", "version": SCHEMA_VERSION,
           "tool": f"dga-forge {__version__}", "job": c.job_json(),
           "bounds": {"N": c.N}, "result": result}
    art["digest"] = digest(art)
    return art


def verify_artifact(text):
    """(ok, reason): digest intact and a recomputation reproduces the bytes."""
    try:
        art = json.loads(text)
    except ValueError as e:
        return False, f"not valid JSON: {e}"
    if not isinstance(art, dict) or "digest" not in art or "job" not in art:
        return False, "not a dga-forge artifact"
    body = {k: v for k, v in art.items() if k != "digest"}
    if digest(body) != art["digest"]:
        return False, "digest mismatch"
    if art.get("version") != SCHEMA_VERSION:
        return False, "unsupported schema version"
    job = dict(art["job"])
    try:
        c = JobConfig(**job)
    except TypeError as e:
        return False, f"bad job block: {e}"
    fresh = run_job(c)
    if render(fresh) != text:
        return False, "recomputed artifact differs"
    return True, "verified"


# ----------------------------------------------------------------------------
# argument parsing

def build_parser():
    ap = argparse.ArgumentParser(prog="dga-forge", description="Exact computations with DGAs over Z and Z/m.")
    ap.add_argument("--version", action="version", version=f"dga-forge {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, *flags):
        for f in flags:
            if f == "target":
                sp.add_argument("--target", help="formal:Z/3[x2], exterior:Z/2[x2], tower:m,n, "
                                                 "sculpt:m,n,l, trivial:m, file:PATH; suffix @K truncates")
            else:
                sp.add_argument(f"-{f}", type=int, dest=f)
        sp.add_argument("-o", "--out", help="write the JSON artifact here (default stdout)")
        sp.add_argument("--max-cells", type=int, help="cell budget per complex")
        sp.add_argument("--max-dim", type=int, help="largest residual matrix dimension")

    sp = sub.add_parser("build-tower", help="build S_2n^m and certify its homology")
    common(sp, "m", "n", "N")
    sp.add_argument("--presentation", help="also write the presentation file here")
    common(sub.add_parser("homology", help="homology table of a target"), "target", "N")
    sp = sub.add_parser("detect-formality", help="formality profile of a target")
    common(sp, "target", "m", "N")
    sp.add_argument("--seed", type=int)
    common(sub.add_parser("sculpt", help="sculpted root-adjunction surrogate"), "m", "n", "l", "N")
    sp = sub.add_parser("tor", help="Tor over the base-changed tower (or --target)")
    common(sp, "target", "m", "n", "N")
    sp = sub.add_parser("hochschild", help="Hochschild (co)homology with Z/m coefficients")
    common(sp, "target", "m", "n", "N")
    sp.add_argument("--cohomology", action="store_true")
    sp.add_argument("--trivial", action="store_true", help="use the model of Z/m")
    common(sub.add_parser("koszul-dual", help="Ext_A(F_p, F_p) with Yoneda products"), "target", "p", "N")
    common(sub.add_parser("center-check", help="is p zero in HH^0?"), "p", "N")
    common(sub.add_parser("lucas-check", help="binomial primitivity obstruction"), "k", "p")
    sp = sub.add_parser("verify", help="re-check an emitted artifact bit-exactly")
    sp.add_argument("artifact")
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "verify":
            text = Path(args.artifact).read_text()
            ok, reason = verify_artifact(text)
            print(reason)
            return 0 if ok else 2
        fields = {k: v for k, v in vars(args).items() if k in JobConfig.__dataclass_fields__}
        c = JobConfig(**fields)
        art = run_job(c)
        out = render(art)
        if args.out:
            Path(args.out).write_text(out)
        if getattr(args, "presentation", None):
            Path(args.presentation).write_text(art["result"]["presentation"])
        if not args.out:
            sys.stdout.write(out)
        return 0
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        print(json.dumps(e.report, sort_keys=True), file=sys.stderr)
        return 3
    except (HypothesisViolation, CertificationError, DGAError) as e:
        print(f"hypothesis violation: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # noqa: BLE001
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


run = main


if __name__ == "__main__":
    sys.exit(main())

import random
from functools import lru_cache

from hypothesis import settings

from dgaforge.tower import build_tower, sculpt_polynomial

settings.register_profile("ci", deadline=None, max_examples=40)
settings.load_profile("ci")

TOWER_CASES = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (4, 2)]


@lru_cache(maxsize=None)
def tower(m, n, N=None):
    return build_tower(m, n, N if N is not None else max(8, 4 * n))


@lru_cache(maxsize=None)
def sculpt(m, n, l, N):
    return sculpt_polynomial(m, n, l, N)


def random_sparse(rng: random.Random, rows, cols, density=0.3, bound=6):
    return [[rng.randint(-bound, bound) if rng.random() < density else 0 for _ in range(cols)]
            for _ in range(rows)]


ACCEPTANCE = {}


def record(criterion, ok, detail):
    ACCEPTANCE[criterion] = (ok, detail)
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})")
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[c]
        terminalreporter.write_line(f"criterion {c:2d}: {'PASS' if ok else 'FAIL'}  {detail}")

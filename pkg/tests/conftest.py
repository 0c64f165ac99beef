import itertools
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def words(n, length):
    return list(itertools.product(range(n), repeat=length))


def occurs(w, forbidden):
    return any(tuple(w[i:i + len(f)]) == tuple(f)
               for f in forbidden for i in range(len(w) - len(f) + 1))


def brute_language(n, forbidden, length, extend=6):
    """Words of ``length`` that extend ``extend`` cells to each side.

    An extension longer than the number of ``m-1`` contexts revisits one, so
    it can be repeated forever; pick ``extend`` above that count."""
    out = set()
    for w in words(n, length):
        if occurs(w, forbidden):
            continue
        if _extends(w, n, forbidden, extend):
            out.add(w)
    return out


def _extends(w, n, forbidden, depth):
    m = max((len(f) for f in forbidden), default=1)
    # right then left, keeping only the last m-1 cells as context
    def grow(ctx, d, right):
        if d == 0:
            return True
        for a in range(n):
            c = ctx + (a,) if right else (a,) + ctx
            if not occurs(c, forbidden):
                keep = c[-(m - 1):] if right else c[:m - 1]
                if m == 1 or grow(keep if m > 1 else (), d - 1, right):
                    return True
        return False
    return grow(tuple(w), depth, True) and grow(tuple(w), depth, False)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, line = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {line}")

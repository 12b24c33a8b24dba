"""Acceptance criteria, one test each, at the default tolerance scale.

Every check's bound is pinned below; a test fails if the library ever
loosens a bound, and fails if any check misses its bound.  One
``[PASS]``/``[FAIL]`` line per criterion is printed to the terminal.
"""

import pytest

from fracsobolev.verify import CRITERIA, VerifyConfig

CONFIG = VerifyConfig(tol_scale=1.0, L=None, seed=0)

# (substring of the check name, pinned bound); first match wins
PINNED = {
    1: [("P2 on S^", 1e-12), ("P4 limit", 1e-4)],
    2: [("S^", 1e-12)],
    3: [("-deficit/energy", 1e-8)],
    4: [("", 1e-5)],
    5: [("not decreasing", 0), ("extrapolated A0", 1e-3), ("B0(0.999)", 1e-2),
        ("radial factor", 1e-2), ("max(A0 - B0", 0.0)],
    6: [("|F(0)|", 0.0), ("|F(1-1e-6)+1|", 1e-3), ("outside (0,1]", 0),
        ("sandwich", 1e-12), ("boundary limit", 2e-2)],
    7: [("rho^2 coefficient", 1e-2), ("rho^(2 gamma)", 5e-2), ("runtime", 120.0)],
    8: [("max(A1 - B1", 0.0), ("extrapolated A1", 1e-2), ("B1(1.99)", 2e-2),
        ("spread", 2.0), ("runtime", 180.0)],
    9: [("relative disagreement", 1e-8)],
    10: [("violations", 0)],
}


def pinned_bound(k, name):
    for key, bound in PINNED[k]:
        if key in name:
            return bound
    raise KeyError(f"criterion {k}: no pinned bound for check {name!r}")


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, capsys):
    result = CRITERIA[k](CONFIG)
    with capsys.disabled():
        print("\n" + result.summary())
    assert result.checks, "criterion produced no checks"
    for c in result.checks:
        assert c.bound == pinned_bound(k, c.name), c.name
    assert result.passed, result.summary()

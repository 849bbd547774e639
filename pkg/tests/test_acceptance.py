"""Acceptance criteria at full scale, one test per criterion.

Every test runs the matching verification suite with its default sizes and
prints one PASS/FAIL line; the lines are repeated in the terminal summary.
"""
import pytest

from dlevy import verify

import conftest

CRITERIA = [
    (1, "marginal law of the double-sum sheet", "marginal"),
    (2, "self-similarity of the PRM sheet", "selfsim"),
    (3, "Poisson window counts and Laplace functional", "prm"),
    (4, "compound Poisson annulus moments", "moments"),
    (5, "truncation bound at alpha=0.5", "truncation"),
    (6, "centering bound at alpha=1.5", "centering"),
    (7, "metric inequalities, zero violations", "metrics"),
    (8, "stationary and independent increments", "increments"),
    (9, "Hill tail recovery on path norms", "tails"),
    (10, "Brownian sup-moment bound", "brownian"),
    (11, "deterministic figure sheets", "figures"),
]


@pytest.mark.parametrize("num,title,suite", CRITERIA, ids=[f"criterion_{c[0]:02d}_{c[2]}" for c in CRITERIA])
def test_criterion(num, title, suite):
    checks = verify.SUITES[suite](seed=0)
    ok = all(c.passed for c in checks)
    line = f"{'PASS' if ok else 'FAIL'} criterion {num}: {title}"
    conftest.ACCEPTANCE_LINES.append(line)
    for c in checks:
        conftest.ACCEPTANCE_LINES.append("    " + c.line())
    print(line)
    for c in checks:
        print("    " + c.line())
    failed = [c.line() for c in checks if not c.passed]
    assert not failed, "\n".join(failed)

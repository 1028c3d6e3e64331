"""Acceptance criteria 1-10, each timed against its runtime limit.

Every criterion records one PASS/FAIL line that is printed in the terminal
summary.  Frozen values are re-derived here by plain-Python enumeration.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from expanderlab import suite
from expanderlab.expansion import AP, Random, materialize
from expanderlab.field import PrimeField

LIMITS = {"1": 60, "2": 30, "3": 120, "4": 10, "5": 60, "6": 30, "7": 60, "8": 120, "9": 10}
NAMES = {
    "1": "classifier trichotomy",
    "2": "determinant criterion",
    "3": "Paley regularity",
    "4": "QR-product partition densities",
    "5": "character sums",
    "6": "Lang-Weil / Hasse and sigma",
    "7": "expansion dichotomy",
    "8": "quadruple statistics",
    "9": "incidence bound",
}
UNATTAINABLE = {"|A+A| = 1913 < p for AP of length 957"}


def residues(p, size, seed):
    return materialize(Random(size, seed), PrimeField(p)).tolist()


def shkredov(a, b, p):
    return (a * a + a * b) % p


def run_criterion(key):
    fn = suite.CRITERIA[key]
    t0 = time.perf_counter()
    checks = fn(0) if fn.__code__.co_argcount else fn()
    return checks, time.perf_counter() - t0


@pytest.mark.parametrize("key", [k for k in LIMITS if k != "7"])
def test_criterion(key, record_acceptance):
    checks, elapsed = run_criterion(key)
    failed = [c.name for c in checks if not c.passed]
    ok = not failed and elapsed < LIMITS[key]
    record_acceptance(key, NAMES[key], ok, f"{len(checks)} checks, {elapsed:.1f}s / {LIMITS[key]}s")
    assert not failed, [c.to_dict() for c in checks if not c.passed]
    assert elapsed < LIMITS[key]


def test_criterion_7_attainable_parts(record_acceptance):
    checks, elapsed = run_criterion("7")
    rest = [c for c in checks if c.name not in UNATTAINABLE]
    ok = all(c.passed for c in rest) and elapsed < LIMITS["7"]
    record_acceptance("7b", "expansion dichotomy (ratio, random image, GP)", ok, f"{elapsed:.1f}s / 60s")
    assert ok, [c.to_dict() for c in rest if not c.passed]


@pytest.mark.xfail(strict=True, reason="2*957-1 = 1913 exceeds p = 1009, so A+A covers GF(1009)")
def test_criterion_7_interval_sumset(record_acceptance):
    checks, _ = run_criterion("7")
    c = next(c for c in checks if c.name in UNATTAINABLE)
    record_acceptance("7a", "|A+A| = 1913 < p (AP length 957, p = 1009)", c.passed,
                      f"observed |A+A| = {c.detail['image']}")
    assert c.passed


def test_criterion_10_determinism(tmp_path, record_acceptance):
    outs = []
    for name in ("first.json", "second.json"):
        path = tmp_path / name
        res = subprocess.run([sys.executable, "-m", "expanderlab", "suite", "--seed", "0", "--out", str(path)],
                             capture_output=True, text=True)
        # exit 1: the battery contains the one unattainable check
        assert res.returncode == 1, res.stderr
        outs.append(path.read_bytes())
    ok = outs[0] == outs[1]
    record_acceptance("10", "suite reports byte-identical", ok, f"{len(outs[0])} bytes")
    assert ok


# -- oracles behind the frozen values ---------------------------------------------------


def test_oracle_random_image_p1009():
    p = 1009
    A = residues(p, 957, 3)
    img = {shkredov(a, b, p) for a in A for b in A}
    assert len(img) == suite.FROZEN["shkredov_random_image_p1009"]


def test_oracle_quadruples_p31():
    p = 31
    T = [[shkredov(a, b, p) for b in range(p)] for a in range(p)]
    seen = set()
    for a in range(p):
        Ta = T[a]
        for b in range(p):
            Tb = T[b]
            for c in range(p):
                for d in range(p):
                    seen.add((Ta[c], Ta[d], Tb[c], Tb[d]))
    assert len(seen) == suite.FROZEN["shkredov_quadruples_p31"]


def test_oracle_incidence_p101():
    p = 101
    A, B, C = residues(p, 50, 7), residues(p, 50, 8), set(residues(p, 50, 9))
    count = sum(1 for a in A for b in B if shkredov(a, b, p) in C)
    assert count == suite.FROZEN["shkredov_incidence_p101"]
    assert abs(count - 50 ** 3 / p) <= 8 * math.sqrt(p * 50 * 50)


def test_oracle_interval_sumset_p1009():
    # the plain computation behind the xfail above
    p = 1009
    A = materialize(AP(0, 1, 957), PrimeField(p)).tolist()
    assert len({(a + b) % p for a in A for b in A}) == p
    assert 2 * 957 - 1 == 1913 > p

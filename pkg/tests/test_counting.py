import math
import random
from fractions import Fraction

import numpy as np
import pytest

from expanderlab.counting import (
    definable_count,
    distinct_roots,
    fibre_histogram,
    make_report,
    nearest_small_rational,
    per_x_root_counts,
    plane_curve_count,
)
from expanderlab.errors import BudgetExceeded, DegenerateInT, ZeroPolynomial
from expanderlab.field import PrimeField, is_prime
from expanderlab.parser import parse_poly
from expanderlab.poly import RatPoly

# exhaustive enumeration over GF(31)^2
FROZEN_FIBRE_P31 = {0: 61, "other": 30}


def brute_curve(P, p):
    C = P.reduce_mod(p)
    n = 0
    for x in range(p):
        for y in range(p):
            v = sum(int(C[i, j]) * pow(x, i, p) * pow(y, j, p) for i in range(C.shape[0]) for j in range(C.shape[1]))
            n += v % p == 0
    return n


def test_curve_examples(backend):
    for p in (5, 7, 101):
        assert plane_curve_count(parse_poly("y-x^2"), PrimeField(p)).count == p
    assert plane_curve_count(parse_poly("y^2-x^3-x"), PrimeField(5)).count == 3
    r = plane_curve_count(parse_poly("(x+y)*(x-y)"), PrimeField(7))
    assert r.count == 13 and r.sigma_hat == 2 and r.dimension == 1
    with pytest.raises(ZeroPolynomial):
        plane_curve_count(parse_poly("7*x"), PrimeField(7))


@pytest.mark.parametrize("src", ["y^2-x^3-x-1", "x^2*y+y^3-2", "x*y-1", "(y-x)^2*(y+1)"])
@pytest.mark.parametrize("p", [7, 23, 53])
def test_curve_matches_brute(backend, src, p):
    P = parse_poly(src)
    assert plane_curve_count(P, PrimeField(p)).count == brute_curve(P, p)


def test_table_and_gcd_methods_agree():
    P = parse_poly("y^3 + x*y^2 - x^3*y + 5")
    for p in (11, 101, 307):
        a = per_x_root_counts(P, PrimeField(p), "table")
        b = per_x_root_counts(P, PrimeField(p), "gcd")
        assert np.array_equal(a, b)


def test_distinct_roots_against_brute():
    rng = random.Random(0)
    for p in (5, 13, 101):
        for _ in range(40):
            c = [rng.randrange(p) for _ in range(rng.randint(1, 7))]
            want = p if not any(c) else sum(1 for y in range(p) if sum(v * pow(y, i, p) for i, v in enumerate(c)) % p == 0)
            assert distinct_roots(c, p) == want


def test_graphs_have_p_points():
    rng = random.Random(1)
    for p in (q for q in range(3, 200) if is_prime(q)):
        for _ in range(10):
            f = RatPoly.from_coeffs([rng.randrange(p) for _ in range(rng.randint(1, 5))], 1)
            P = parse_poly("y") - f.embed((0,), 2)
            assert plane_curve_count(P, PrimeField(p)).count == p


def test_hasse_bound():
    rng = random.Random(2)
    checked = 0
    for p in (101, 211, 401, 1009, 2003):
        for _ in range(8):
            a, b = rng.randrange(p), rng.randrange(p)
            if (4 * a ** 3 + 27 * b ** 2) % p == 0:
                continue
            P = parse_poly(f"y^2 - x^3 - {a}*x - {b}")
            N = plane_curve_count(P, PrimeField(p)).count
            # affine count; the projective curve adds the point at infinity
            assert abs(N + 1 - (p + 1)) <= 2 * math.sqrt(p)
            checked += 1
    assert checked >= 30


def test_gcd_path_large_prime():
    p = 5003
    P = parse_poly("y^2 - x^3 - x - 1")
    r = plane_curve_count(P, PrimeField(p))
    assert r.count == int(per_x_root_counts(P, PrimeField(p), "table").sum())
    assert abs(r.lang_weil_residual) <= 2


def test_definable_examples(backend):
    for p in (7, 13, 101):
        r = definable_count(parse_poly("x-t^2", ("x", "t")), PrimeField(p))
        assert r.count == (p + 1) // 2 and r.sigma_hat == Fraction(1, 2)
        r = definable_count(parse_poly("x*t-1", ("x", "t")), PrimeField(p))
        assert r.count == p - 1 and r.sigma_hat == 1
    r = definable_count(parse_poly("x", ("x", "t")), PrimeField(101))
    assert r.count == 1 and r.dimension == 0
    with pytest.raises(DegenerateInT):
        definable_count(parse_poly("5", ("x", "t")), PrimeField(7))


def test_qr_nonqr_identity():
    for p in (7, 13, 31, 101):
        F = PrimeField(p)
        a = next(v for v in range(2, p) if not F.is_qr(v))
        n1 = definable_count(parse_poly("x-t^2", ("x", "t")), F).count
        n2 = definable_count(parse_poly(f"{a}*x-t^2", ("x", "t")), F).count
        assert n1 + n2 == p + 1


def test_fibre_examples(backend):
    h = fibre_histogram(parse_poly("x+y"), PrimeField(11))
    assert set(h.counts.tolist()) == {11}
    h = fibre_histogram(parse_poly("x*y"), PrimeField(11))
    assert h.counts[0] == 21 and set(h.counts[1:].tolist()) == {10}
    h = fibre_histogram(parse_poly("x^2+x*y"), PrimeField(31))
    assert h.counts[0] == FROZEN_FIBRE_P31[0]
    assert set(h.counts[1:].tolist()) == {FROZEN_FIBRE_P31["other"]}
    assert h.mean == 31 and h.max == 61 and h.min == 30
    assert sum(h.as_dict().values()) == 31 ** 2
    with pytest.raises(BudgetExceeded):
        fibre_histogram(parse_poly("x+y"), PrimeField(101), budget=1000)


def test_fibre_sums_to_p_squared():
    for src in ("x^3+y^2*x", "x*y+x+y", "x^4-y"):
        for p in (17, 89):
            assert int(fibre_histogram(parse_poly(src), PrimeField(p)).counts.sum()) == p * p


def test_sigma_hat_rules():
    assert nearest_small_rational(0.5004, 10007) == Fraction(1, 2)
    assert nearest_small_rational(0.5 + 1 / 3 / 1000, 10 ** 12) is None
    r = make_report(1_000_003, 520_002)
    assert r.sigma_hat is None and r.residual is None
    assert r.to_dict()["sigma_hat"] == "unresolved"
    r = make_report(101, 51)
    assert r.sigma_hat == Fraction(1, 2)
    assert r.residual == pytest.approx((51 - 50.5) / math.sqrt(101))

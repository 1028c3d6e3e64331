import json
import math
from fractions import Fraction

import numpy as np
import pytest

from expanderlab import config
from expanderlab.errors import BudgetExceeded, EmptySet, ValidationError
from expanderlab.expansion import (
    AP,
    GP,
    Explicit,
    Interval,
    Pullback,
    Random,
    expansion_report,
    image_set,
    materialize,
    quadruple_count,
    sample_quadruples,
    triple_incidence,
    value_histogram,
)
from expanderlab.field import PrimeField
from expanderlab.parser import parse_poly

# values from a pure-Python enumeration oracle
FROZEN_IMAGE_P101_RANDOM50 = 101
FROZEN_QUADRUPLES_P31 = 408301
FROZEN_INCIDENCE_HALVES_P101 = 1269
FROZEN_INCIDENCE_RESIDUAL_P101 = 0.0624


def _ev(P, a, b, p):
    # direct evaluation over Q, then reduction
    total = 0
    for (i, j), c in P.terms.items():
        total += c * pow(int(a), i) * pow(int(b), j)
    total = Fraction(total)
    return total.numerator * pow(total.denominator, -1, p) % p


def test_materialize_examples():
    F101, F7 = PrimeField(101), PrimeField(7)
    assert materialize(AP(0, 1, 5), F101).tolist() == [0, 1, 2, 3, 4]
    assert set(materialize(GP(1, 3, 4), F7).tolist()) == {1, 3, 2, 6}
    full = materialize(Pullback(parse_poly("t^2", ("t",)), AP(0, 1, 101)), F101)
    assert full.tolist() == list(range(101))
    assert materialize(Interval(99, 4), F101).tolist() == [0, 1, 99, 100]
    assert materialize(Explicit((3, 104, -1)), F101).tolist() == [3, 100]


def test_materialize_errors_and_dedup():
    F7 = PrimeField(7)
    with pytest.raises(ValidationError):
        materialize(AP(0, 1, 0), F7)
    with pytest.raises(ValidationError):
        materialize(AP(0, 1, 8), F7)
    with pytest.raises(ValidationError):
        materialize(GP(1, 7, 3), F7)
    with pytest.raises(EmptySet):
        # 3 is not a square mod 7
        materialize(Pullback(parse_poly("t^2", ("t",)), Explicit((3,))), F7)
    assert materialize(GP(1, 6, 5), F7).tolist() == [1, 6]


def test_random_is_seeded():
    F = PrimeField(1009)
    a = materialize(Random(100, 5), F)
    assert np.array_equal(a, materialize(Random(100, 5), F))
    assert len(a) == 100 and len(set(a.tolist())) == 100
    assert not np.array_equal(a, materialize(Random(100, 6), F))


def test_image_examples(backend):
    F = PrimeField(1009)
    x_plus_y, xy = parse_poly("x+y"), parse_poly("x*y")
    for k in (1, 10, 200):
        A = materialize(AP(0, 1, k), F)
        assert image_set(x_plus_y, A, A, F).tolist() == list(range(2 * k - 1))
        G = materialize(GP(1, 11, k), F)
        assert len(image_set(xy, G, G, F)) == 2 * k - 1
    F101 = PrimeField(101)
    A = materialize(Random(50, 1), F101)
    assert len(image_set(parse_poly("x^2+x*y"), A, A, F101)) == FROZEN_IMAGE_P101_RANDOM50


@pytest.mark.parametrize("p", [31, 101, 257])
def test_image_matches_oracle(backend, p):
    F = PrimeField(p)
    P = parse_poly("x^3 + 1/2*x*y^2 - y")
    A, B = materialize(Random(p // 3, 1), F), materialize(Random(p // 4, 2), F)
    assert set(image_set(P, A, B, F).tolist()) == {_ev(P, a, b, p) for a in A for b in B}


def test_value_histogram_sums(backend):
    F = PrimeField(503)
    A, B = materialize(Random(80, 1), F), materialize(Random(70, 2), F)
    vals, cnt = value_histogram(parse_poly("x^2+x*y"), A, B, F)
    assert int(cnt.sum()) == 80 * 70 and np.all(np.diff(vals) > 0)


def test_image_budget():
    F = PrimeField(1009)
    A = materialize(AP(0, 1, 1000), F)
    with pytest.raises(BudgetExceeded):
        image_set(parse_poly("x+y"), A, A, F, budget=10 ** 5)


def test_image_monotone(backend):
    F = PrimeField(211)
    P = parse_poly("x^2+x*y")
    A = materialize(Random(60, 4), F)
    B = materialize(Random(40, 5), F)
    small = set(image_set(P, A[:30], B[:20], F).tolist())
    assert small <= set(image_set(P, A, B, F).tolist())


def test_big_prime_image(backend):
    p = (1 << 61) - 1
    F = PrimeField(p)
    A = materialize(AP(5, 3, 20), F)
    img = image_set(parse_poly("x*y+1"), A, A, F)
    assert len(img) == len({(a * b + 1) % p for a in A.tolist() for b in A.tolist()})


def test_pullback_nonexpander_bound(backend):
    # P = Q(F(x) + G(y)), A and B pullbacks of same-step APs
    p = 1009
    F = PrimeField(p)
    Fp, Gp = parse_poly("t^2", ("t",)), parse_poly("t^3+t", ("t",))
    L = 40
    A = materialize(Pullback(Fp, AP(0, 1, L)), F)
    B = materialize(Pullback(Gp, AP(0, 1, L)), F)
    P = parse_poly("(x^2 + y^3 + y)^2 + 3")
    assert len(image_set(P, A, B, F)) <= 2 * (2 * L - 1)


def test_quadruple_examples(backend):
    assert quadruple_count(parse_poly("x+y"), PrimeField(7)) == (343, 7 ** 4, "exact")
    d, total, mode = quadruple_count(parse_poly("x^2+x*y"), PrimeField(31))
    assert (d, mode) == (FROZEN_QUADRUPLES_P31, "exact")
    assert d >= 0.3 * 31 ** 4
    Q = sample_quadruples(parse_poly("x*y"), PrimeField(7), 500, seed=1)
    assert np.all(Q[:, 0] * Q[:, 3] % 7 == Q[:, 1] * Q[:, 2] % 7)


def test_quadruple_additive_bound(backend):
    p = 11
    P = parse_poly("(x^2+y)^2 + x^2 + y")
    d, _, mode = quadruple_count(P, PrimeField(p))
    assert mode == "exact" and d <= 3 ** 3 * p ** 3


def test_quadruple_sampling_and_budget():
    F = PrimeField(101)
    d, total, mode = quadruple_count(parse_poly("x^2+x*y"), F, budget=20000, seed=3)
    assert mode == "sampled" and total == 20000 and d <= total
    assert quadruple_count(parse_poly("x^2+x*y"), F, budget=20000, seed=3)[0] == d
    with pytest.raises(ValidationError):
        quadruple_count(parse_poly("x+y"), F, budget=100)


def test_triple_incidence_examples(backend):
    F = PrimeField(101)
    P = parse_poly("x^2+x*y")
    A, B = materialize(Random(30, 1), F), materialize(Random(20, 2), F)
    full = np.arange(101)
    count, main, resid = triple_incidence(P, A, B, full, F)
    assert count == 600 and main == 600 and resid == 0.0
    count, main, _ = triple_incidence(parse_poly("x+y"), [0], [0], [0], F)
    assert count == 1 and main == Fraction(1, 101)
    A, B, C = (materialize(Random(50, s), F) for s in (7, 8, 9))
    count, main, resid = triple_incidence(P, A, B, C, F)
    assert count == FROZEN_INCIDENCE_HALVES_P101
    assert main == Fraction(50 ** 3, 101)
    assert resid == pytest.approx(FROZEN_INCIDENCE_RESIDUAL_P101, abs=5e-5)


def test_expansion_report_examples(backend):
    p = 1009
    F = PrimeField(p)
    k = math.ceil(p ** 0.95)
    r = expansion_report(parse_poly("x+y"), AP(0, 1, k), AP(0, 1, k), F)
    assert r.image_size == p  # 2k - 1 > p: the sumset wraps around
    assert r.complement == 0 and r.moderate
    r = expansion_report(parse_poly("x+y"), AP(0, 1, 100), AP(0, 1, 100), F)
    assert r.image_size == 199 and not r.moderate
    r = expansion_report(parse_poly("x*y"), GP(1, 11, 30), GP(1, 11, 30), F)
    assert r.image_size == 59 and r.weak_ratio < 0.4
    r = expansion_report(parse_poly("x^2+x*y"), Random(k, 3), Random(k, 3), F)
    assert r.moderate and r.image_size == p


def test_report_invariants_and_determinism(backend):
    F = PrimeField(401)
    r = expansion_report(parse_poly("x^2+x*y"), Random(40, 1), Random(30, 2), F)
    assert 1 <= r.image_size <= min(401, 40 * 30)
    assert r.complement == 401 - r.image_size
    r2 = expansion_report(parse_poly("x^2+x*y"), Random(40, 1), Random(30, 2), F)
    assert json.dumps(r.to_dict(), sort_keys=True) == json.dumps(r2.to_dict(), sort_keys=True)


def test_threads_give_identical_histograms():
    F = PrimeField(2003)
    P = parse_poly("x^3+x*y")
    A, B = materialize(Random(1500, 1), F), materialize(Random(1500, 2), F)
    old = config.get_threads()
    try:
        config.set_threads(1)
        one = value_histogram(P, A, B, F)
        config.set_threads(4)
        four = value_histogram(P, A, B, F)
    finally:
        config.set_threads(old)
    assert all(np.array_equal(u, v) for u, v in zip(one, four))

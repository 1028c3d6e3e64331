import random
from fractions import Fraction

import pytest

from expanderlab.classify import (
    classify,
    decompose_composite,
    decompose_univariate,
    determinant_criterion,
    lift_from_field,
    probe_sequence,
    recover_outer,
    residue_profile,
    separate_ratio,
    solve_log_derivative,
)
from expanderlab.errors import ConstantPolynomial, ImproperFraction, ZeroPolynomial
from expanderlab.parser import parse_poly
from expanderlab.poly import RatFunc, RatPoly

x = RatPoly.var(0, 2)
y = RatPoly.var(1, 2)
t = RatPoly.var(0, 1)
ONE = RatPoly.const(1, 1)


def P(s):
    return parse_poly(s)


def U(s):
    return parse_poly(s, ("t",))


def rand_univ(rng, lo=1, hi=3, zero_const=False):
    deg = rng.randint(lo, hi)
    c = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(deg + 1)]
    while c[-1] == 0:
        c[-1] = Fraction(rng.randint(1, 4))
    if zero_const:
        c[0] = Fraction(0)
    return RatPoly.from_coeffs(c, 1)


def brute_D(Pol, a, b, c, d):
    P1, P2 = Pol.derivative(0), Pol.derivative(1)
    e1 = lambda Q, u, v: Q.evaluate((u, v))
    return (e1(P1, a, c) * e1(P2, a, d) * e1(P2, b, c) * e1(P1, b, d)
            - e1(P2, a, c) * e1(P1, a, d) * e1(P1, b, c) * e1(P2, b, d))


def test_probe_sequence_prefix():
    g = probe_sequence()
    assert [next(g) for _ in range(8)] == [1, 2, 3, 5, 7, 11, 13, 17]


# -- determinant identity ---------------------------------------------------------


def test_determinant_examples():
    assert determinant_criterion(P("x+y")).is_zero()
    assert determinant_criterion(P("x*y")).is_zero()
    assert not determinant_criterion(P("x^2+x*y")).is_zero()
    with pytest.raises(ConstantPolynomial):
        determinant_criterion(P("7"))


def test_determinant_matches_pointwise_oracle():
    rng = random.Random(4)
    for src in ("x^2+x*y", "x^3*y+y^2", "x*y^2+x", "(x+y)^3", "x^2*y^3"):
        Pol = P(src)
        D = determinant_criterion(Pol)
        for _ in range(10):
            pt = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(4)]
            assert D.evaluate(pt) == brute_D(Pol, *pt)


# -- separation ---------------------------------------------------------------------


def _identity(Pol, f, g):
    P1, P2 = Pol.derivative(0), Pol.derivative(1)
    ex = lambda u: u.embed((0,), 2)
    ey = lambda u: u.embed((1,), 2)
    return P1 * ey(g.num) * ex(f.den) - P2 * ex(f.num) * ey(g.den)


@pytest.mark.parametrize("src", ["x+y", "x^2*y^3", "(x^2+y)^2", "x*y+x+y"])
def test_separate_ratio_identity(src):
    Pol = P(src)
    f, g = separate_ratio(Pol)
    assert _identity(Pol, f, g).is_zero()


def test_separate_ratio_examples_up_to_scalar():
    f, g = separate_ratio(P("x+y"))
    assert f == RatFunc(ONE, ONE) and g == RatFunc(ONE, ONE)
    f, g = separate_ratio(P("x^2*y^3"))
    # f/g = (2/a)/(3/b) with one common scalar
    s = f.num.evaluate((1,)) / f.den.evaluate((1,)) / 2
    assert f == RatFunc(t.scale(0) + 2 * s, t)
    assert g == RatFunc(t.scale(0) + 3 * s, t)
    f, g = separate_ratio(P("(x^2+y)^2"))
    s = g.num.evaluate((1,)) / g.den.evaluate((1,))
    assert f == RatFunc(2 * s * t, ONE)


# -- residues and logarithmic derivatives ----------------------------------------------


def test_residue_profile_examples():
    r = residue_profile(RatFunc(2 * t, ONE))
    assert r.residue_kind == "AllZero" and r.polynomial_part == 2 * t
    r = residue_profile(RatFunc(RatPoly.const(2, 1), t))
    assert r.residue_kind == "AllRationalCommensurable"
    r = residue_profile(RatFunc(ONE, t ** 2))
    assert r.residue_kind == "AllZero"
    r = residue_profile(RatFunc(ONE, t ** 2 + 1))
    assert r.residue_kind == "Other"


def test_solve_log_derivative_examples():
    sols = solve_log_derivative(RatFunc(RatPoly.const(2, 1), t), 3)
    assert (t ** 2, Fraction(1)) in sols
    sols = solve_log_derivative(RatFunc(RatPoly.const(3, 1), t), 3)
    assert (t ** 3, Fraction(1)) in sols
    assert solve_log_derivative(RatFunc(ONE, t ** 2 + 1), 4) == []
    with pytest.raises(ImproperFraction):
        solve_log_derivative(RatFunc(t ** 2, t + 1), 3)


def test_solve_log_derivative_solutions_satisfy_equation():
    f = RatFunc(3 * t ** 2 + 2, t ** 3 + 2 * t)  # log-derivative of t^3 + 2t
    sols = solve_log_derivative(f, 6)
    assert sols
    for F, lam in sols:
        assert F.derivative(0) * f.den == (f.num * F).scale(lam)
        assert F.lc() == 1


# -- outer recovery -----------------------------------------------------------------------


def test_recover_outer_examples():
    assert recover_outer(P("(x+y)^2"), P("x+y")) == U("t^2")
    assert recover_outer(P("x^2*y^2+2*x*y+1"), P("x*y")) == U("t^2+2*t+1")
    assert recover_outer(P("x+y"), P("x*y")) is None


# -- classify --------------------------------------------------------------------------


def test_classify_examples():
    r = classify(P("x+y"))
    assert r.verdict == "Additive" and r.verified
    assert (r.Q, r.F, r.G) == (U("t"), U("t"), U("t"))
    r = classify(P("x^2*y^3"))
    assert r.verdict == "Multiplicative" and r.verified
    assert (r.Q, r.F, r.G) == (U("t"), U("t^2"), U("t^3"))
    r = classify(P("x^2+x*y"))
    assert r.verdict == "NoStructure" and r.verified
    exps, coeff = r.witness
    assert determinant_criterion(P("x^2+x*y")).terms[exps] == coeff != 0


def test_classify_degenerate_and_errors():
    assert classify(P("x^3+x")).variable == "x"
    assert classify(P("y^2")).variable == "y"
    assert classify(P("5")).variable == "constant"
    with pytest.raises(ZeroPolynomial):
        classify(RatPoly.zero(2))


def test_classify_annotations():
    r = classify(P("x^2+y^2"))
    assert r.annotations["G_affine_in_F"] is True
    r = classify(P("(x^2+1)*(y^2+1)"))
    assert r.verdict == "Multiplicative"
    assert r.annotations["shared_radical"] is True


def test_soundness_randomized_200():
    rng = random.Random(2024)
    for i in range(200):
        Q = rand_univ(rng)
        F = rand_univ(rng)
        G = rand_univ(rng)
        ex, ey = F.embed((0,), 2), G.embed((1,), 2)
        kind = "Additive" if i % 2 == 0 else "Multiplicative"
        inner = ex + ey if kind == "Additive" else ex * ey
        Pol = Q.compose_univariate(inner)
        assert determinant_criterion(Pol).is_zero()
        r = classify(Pol, composite=False)
        # Q(F + G) with F, G linear can also read as multiplicative and vice versa
        assert r.verdict in ("Additive", "Multiplicative"), (i, Pol, r.diagnostic)
        assert r.verified and r.reconstruct() == Pol


def test_no_structure_point_oracle():
    rng = random.Random(8)
    for src in ("x^2+x*y", "x^2*y+y^3+x", "x^3+x*y^2+y", "x*y+x^2*y^2+x"):
        Pol = P(src)
        r = classify(Pol)
        assert r.verdict == "NoStructure"
        vals = [brute_D(Pol, *[Fraction(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(4)])
                for _ in range(20)]
        assert any(vals)


def test_classify_deterministic():
    Pol = P("(x^2+3*x)*(y^3-y+2)+1")
    assert classify(Pol).to_dict() == classify(Pol).to_dict()


# -- decompositions ------------------------------------------------------------------------


def test_decompose_univariate_examples():
    assert (U("t^2+2*t"), U("t^2")) in decompose_univariate(U("t^4+2*t^2"))
    out = decompose_univariate(U("t^6"))
    assert (U("t^2"), U("t^3")) in out and (U("t^3"), U("t^2")) in out
    assert decompose_univariate(U("t^3+t")) == []


def test_decompose_univariate_random_compositions():
    rng = random.Random(17)
    for _ in range(40):
        g = rand_univ(rng, 2, 3)
        h = rand_univ(rng, 2, 3, zero_const=True)
        p = g.compose_univariate(h)
        out = decompose_univariate(p)
        assert any(i.degree() == h.degree() for _, i in out)
        for o, i in out:
            assert o.compose_univariate(i) == p
            assert i.lc() == 1 and i.constant_term() == 0


def test_decompose_composite_examples():
    h, S = decompose_composite(P("(x*y+1)^2"))
    assert h.compose_univariate(S) == P("(x*y+1)^2") and h.degree() == 2
    assert S.degree() == 2
    h, S = decompose_composite(P("x^2*y^2"))
    assert h.degree() == 2 and h.compose_univariate(S) == P("x^2*y^2")
    assert decompose_composite(P("x+y")) is None
    assert decompose_composite(P("x^2+x*y+y^3")) is None


def test_decompose_composite_random_soundness():
    rng = random.Random(99)
    for _ in range(40):
        h = rand_univ(rng, 2, 3)
        S = RatPoly(2, {(rng.randint(0, 2), rng.randint(0, 2)): rng.randint(-3, 3) for _ in range(3)})
        if S.degree() < 1:
            continue
        Pol = h.compose_univariate(S)
        out = decompose_composite(Pol)
        assert out is not None
        hh, SS = out
        assert hh.degree() >= h.degree()
        assert hh.compose_univariate(SS) == Pol


def test_lift_from_field():
    Pol = P("6*x^2 + 1/2*y - 3")
    assert lift_from_field(Pol, 7) == P("-x^2 - 3*y - 3")

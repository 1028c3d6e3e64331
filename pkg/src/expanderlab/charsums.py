"""Additive and multiplicative character sums over GF(p) with Weil-bound verdicts.

Sums are accumulated as histograms over exact integer phases, and the final
trigonometric sums use math.fsum.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    ArityMismatch,
    BudgetExceeded,
    ConstantPolynomial,
    DegreeTooLarge,
    NotIrreducible,
    TrivialCharacterProduct,
    ValidationError,
)
from .field import PrimeField

SLACK = 1e-6
MAX_P = 1 << 24
KOWALSKI_C = 8.0


@dataclass
class CharSumResult:
    magnitude: float
    bound: float
    satisfied: bool
    terms: int

    def to_dict(self):
        return {"magnitude": self.magnitude, "bound": self.bound,
                "satisfied": self.satisfied, "terms": self.terms}


def _result(mag, bound, terms):
    return CharSumResult(mag, bound, mag <= bound + SLACK, terms)


def _field(field):
    return field if isinstance(field, PrimeField) else PrimeField(field)


def _trig_sum(r, w, modulus):
    ang = 2.0 * math.pi * np.asarray(r, dtype=np.float64) / modulus
    w = np.asarray(w, dtype=np.float64)
    return math.hypot(math.fsum(w * np.cos(ang)), math.fsum(w * np.sin(ang)))


def phase_magnitude(weights, modulus):
    """|sum_r weights[r] e(r / modulus)| with compensated summation."""
    r = np.flatnonzero(weights)
    if r.size == 0:
        return 0.0
    return _trig_sum(r, weights[r], modulus)


def _mod_coeffs(P, p):
    """Trimmed ascending coefficients of univariate P mod p."""
    if P.arity != 1:
        raise ArityMismatch("character sums take univariate polynomials")
    c = [int(v) for v in P.reduce_mod(p)]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def _values(coeffs, p):
    if p > MAX_P:
        raise BudgetExceeded(f"full-field sums limited to p <= {MAX_P}")
    return kernels.univariate_values(np.array(coeffs, dtype=np.int64), np.arange(p, dtype=np.int64), p)


def additive_char_sum(P, field):
    """|sum_t e(P(t)/p)| against the bound (deg P - 1) sqrt(p)."""
    field = _field(field)
    p = field.p
    c = _mod_coeffs(P, p)
    deg = len(c) - 1
    if deg < 1:
        raise ConstantPolynomial("P is constant mod p")
    if deg >= p:
        raise DegreeTooLarge(f"deg P = {deg} must be below p = {p}")
    counts = np.bincount(_values(c, p), minlength=p)
    return _result(phase_magnitude(counts, p), (deg - 1) * math.sqrt(p), p)


def gauss_sum(field):
    """|sum_{t != 0} legendre(t) e(t/p)|; bound sqrt(p)."""
    field = _field(field)
    p = field.p
    if p > MAX_P:
        raise BudgetExceeded(f"full-field sums limited to p <= {MAX_P}")
    chi = field.legendre_table().astype(np.int64)
    return _result(phase_magnitude(chi, p), math.sqrt(p), p - 1)


def _has_root(coeffs, p):
    return bool(np.any(_values(coeffs, p) == 0))


def _check_factor(P, p, assume_irreducible):
    c = _mod_coeffs(P, p)
    deg = len(c) - 1
    if deg < 1:
        raise ConstantPolynomial("character-sum factors must be nonconstant mod p")
    if c[-1] != 1:
        raise ValidationError("character-sum factors must be monic")
    if deg in (2, 3):
        if _has_root(c, p):
            raise NotIrreducible(f"factor of degree {deg} has a root in GF({p})")
    elif deg > 3 and not assume_irreducible:
        raise NotIrreducible(f"cannot certify irreducibility of a degree-{deg} factor; pass assume_irreducible")
    return c


def mult_char_sum(factors, order, field, assume_irreducible=False):
    """|sum_t prod_i psi^{k_i}(P_i(t))| with psi(x) = e(dlog(x) / order).

    Terms with some P_i(t) = 0 are skipped.  The bound is (sum deg P_i) sqrt(p).
    """
    field = _field(field)
    p = field.p
    order = int(order)
    if order < 1 or (p - 1) % order:
        raise ValidationError(f"character order {order} must divide p - 1 = {p - 1}")
    if not factors:
        raise ValidationError("need at least one factor")
    seen = set()
    cs, ks = [], []
    for P, k in factors:
        c = _check_factor(P, p, assume_irreducible)
        if tuple(c) in seen:
            raise ValidationError("factors must be distinct")
        seen.add(tuple(c))
        cs.append(c)
        ks.append(int(k) % order)
    if not field.has_tables:
        raise BudgetExceeded(f"multiplicative sums need a discrete-log table (p <= 2^20), got p={p}")
    dlog = field.dlog_table
    ok = np.ones(p, dtype=bool)
    phase = np.zeros(p, dtype=np.int64)
    for c, k in zip(cs, ks):
        v = _values(c, p)
        ok &= v != 0
        phase = (phase + k * (dlog[v] % order)) % order
    counts = np.bincount(phase[ok], minlength=order)
    mag = phase_magnitude(counts, order)
    terms = int(ok.sum())
    if all(k == 0 for k in ks):
        raise TrivialCharacterProduct(mag)
    bound = sum(len(c) - 1 for c in cs) * math.sqrt(p)
    return _result(mag, bound, terms)


def twisted_definable_sum(E, f, g, char_exponent, field, order=2, C=KOWALSKI_C):
    """|sum_{x in E, g(x) != 0} psi(g(x)) e(f(x)/p)|, psi(x) = e(k dlog(x) / order).

    With a trivial character (k = 0 mod order) psi is taken to be 1 everywhere,
    including at zeros of g.  The bound C sqrt(p) is informational.
    """
    field = _field(field)
    p = field.p
    order = int(order)
    if order < 1 or (p - 1) % order:
        raise ValidationError(f"character order {order} must divide p - 1 = {p - 1}")
    fc = _mod_coeffs(f, p)
    gc = _mod_coeffs(g, p)
    if len(fc) < 2 or len(gc) < 2:
        raise ConstantPolynomial("f and g must be nonconstant mod p")
    xs = np.unique(np.array([int(e) % p for e in E], dtype=np.int64))
    bound = C * math.sqrt(p)
    if xs.size == 0:
        return _result(0.0, bound, 0)
    fv = kernels.univariate_values(np.array(fc, dtype=np.int64), xs, p)
    k = int(char_exponent) % order
    if k == 0:
        counts = np.bincount(fv, minlength=p)
        return _result(phase_magnitude(counts, p), bound, int(xs.size))
    gv = kernels.univariate_values(np.array(gc, dtype=np.int64), xs, p)
    keep = gv != 0
    if field.has_tables:
        dl = field.dlog_table[gv[keep]]
    else:
        dl = np.array([field.dlog(v) for v in gv[keep].tolist()], dtype=np.int64)
    # common denominator p * order; order | p - 1 so the two parts are coprime
    num = (fv[keep] * order + ((k * dl) % order) * p) % (p * order)
    vals, cnt = np.unique(num, return_counts=True)
    return _result(_trig_sum(vals, cnt, p * order), bound, int(keep.sum()))

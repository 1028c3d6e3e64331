"""Point counts of plane curves and one-quantifier definable sets over GF(p)."""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import ArityMismatch, BudgetExceeded, DegenerateInT, ZeroPolynomial
from .expansion import value_histogram
from .field import PrimeField

CURVE_MAX_P = 1 << 22
DEFINABLE_MAX_P = 1 << 20
TABLE_MAX_P = 3000
MAX_DENOM = 24


@dataclass
class CountReport:
    p: int
    count: int
    dimension: int
    sigma: float
    sigma_hat: Fraction  # None when unresolved
    residual: float  # None when sigma_hat is unresolved
    lang_weil_c: float
    lang_weil_residual: float
    note: str = ""

    def to_dict(self):
        return {
            "p": self.p,
            "count": self.count,
            "dimension": self.dimension,
            "sigma": self.sigma,
            "sigma_hat": "unresolved" if self.sigma_hat is None else str(self.sigma_hat),
            "residual": self.residual,
            "lang_weil_c": self.lang_weil_c,
            "lang_weil_residual": self.lang_weil_residual,
            "note": self.note,
        }


def nearest_small_rational(x, p, max_denom=MAX_DENOM):
    """Smallest-denominator a/q (q <= max_denom) within 0.5 p^(-1/2) of x, else None."""
    tol = 0.5 / math.sqrt(p)
    for q in range(1, max_denom + 1):
        a = round(x * q)
        if abs(x - a / q) <= tol:
            return Fraction(a, q)
    return None


def make_report(p, N, c=1.0, dimension=None, note=""):
    """Assemble a CountReport; dimension is 1 when N > sqrt(p) unless given."""
    d = dimension if dimension is not None else (1 if N > math.sqrt(p) else 0)
    scale = p ** d
    sigma = N / scale
    sh = nearest_small_rational(sigma, p)
    norm = p ** (d - 0.5)
    residual = None if sh is None else (N - float(sh) * scale) / norm
    return CountReport(
        p=p, count=N, dimension=d, sigma=sigma, sigma_hat=sh, residual=residual,
        lang_weil_c=c, lang_weil_residual=(N - c * scale) / norm, note=note,
    )


# -- univariate root counting mod p ----------------------------------------------


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _mulmod(a, b, m, p):
    # a * b mod the monic polynomial m (ascending coefficients)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _reduce(out, m, p)


def _reduce(a, m, p):
    a = list(a)
    dm = len(m) - 1
    for k in range(len(a) - 1, dm - 1, -1):
        c = a[k]
        if c:
            for j in range(dm + 1):
                a[k - dm + j] = (a[k - dm + j] - c * m[j]) % p
    return _trim(a[:dm]) if dm else []


def _gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        inv = pow(b[-1], -1, p)
        b = [c * inv % p for c in b]
        a, b = b, _reduce(a, b, p)
    return a


def distinct_roots(coeffs, p):
    """Number of distinct roots in GF(p) of a polynomial (ascending coefficients).

    Returns p for the zero polynomial.  Uses deg gcd(f, y^p - y).
    """
    f = _trim([int(c) % p for c in coeffs])
    if not f:
        return p
    if len(f) == 1:
        return 0
    if len(f) == 2:
        return 1
    inv = pow(f[-1], -1, p)
    m = [c * inv % p for c in f]
    # y^p mod m by square-and-multiply
    result, base, e = [1], _reduce([0, 1], m, p), p
    while e:
        if e & 1:
            result = _mulmod(result, base, m, p)
        base = _mulmod(base, base, m, p)
        e >>= 1
    h = list(result) + [0] * max(0, 2 - len(result))
    h[1] = (h[1] - 1) % p
    g = _gcd(m, h, p)
    return len(g) - 1


def _slices(P, p):
    """Coefficient rows R[x] of P(x, y) as a polynomial in y, for every x in GF(p)."""
    C = np.ascontiguousarray(P.reduce_mod(p), dtype=np.int64)
    xs = np.arange(p, dtype=np.int64)
    # P(x, y) = sum_j (sum_i C[i, j] x^i) y^j; each column is univariate in x
    return np.stack([kernels.univariate_values(np.ascontiguousarray(C[:, j]), xs, p)
                     for j in range(C.shape[1])], axis=1)


def _zero_table(P, p):
    C = np.ascontiguousarray(P.reduce_mod(p), dtype=np.int64)
    xs = np.arange(p, dtype=np.int64)
    return kernels.poly_table(C, xs, xs, p) == 0


def _bivariate(P):
    if P.arity != 2:
        raise ArityMismatch(f"expected a polynomial in two variables; got arity {P.arity}")


def _field(field):
    return field if isinstance(field, PrimeField) else PrimeField(field)


def per_x_root_counts(P, field, method="auto"):
    """Array r with r[x] = number of y in GF(p) with P(x, y) = 0."""
    field = _field(field)
    p = field.p
    if method == "auto":
        method = "table" if p <= TABLE_MAX_P else "gcd"
    if method == "table":
        return _zero_table(P, p).sum(axis=1).astype(np.int64)
    R = _slices(P, p)
    return np.array([distinct_roots(row.tolist(), p) for row in R], dtype=np.int64)


def plane_curve_count(P, field, c=1.0, method="auto"):
    """|{(x, y) : P(x, y) = 0}| with a Lang-Weil report (c = expected components)."""
    _bivariate(P)
    field = _field(field)
    p = field.p
    if p > CURVE_MAX_P:
        raise BudgetExceeded(f"plane curve counts limited to p <= {CURVE_MAX_P}")
    if not np.any(P.reduce_mod(p)):
        raise ZeroPolynomial("P vanishes identically mod p")
    N = int(per_x_root_counts(P, field, method).sum())
    return make_report(p, N, c, note="irreducibility of the curve is not checked")


def definable_count(P, field, c=1.0, method="auto"):
    """|{x : exists t, P(x, t) = 0}| with the same report fields."""
    _bivariate(P)
    field = _field(field)
    p = field.p
    if p > DEFINABLE_MAX_P:
        raise BudgetExceeded(f"definable counts limited to p <= {DEFINABLE_MAX_P}")
    C = P.reduce_mod(p)
    if not np.any(C.ravel()[1:]):
        raise DegenerateInT("P is constant mod p; the set is empty or everything")
    N = int(np.count_nonzero(per_x_root_counts(P, field, method)))
    return make_report(p, N, c)


@dataclass
class FibreHistogram:
    p: int
    counts: np.ndarray  # counts[u] = |{(a, b) : P(a, b) = u}|
    max: int
    min: int
    mean: float

    def as_dict(self):
        return {u: int(n) for u, n in enumerate(self.counts.tolist())}


def fibre_histogram(P, field, budget=10 ** 8):
    _bivariate(P)
    field = _field(field)
    p = field.p
    if p * p > budget:
        raise BudgetExceeded(f"p^2 = {p * p} exceeds budget {budget}")
    allv = np.arange(p, dtype=np.int64)
    vals, cnt = value_histogram(P, allv, allv, field, budget)
    counts = np.zeros(p, dtype=np.int64)
    counts[vals] = cnt
    return FibreHistogram(p=p, counts=counts, max=int(counts.max()), min=int(counts.min()),
                          mean=float(counts.mean()))

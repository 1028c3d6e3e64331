"""Image sizes, quadruple statistics and incidence counts over GF(p).

Subsets of GF(p) are materialized as sorted int64 arrays of residues.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from . import kernels
from .config import get_threads
from .errors import ArityMismatch, BudgetExceeded, EmptySet, ValidationError
from .field import PrimeField
from .poly import RatPoly

DEFAULT_BUDGET = 10 ** 8
QUAD_BUDGET = 41 ** 4
DENSE_LIMIT = 1 << 26

C_MOD = 4.0
C_WEAK = 4.0
C_AS = 8.0


# -- subset specifications ---------------------------------------------------


class SubsetSpec:
    """Base class; subclasses are frozen dataclasses."""

    def materialize(self, field):
        return materialize(self, field)


@dataclass(frozen=True)
class Interval(SubsetSpec):
    start: int
    length: int


@dataclass(frozen=True)
class AP(SubsetSpec):
    start: int
    step: int
    length: int


@dataclass(frozen=True)
class GP(SubsetSpec):
    start: int
    ratio: int
    length: int


@dataclass(frozen=True)
class Random(SubsetSpec):
    size: int
    seed: int


@dataclass(frozen=True)
class Pullback(SubsetSpec):
    F: RatPoly
    base: SubsetSpec


@dataclass(frozen=True)
class Explicit(SubsetSpec):
    """A literal set of residues (used for tests and intersections)."""

    elements: tuple


def _check_len(n, p, what):
    if not 1 <= n <= p:
        raise ValidationError(f"{what}={n} must satisfy 1 <= {what} <= p={p}")


def _field(field):
    return field if isinstance(field, PrimeField) else PrimeField(field)


def materialize(spec, field):
    """Deduplicated sorted residues of ``spec`` in GF(p)."""
    field = _field(field)
    p = field.p
    if isinstance(spec, Interval):
        spec = AP(spec.start, 1, spec.length)
    if isinstance(spec, AP):
        _check_len(spec.length, p, "len")
        if p < (1 << 31):
            i = np.arange(spec.length, dtype=np.int64)
            vals = (spec.start % p + i * (spec.step % p)) % p
        else:
            vals = np.array([(spec.start + i * spec.step) % p for i in range(spec.length)], dtype=np.int64)
        return np.unique(vals)
    if isinstance(spec, GP):
        _check_len(spec.length, p, "len")
        if spec.ratio % p == 0:
            raise ValidationError("GP ratio must be nonzero mod p")
        vals, x = [], spec.start % p
        for _ in range(spec.length):
            vals.append(x)
            x = x * spec.ratio % p
        return np.unique(np.array(vals, dtype=np.int64))
    if isinstance(spec, Random):
        _check_len(spec.size, p, "size")
        rng = np.random.default_rng(spec.seed)
        return np.sort(rng.choice(p, size=spec.size, replace=False).astype(np.int64))
    if isinstance(spec, Pullback):
        if spec.F.arity != 1:
            raise ArityMismatch("pullback map must be univariate")
        if p > DEFAULT_BUDGET:
            raise BudgetExceeded(f"pullback enumerates all of GF({p})")
        base = materialize(spec.base, field)
        coeffs = spec.F.reduce_mod(p)
        xs = np.arange(p, dtype=np.int64)
        vals = kernels.univariate_values(coeffs, xs, p)
        out = xs[np.isin(vals, base)]
        if out.size == 0:
            raise EmptySet("pullback is empty")
        return out
    if isinstance(spec, Explicit):
        return np.unique(np.array([int(v) % p for v in spec.elements], dtype=np.int64))
    raise ValidationError(f"unknown subset spec {spec!r}")


def _as_array(S, p):
    if isinstance(S, SubsetSpec):
        raise TypeError("materialize the spec first")
    if isinstance(S, np.ndarray):
        arr = S.astype(np.int64) % p
    else:
        arr = np.array([int(v) % p for v in S], dtype=np.int64)
    return np.unique(arr)


def _bivariate(P, p):
    if P.arity != 2:
        raise ArityMismatch(f"expected a polynomial in x, y; got arity {P.arity}")
    return np.ascontiguousarray(P.reduce_mod(p), dtype=np.int64)


def _split(a, parts):
    parts = max(1, min(parts, len(a)))
    return [c for c in np.array_split(a, parts) if len(c)]


def value_histogram(P, A, B, field, budget=DEFAULT_BUDGET):
    """(values, counts) of P over A x B; values sorted, counts positive."""
    field = _field(field)
    p = field.p
    A, B = _as_array(A, p), _as_array(B, p)
    if len(A) * len(B) > budget:
        raise BudgetExceeded(f"|A||B| = {len(A) * len(B)} exceeds budget {budget}")
    C = _bivariate(P, p)
    chunks = _split(A, get_threads())
    if p <= DENSE_LIMIT:
        def work(chunk):
            return kernels.value_counts(C, chunk, B, p)

        if len(chunks) > 1:
            with ThreadPoolExecutor(len(chunks)) as ex:
                parts = list(ex.map(work, chunks))
        else:
            parts = [work(c) for c in chunks]
        counts = np.sum(parts, axis=0)
        vals = np.flatnonzero(counts)
        return vals.astype(np.int64), counts[vals]
    acc = {}
    step = max(1, (1 << 22) // max(len(B), 1))
    for s in range(0, len(A), step):
        T = kernels.poly_table(C, A[s:s + step], B, p)
        v, c = np.unique(T, return_counts=True)
        for vi, ci in zip(v.tolist(), c.tolist()):
            acc[vi] = acc.get(vi, 0) + ci
    vals = np.array(sorted(acc), dtype=np.int64)
    return vals, np.array([acc[v] for v in vals.tolist()], dtype=np.int64)


def image_set(P, A, B, field, budget=DEFAULT_BUDGET):
    """Sorted residues {P(a, b) : a in A, b in B}."""
    return value_histogram(P, A, B, field, budget)[0]


# -- quadruples ------------------------------------------------------------------


def sample_quadruples(P, field, n, seed=0):
    """n seeded uniform tuples (a,b,c,d) mapped to (P(a,c), P(a,d), P(b,c), P(b,d))."""
    field = _field(field)
    p = field.p
    C = _bivariate(P, p)
    rng = np.random.default_rng(seed)
    a, b, c, d = (rng.integers(0, p, size=n, dtype=np.int64) for _ in range(4))
    return np.stack(
        [kernels.poly_points(C, a, c, p), kernels.poly_points(C, a, d, p),
         kernels.poly_points(C, b, c, p), kernels.poly_points(C, b, d, p)],
        axis=1,
    )


def quadruple_count(P, field, budget=QUAD_BUDGET, seed=0):
    """(distinct, total, mode) for the quadruple map over GF(p)^4.

    Exact when p^4 <= budget; otherwise ``budget`` tuples are sampled (capped
    at 4e6) and distinct sampled quadruples are counted.
    """
    field = _field(field)
    p = field.p
    if budget < p * p:
        raise ValidationError(f"budget {budget} must be at least p^2 = {p * p}")
    if p ** 4 <= budget:
        C = _bivariate(P, p)
        xs = np.arange(p, dtype=np.int64)
        T = kernels.poly_table(C, xs, xs, p)
        return kernels.quadruple_distinct(T, p), p ** 4, "exact"
    n = int(min(budget, 4_000_000))
    Q = sample_quadruples(P, field, n, seed)
    distinct = len(np.unique(Q, axis=0))
    return distinct, n, "sampled"


# -- incidences ------------------------------------------------------------------


def triple_incidence(P, A, B, C, field, budget=DEFAULT_BUDGET):
    """(count, main_term, residual) for |{(a,b) in A x B : P(a,b) in C}|."""
    field = _field(field)
    p = field.p
    A, B, C = _as_array(A, p), _as_array(B, p), _as_array(C, p)
    vals, counts = value_histogram(P, A, B, field, budget)
    count = int(counts[np.isin(vals, C)].sum())
    main = Fraction(len(A) * len(B) * len(C), p)
    residual = (count - float(main)) / math.sqrt(p * len(A) * len(B))
    return count, main, residual


# -- reports ---------------------------------------------------------------------


@dataclass
class ExpansionReport:
    p: int
    size_a: int
    size_b: int
    image_size: int
    complement: int
    ratio_p: float
    ratio_min: float
    weak_ratio: float
    moderate: bool
    weak: bool
    almost_strong: bool
    thresholds: dict = dc_field(default_factory=dict)
    constants: dict = dc_field(default_factory=dict)

    def to_dict(self):
        return {
            "p": self.p,
            "size_a": self.size_a,
            "size_b": self.size_b,
            "image_size": self.image_size,
            "complement": self.complement,
            "ratio_p": self.ratio_p,
            "ratio_min": self.ratio_min,
            "weak_ratio": self.weak_ratio,
            "flags": {"moderate": self.moderate, "weak": self.weak, "almost_strong": self.almost_strong},
            "thresholds": dict(self.thresholds),
            "constants": dict(self.constants),
        }


def expansion_report(P, specA, specB, field, c_mod=C_MOD, c_weak=C_WEAK, c_as=C_AS,
                     budget=DEFAULT_BUDGET):
    field = _field(field)
    p = field.p
    A = specA if isinstance(specA, np.ndarray) else materialize(specA, field)
    B = specB if isinstance(specB, np.ndarray) else materialize(specB, field)
    na, nb = len(A), len(B)
    img = len(image_set(P, A, B, field, budget))
    comp = p - img
    m = min(na, nb)
    t_mod = p / c_mod
    t_weak = math.sqrt(p * m) / c_weak
    t_as = c_as * p * ((na * nb) / p ** (2 - 1 / 8)) ** -0.5
    return ExpansionReport(
        p=p, size_a=na, size_b=nb, image_size=img, complement=comp,
        ratio_p=img / p, ratio_min=img / m, weak_ratio=img / math.sqrt(p * m),
        moderate=img >= t_mod, weak=img >= t_weak, almost_strong=comp <= t_as,
        thresholds={"moderate": t_mod, "weak": t_weak, "almost_strong": t_as},
        constants={"c_mod": c_mod, "c_weak": c_weak, "c_as": c_as},
    )

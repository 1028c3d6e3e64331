"""Definable bipartite graphs over GF(p), codegrees and spectral discrepancy."""

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import ArityMismatch, BudgetExceeded, ConvergenceFailure, ValidationError, VertexOutOfRange
from .field import PrimeField

KINDS = ("QRDifference", "QRProduct", "PolyInQR", "PolyLevelSet")
SPECTRAL_MAX_P = 4096
CODEGREE_MAX_P = 1 << 14


@dataclass(frozen=True)
class DefinableBipartiteGraph:
    """Edge predicates on V x W.

    QRDifference: v - w is a nonzero square (no loops).
    QRProduct:    v * w is a square; V = W = GF(p) minus 0.
    PolyInQR:     P(v, w) is a square, 0 counted as a square.
    PolyLevelSet: P(v, w) lies in S.
    """

    kind: str
    field: PrimeField
    P: object = None
    S: frozenset = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown graph kind {self.kind!r}; expected one of {KINDS}")
        if not isinstance(self.field, PrimeField):
            object.__setattr__(self, "field", PrimeField(self.field))
        if self.kind in ("PolyInQR", "PolyLevelSet"):
            if self.P is None:
                raise ValidationError(f"{self.kind} needs a polynomial")
            if self.P.arity != 2:
                raise ArityMismatch("edge polynomial must be in two variables")
        if self.kind == "PolyLevelSet":
            if self.S is None:
                raise ValidationError("PolyLevelSet needs a value set S")
            object.__setattr__(self, "S", frozenset(int(s) % self.field.p for s in self.S))

    @property
    def p(self):
        return self.field.p

    def vertices(self):
        """Vertex list shared by V and W."""
        start = 1 if self.kind == "QRProduct" else 0
        return np.arange(start, self.p, dtype=np.int64)

    def matrix(self):
        """Boolean incidence array, rows V and columns W in ``vertices()`` order."""
        p = self.p
        vs = self.vertices()
        if p > CODEGREE_MAX_P:
            raise BudgetExceeded(f"dense incidence needs p <= {CODEGREE_MAX_P}")
        mask = self.field.qr_mask
        if self.kind == "QRDifference":
            diff = (vs[:, None] - vs[None, :]) % p
            return mask[diff] & (diff != 0)
        if self.kind == "QRProduct":
            return mask[(vs[:, None] * vs[None, :]) % p]
        T = kernels.poly_table(self.P.reduce_mod(p), vs, vs, p)
        if self.kind == "PolyInQR":
            return mask[T]
        return np.isin(T, np.fromiter(self.S, dtype=np.int64, count=len(self.S)))


def adjacency(graph, v, w):
    p = graph.p
    v, w = int(v), int(w)
    lo = 1 if graph.kind == "QRProduct" else 0
    for u in (v, w):
        if not lo <= u < p:
            raise VertexOutOfRange(f"vertex {u} not in the {graph.kind} vertex set over GF({p})")
    F = graph.field
    if graph.kind == "QRDifference":
        d = (v - w) % p
        return d != 0 and F.is_qr(d)
    if graph.kind == "QRProduct":
        return F.is_qr(v * w)
    val = int(graph.P.evaluate((F(v), F(w))))
    if graph.kind == "PolyInQR":
        return F.is_qr(val)
    return val in graph.S


# -- codegrees -------------------------------------------------------------------


@dataclass
class CodegreeStats:
    p: int
    histogram: dict
    pairs: int
    mode: str
    levels: list = dc_field(default_factory=list)

    @property
    def values(self):
        return sorted(self.histogram)

    def fraction_within(self, c, K=1.0):
        """Fraction of pairs with |mu - c p| <= K sqrt(p)."""
        r = K * math.sqrt(self.p)
        hit = sum(n for mu, n in self.histogram.items() if abs(mu - c * self.p) <= r)
        return hit / self.pairs if self.pairs else 1.0

    def to_dict(self):
        return {
            "p": self.p,
            "mode": self.mode,
            "pairs": self.pairs,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "levels": [{"c": c, "fraction": f} for c, f in self.levels],
        }


def _levels(hist, p, K):
    # Group codegree values separated by less than 2 K sqrt(p); each group is a level.
    if not hist:
        return []
    gap = 2 * K * math.sqrt(p)
    vals = sorted(hist)
    groups, cur = [], [vals[0]]
    for v in vals[1:]:
        if v - cur[-1] <= gap:
            cur.append(v)
        else:
            groups.append(cur)
            cur = [v]
    groups.append(cur)
    total = sum(hist.values())
    out = []
    for g in groups:
        mean = sum(v * hist[v] for v in g) / sum(hist[v] for v in g)
        c = mean / p
        frac = sum(n for mu, n in hist.items() if abs(mu - c * p) <= K * math.sqrt(p)) / total
        out.append((c, frac))
    return out


def codegree_stats(graph, K=1.0, sampled=False, samples=100_000, seed=0):
    """Histogram of mu(w, w') over unordered pairs w != w' of W."""
    p = graph.p
    if p > CODEGREE_MAX_P:
        raise BudgetExceeded(f"codegree statistics need p <= {CODEGREE_MAX_P}")
    M = graph.matrix()
    n = M.shape[1]
    hist = {}
    if not sampled:
        Mf = M.astype(np.float32)
        block = 512
        for s in range(0, n, block):
            G = Mf[:, s:s + block].T @ Mf  # counts below 2^24 are exact in float32
            rows = np.arange(s, min(s + block, n))
            keep = np.arange(n)[None, :] > rows[:, None]
            vals, cnt = np.unique(G[keep].astype(np.int64), return_counts=True)
            for v, c in zip(vals.tolist(), cnt.tolist()):
                hist[v] = hist.get(v, 0) + c
        pairs = n * (n - 1) // 2
        mode = "exact"
    else:
        rng = np.random.default_rng(seed)
        w1 = rng.integers(0, n, size=samples)
        w2 = rng.integers(0, n - 1, size=samples)
        w2 = w2 + (w2 >= w1)
        mu = (M[:, w1] & M[:, w2]).sum(axis=0)
        vals, cnt = np.unique(mu, return_counts=True)
        hist = {int(v): int(c) for v, c in zip(vals, cnt)}
        pairs = samples
        mode = "sampled"
    return CodegreeStats(p=p, histogram=hist, pairs=pairs, mode=mode, levels=_levels(hist, p, K))


# -- partitions ------------------------------------------------------------------


@dataclass
class PartitionCells:
    V: list
    W: list
    labels: list

    @property
    def sizes(self):
        return [len(c) for c in self.V]


def qr_partition(field, trivial=False, zero_with_qr=True):
    """Cells {nonzero squares (+0), non-squares} for both sides.

    With ``zero_with_qr=False`` zero forms its own cell.
    """
    field = field if isinstance(field, PrimeField) else PrimeField(field)
    p = field.p
    allv = np.arange(p, dtype=np.int64)
    if trivial:
        return PartitionCells(V=[allv], W=[allv], labels=["all"])
    mask = field.qr_mask
    qr = allv[mask & (allv != 0)]
    nqr = allv[~mask]
    if zero_with_qr:
        cells = [np.concatenate([[0], qr]).astype(np.int64), nqr]
        labels = ["qr+0", "nqr"]
    else:
        cells = [qr, nqr, np.array([0], dtype=np.int64)]
        labels = ["qr", "nqr", "zero"]
    return PartitionCells(V=list(cells), W=list(cells), labels=labels)


# -- spectral certificates -------------------------------------------------------


def top_singular_value(X, tol, max_iter=10_000, seed=0):
    """Largest singular value of X by power iteration on X^T X."""
    m, n = X.shape
    if m == 0 or n == 0 or not np.any(X):
        return 0.0
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(max_iter):
        u = X @ v
        w = X.T @ u
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        new = math.sqrt(nw)  # ||X^T X v|| -> sigma^2 as v aligns
        v = w / nw
        if abs(new - sigma) <= tol:
            return float(np.linalg.norm(X @ v))
        sigma = new
    raise ConvergenceFailure(f"power iteration did not reach tolerance {tol} in {max_iter} steps")


@dataclass
class CellPair:
    i: int
    j: int
    d: Fraction
    sigma: float
    exponent: float
    size_v: int
    size_w: int

    def bound(self, a, b):
        return self.sigma * math.sqrt(a * b)


@dataclass
class DiscrepancyCertificate:
    p: int
    kind: str
    cells_v: list
    cells_w: list
    pairs: list

    def to_dict(self):
        return {
            "p": self.p,
            "kind": self.kind,
            "cells": list(self.cells_v),
            "cells_w": list(self.cells_w),
            "pairs": [
                {"i": c.i, "j": c.j, "d": float(c.d), "sigma": c.sigma, "exponent": c.exponent}
                for c in self.pairs
            ],
        }

    def pair(self, i, j):
        return next(c for c in self.pairs if c.i == i and c.j == j)


def _restrict(cells, vertices):
    pos = {int(v): k for k, v in enumerate(vertices)}
    return [np.array([pos[int(v)] for v in c if int(v) in pos], dtype=np.int64) for c in cells]


def spectral_discrepancy(graph, cells=None, max_iter=10_000, seed=0):
    """Density and centered spectral norm for every cell pair.

    For A in V_i, B in W_j the count |E n (A x B)| differs from d |A||B| by at
    most sigma (|A||B|)^(1/2).  Exponent is None when sigma == 0.
    """
    p = graph.p
    if p > SPECTRAL_MAX_P:
        raise BudgetExceeded(f"spectral certificates need p <= {SPECTRAL_MAX_P}")
    if cells is None:
        cells = qr_partition(graph.field, trivial=True)
    M = graph.matrix()
    verts = graph.vertices()
    Vc = _restrict(cells.V, verts)
    Wc = _restrict(cells.W, verts)
    tol = 1e-9 * p
    out = []
    for i, vi in enumerate(Vc):
        for j, wj in enumerate(Wc):
            nv, nw = len(vi), len(wj)
            if nv == 0 or nw == 0:
                continue
            sub = M[np.ix_(vi, wj)]
            edges = int(sub.sum())
            d = Fraction(edges, nv * nw)
            X = sub.astype(np.float64) - float(d)
            sigma = top_singular_value(X, tol, max_iter, seed)
            if sigma > 0:
                e = math.log(sigma * math.sqrt(nv * nw) / (nv * nw)) / math.log(p)
            else:
                e = None
            out.append(CellPair(i, j, d, sigma, e, nv, nw))
    return DiscrepancyCertificate(
        p=p, kind=graph.kind,
        cells_v=[len(c) for c in Vc], cells_w=[len(c) for c in Wc],
        pairs=out,
    )

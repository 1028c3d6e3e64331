"""numpy fallback for the GF(p) kernels.

Vectorized int64 arithmetic is exact while p < 2**31; above that the
kernels fall back to Python integers.
"""

import numpy as np

_I64_SAFE = 1 << 31
_CHUNK = 1 << 22


def _row_coeffs(C, xs, p):
    # R[a, j] = sum_i C[i, j] * xs[a]^i  (Horner over i)
    R = np.zeros((len(xs), C.shape[1]), dtype=np.int64)
    for i in range(C.shape[0] - 1, -1, -1):
        R = (R * xs[:, None] + C[i][None, :]) % p
    return R


def _table_block(C, xs, ys, p):
    R = _row_coeffs(C, xs, p)
    V = np.zeros((len(xs), len(ys)), dtype=np.int64)
    for j in range(C.shape[1] - 1, -1, -1):
        V = (V * ys[None, :] + R[:, j][:, None]) % p
    return V


def _table_bigint(C, xs, ys, p):
    rows = [[int(v) for v in row] for row in C]
    out = np.empty((len(xs), len(ys)), dtype=np.int64)
    for ai, x in enumerate(xs):
        x = int(x)
        r = []
        for j in range(len(rows[0])):
            acc = 0
            for i in range(len(rows) - 1, -1, -1):
                acc = (acc * x + rows[i][j]) % p
            r.append(acc)
        for bi, y in enumerate(ys):
            y = int(y)
            acc = 0
            for c in reversed(r):
                acc = (acc * y + c) % p
            out[ai, bi] = acc
    return out


def _blocks(xs, ys):
    step = max(1, _CHUNK // max(len(ys), 1))
    for s in range(0, len(xs), step):
        yield xs[s:s + step]


def poly_table(coeffs, xs, ys, p):
    C = np.asarray(coeffs, dtype=np.int64)
    xs = np.asarray(xs, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    if p >= _I64_SAFE:
        return _table_bigint(C, xs, ys, p)
    if len(xs) == 0:
        return np.empty((0, len(ys)), dtype=np.int64)
    return np.concatenate([_table_block(C, blk, ys, p) for blk in _blocks(xs, ys)])


def value_counts(coeffs, xs, ys, p):
    C = np.asarray(coeffs, dtype=np.int64)
    xs = np.asarray(xs, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    counts = np.zeros(p, dtype=np.int64)
    for blk in _blocks(xs, ys):
        if p >= _I64_SAFE:
            V = _table_bigint(C, blk, ys, p)
        else:
            V = _table_block(C, blk, ys, p)
        counts += np.bincount(V.ravel(), minlength=p)
    return counts


def poly_points(coeffs, xs, ys, p):
    C = np.asarray(coeffs, dtype=np.int64)
    xs = np.asarray(xs, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    if p >= _I64_SAFE:
        rows = [[int(v) for v in row] for row in C]
        out = np.empty(len(xs), dtype=np.int64)
        for k in range(len(xs)):
            x, y = int(xs[k]), int(ys[k])
            acc = 0
            for j in range(len(rows[0]) - 1, -1, -1):
                r = 0
                for i in range(len(rows) - 1, -1, -1):
                    r = (r * x + rows[i][j]) % p
                acc = (acc * y + r) % p
            out[k] = acc
        return out
    acc = np.zeros(len(xs), dtype=np.int64)
    for j in range(C.shape[1] - 1, -1, -1):
        r = np.zeros(len(xs), dtype=np.int64)
        for i in range(C.shape[0] - 1, -1, -1):
            r = (r * xs + C[i, j]) % p
        acc = (acc * ys + r) % p
    return acc


def univariate_values(coeffs, ts, p):
    C = np.asarray(coeffs, dtype=np.int64)
    ts = np.asarray(ts, dtype=np.int64)
    if p >= _I64_SAFE:
        out = np.empty(len(ts), dtype=np.int64)
        cs = [int(c) for c in C]
        for k, t in enumerate(ts):
            acc = 0
            for c in reversed(cs):
                acc = (acc * int(t) + c) % p
            out[k] = acc
        return out
    acc = np.zeros(len(ts), dtype=np.int64)
    for c in C[::-1]:
        acc = (acc * ts + c) % p
    return acc


def quadruple_distinct(table, p):
    T = np.asarray(table, dtype=np.int64)
    n = T.shape[0]
    seen = np.zeros(p ** 4, dtype=bool)
    for a in range(n):
        ta = T[a]
        # codes[b, c, d] = ta[c] p^3 + ta[d] p^2 + T[b, c] p + T[b, d]
        hi = ta[:, None] * p ** 3 + ta[None, :] * p ** 2
        lo = T[:, :, None] * p + T[:, None, :]
        seen[(hi[None, :, :] + lo).ravel()] = True
    return int(seen.sum())

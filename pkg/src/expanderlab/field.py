"""Arithmetic in prime fields GF(p), p odd and below 2**61."""

import math
import threading

import numpy as np

from .errors import DivisionByZero, FieldMismatch, NotPrime

P_MAX = 1 << 61
TABLE_LIMIT = 1 << 20

# Deterministic for n < 3.3e24 (first twelve primes as witnesses).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic Miller-Rabin, exact for every n below 2**64."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n):
    """Distinct prime factors of n, ascending."""
    if n < (1 << 40):
        out, d = [], 2
        while d * d <= n:
            if n % d == 0:
                out.append(d)
                while n % d == 0:
                    n //= d
            d += 1 if d == 2 else 2
        if n > 1:
            out.append(n)
        return out
    from sympy import factorint

    return sorted(factorint(n))


def primes_upto(n):
    """Odd primes 3 <= q <= n."""
    return [q for q in range(3, n + 1, 2) if is_prime(q)]


class PrimeField:
    """GF(p) for an odd prime p < 2**61.

    The generator, quadratic-residue mask and discrete-log table are built
    lazily, at most once, under a per-instance lock.  Tables are only
    materialized for p <= 2**20.
    """

    def __init__(self, p):
        p = int(p)
        if p < 3 or p >= P_MAX or not is_prime(p):
            raise NotPrime(f"p={p} must be an odd prime below 2^61")
        self.p = p
        self._lock = threading.Lock()
        self._generator = None
        self._qr_mask = None
        self._dlog = None

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __call__(self, value):
        return FieldElem(value, self)

    @property
    def has_tables(self):
        return self.p <= TABLE_LIMIT

    # -- generator ---------------------------------------------------------

    @property
    def generator(self):
        if self._generator is None:
            with self._lock:
                if self._generator is None:
                    self._generator = self._find_generator()
        return self._generator

    def _find_generator(self):
        p = self.p
        qs = prime_factors(p - 1)
        g = 2
        while True:
            if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
                return g
            g += 1

    # -- quadratic residues ------------------------------------------------

    @property
    def qr_mask(self):
        """Boolean array, qr_mask[x] iff x is a square (0 included)."""
        if not self.has_tables:
            raise ValueError(f"no QR table for p={self.p} > 2^20")
        if self._qr_mask is None:
            with self._lock:
                if self._qr_mask is None:
                    p = self.p
                    mask = np.zeros(p, dtype=bool)
                    ys = np.arange(p, dtype=np.int64)
                    mask[(ys * ys) % p] = True
                    mask.setflags(write=False)
                    self._qr_mask = mask
        return self._qr_mask

    def is_qr(self, x):
        x = int(x) % self.p
        if self.has_tables:
            return bool(self.qr_mask[x])
        return x == 0 or pow(x, (self.p - 1) // 2, self.p) == 1

    def legendre(self, x):
        x = int(x) % self.p
        if x == 0:
            return 0
        return 1 if self.is_qr(x) else -1

    def legendre_table(self):
        """int8 array of Legendre symbols for 0..p-1."""
        chi = np.where(self.qr_mask, 1, -1).astype(np.int8)
        chi[0] = 0
        return chi

    # -- discrete log --------------------------------------------------------

    @property
    def dlog_table(self):
        """int64 array with dlog[g^k] = k; entry 0 is -1."""
        if not self.has_tables:
            raise ValueError(f"no dlog table for p={self.p} > 2^20")
        if self._dlog is None:
            g = self.generator
            with self._lock:
                if self._dlog is None:
                    p = self.p
                    table = np.full(p, -1, dtype=np.int64)
                    x = 1
                    for k in range(p - 1):
                        table[x] = k
                        x = x * g % p
                    table.setflags(write=False)
                    self._dlog = table
        return self._dlog

    def dlog(self, x):
        x = int(x) % self.p
        if x == 0:
            raise DivisionByZero("discrete log of 0")
        if self.has_tables:
            return int(self.dlog_table[x])
        return _bsgs(self.generator, x, self.p)

    # -- scalar helpers --------------------------------------------------------

    def inv(self, x):
        x = int(x) % self.p
        if x == 0:
            raise DivisionByZero(f"0 has no inverse mod {self.p}")
        return pow(x, -1, self.p)

    def elements(self):
        return [FieldElem(v, self) for v in range(self.p)]


def _bsgs(g, h, p):
    n = p - 1
    m = math.isqrt(n) + 1
    baby = {}
    x = 1
    for j in range(m):
        baby.setdefault(x, j)
        x = x * g % p
    giant = pow(g, -m, p)
    y = h
    for i in range(m):
        j = baby.get(y)
        if j is not None:
            return (i * m + j) % n
        y = y * giant % p
    raise ArithmeticError("discrete log not found; generator is not primitive")


class FieldElem:
    """Canonical residue in [0, p) bound to a PrimeField."""

    __slots__ = ("value", "field")

    def __init__(self, value, field):
        self.field = field
        self.value = int(value) % field.p

    def __repr__(self):
        return f"FieldElem({self.value}, p={self.field.p})"

    def __int__(self):
        return self.value

    __index__ = __int__

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field.p == other.field.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.p))

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field.p != self.field.p:
                raise FieldMismatch(f"GF({self.field.p}) vs GF({other.field.p})")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.value + o, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.value - o, self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElem(o - self.value, self.field)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.value * o, self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o == 0:
            raise DivisionByZero(f"division by zero in GF({self.field.p})")
        return FieldElem(self.value * pow(o, -1, self.field.p), self.field)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElem(o, self.field) / self

    def __neg__(self):
        return FieldElem(-self.value, self.field)

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            raise ValueError("field_arith pow takes a nonnegative exponent")
        return FieldElem(pow(self.value, k, self.field.p), self.field)


def field_arith(x, y, op):
    """Apply op in {'add','sub','mul','div','pow'}; for pow, y is an int exponent."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "pow":
        return x ** int(y)
    raise ValueError(f"unknown op {op!r}")


def is_quadratic_residue(x):
    return x.field.is_qr(x.value)


def find_generator(field):
    return FieldElem(field.generator, field)

"""Exact sparse multivariate polynomials and rational functions over Q.

Terms are stored as ``{exponent tuple: Fraction}`` with no zero entries.
Monomials are ordered graded-lexicographically (total degree first, then
lexicographic with x > y > ...), which fixes the printed form.
"""

from fractions import Fraction
from math import gcd, lcm

import numpy as np

from .errors import (
    ArityMismatch,
    DenominatorNotInvertible,
    DuplicateNode,
    ZeroDenominator,
    ZeroPolynomial,
)
from .field import FieldElem

DEFAULT_NAMES = {
    1: ("x",),
    2: ("x", "y"),
    3: ("x", "y", "z"),
    4: ("a", "b", "c", "d"),
}

# Packed-monomial layout for the multiplication fast path.
_BITS = 20
_MASK = (1 << _BITS) - 1


def _as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, np.integer)):
        return Fraction(int(c))
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"coefficient must be rational, got {type(c).__name__}")


def grlex_key(exps):
    return (sum(exps), exps)


def _pack(e):
    v = 0
    for k in e:
        v = (v << _BITS) | k
    return v


def _unpack(v, n):
    out = [0] * n
    for i in range(n - 1, -1, -1):
        out[i] = v & _MASK
        v >>= _BITS
    return tuple(out)


def _int_form(terms):
    """Return (scale, {packed: int}) with terms == {e: c / scale}."""
    den = 1
    for c in terms.values():
        den = lcm(den, c.denominator)
    return den, {_pack(e): int(c * den) for e, c in terms.items()}


def _mul_packed(u, v):
    out = {}
    get = out.get
    if len(u) < len(v):
        u, v = v, u
    vitems = list(v.items())
    for mu, cu in u.items():
        for mv, cv in vitems:
            m = mu + mv
            out[m] = get(m, 0) + cu * cv
    return {m: c for m, c in out.items() if c}


def _int_terms(terms):
    den = 1
    for c in terms.values():
        den = lcm(den, c.denominator)
    return den, {e: int(c * den) for e, c in terms.items()}


_KRON_THRESHOLD = 4096


def _kron_mul(u, v, n):
    """Product of integer polynomials by Kronecker substitution into one big int."""
    du = [max(e[i] for e in u) for i in range(n)]
    dv = [max(e[i] for e in v) for i in range(n)]
    dw = [a + b for a, b in zip(du, dv)]
    strides = [1] * n
    for i in range(n - 2, -1, -1):
        strides[i] = strides[i + 1] * (dw[i + 1] + 1)
    slots = strides[0] * (dw[0] + 1)
    bound = max(abs(c) for c in u.values()) * max(abs(c) for c in v.values()) * min(len(u), len(v))
    kb = (bound.bit_length() + 2 + 7) // 8
    half = 1 << (8 * kb - 1)

    def pack(terms):
        pos = bytearray(slots * kb)
        neg = bytearray(slots * kb)
        for e, c in terms.items():
            at = sum(k * s for k, s in zip(e, strides)) * kb
            if c > 0:
                pos[at:at + kb] = c.to_bytes(kb, "little")
            else:
                neg[at:at + kb] = (-c).to_bytes(kb, "little")
        return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")

    w = pack(u) * pack(v)
    w += int.from_bytes(half.to_bytes(kb, "little") * slots, "little")
    raw = w.to_bytes(slots * kb, "little")
    zero = half.to_bytes(kb, "little")
    out = {}
    for slot in range(slots):
        chunk = raw[slot * kb:(slot + 1) * kb]
        if chunk != zero:
            e = []
            r = slot
            for s in strides:
                q, r = divmod(r, s)
                e.append(q)
            out[tuple(e)] = int.from_bytes(chunk, "little") - half
    return out


class RatPoly:
    """Immutable polynomial in ``arity`` variables with rational coefficients."""

    __slots__ = ("arity", "terms", "_hash")

    def __init__(self, arity, terms=None):
        if arity < 1:
            raise ValueError("arity must be >= 1")
        self.arity = arity
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(k) for k in e)
                if len(e) != arity:
                    raise ArityMismatch(f"exponent {e} does not have length {arity}")
                if any(k < 0 for k in e):
                    raise ValueError(f"negative exponent in {e}")
                c = _as_fraction(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
                    if not clean[e]:
                        del clean[e]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, arity, terms):
        obj = cls.__new__(cls)
        obj.arity = arity
        obj.terms = terms
        obj._hash = None
        return obj

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, arity):
        return cls._raw(arity, {})

    @classmethod
    def const(cls, c, arity):
        c = _as_fraction(c)
        return cls._raw(arity, {(0,) * arity: c} if c else {})

    @classmethod
    def var(cls, i, arity):
        e = [0] * arity
        e[i] = 1
        return cls._raw(arity, {tuple(e): Fraction(1)})

    @classmethod
    def from_coeffs(cls, coeffs, arity=1, var=0):
        """Univariate-in-``var`` polynomial from ascending coefficients."""
        terms = {}
        for k, c in enumerate(coeffs):
            c = _as_fraction(c)
            if c:
                e = [0] * arity
                e[var] = k
                terms[tuple(e)] = c
        return cls._raw(arity, terms)

    @classmethod
    def monomial(cls, exps, coeff=1):
        return cls(len(exps), {tuple(exps): coeff})

    # -- basic queries ----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.arity, Fraction(0))

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i):
        return max((e[i] for e in self.terms), default=-1)

    def variables(self):
        return sorted({i for e in self.terms for i, k in enumerate(e) if k})

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def lc(self):
        return self.leading_term()[1]

    def homogeneous_part(self, d):
        return RatPoly._raw(self.arity, {e: c for e, c in self.terms.items() if sum(e) == d})

    def __eq__(self, other):
        if isinstance(other, RatPoly):
            return self.arity == other.arity and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == RatPoly.const(other, self.arity)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.arity, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"RatPoly({self.arity}, {self.to_str()!r})"

    def __str__(self):
        return self.to_str()

    # -- arithmetic -------------------------------------------------------------

    def _check(self, other):
        if isinstance(other, (int, Fraction, np.integer)):
            return RatPoly.const(other, self.arity)
        if not isinstance(other, RatPoly):
            return None
        if other.arity != self.arity:
            raise ArityMismatch(f"arity {self.arity} vs {other.arity}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return RatPoly._raw(self.arity, out)

    __radd__ = __add__

    def __neg__(self):
        return RatPoly._raw(self.arity, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c):
        c = _as_fraction(c)
        if not c:
            return RatPoly.zero(self.arity)
        return RatPoly._raw(self.arity, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, np.integer)):
            return self.scale(other)
        other = self._check(other)
        if other is None:
            return NotImplemented
        if not self.terms or not other.terms:
            return RatPoly.zero(self.arity)
        if len(self.terms) == 1 or len(other.terms) == 1:
            return self._mul_small(other)
        n = self.arity
        if len(self.terms) * len(other.terms) > _KRON_THRESHOLD:
            s1, u = _int_terms(self.terms)
            s2, v = _int_terms(other.terms)
            prod = _kron_mul(u, v, n)
            den = s1 * s2
            return RatPoly._raw(n, {e: Fraction(c, den) for e, c in prod.items()})
        s1, u = _int_form(self.terms)
        s2, v = _int_form(other.terms)
        prod = _mul_packed(u, v)
        den = s1 * s2
        return RatPoly._raw(n, {_unpack(m, n): Fraction(c, den) for m, c in prod.items()})

    __rmul__ = __mul__

    def _mul_small(self, other):
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return RatPoly._raw(self.arity, out)

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            raise ValueError("negative power")
        result = RatPoly.const(1, self.arity)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- calculus ---------------------------------------------------------------

    def derivative(self, var):
        if not 0 <= var < self.arity:
            raise IndexError(f"variable index {var} out of range")
        out = {}
        for e, c in self.terms.items():
            k = e[var]
            if k:
                e2 = list(e)
                e2[var] = k - 1
                out[tuple(e2)] = c * k
        return RatPoly._raw(self.arity, out)

    def antiderivative(self, var=0):
        """Formal antiderivative with zero constant of integration."""
        out = {}
        for e, c in self.terms.items():
            e2 = list(e)
            e2[var] += 1
            out[tuple(e2)] = c / e2[var]
        return RatPoly._raw(self.arity, out)

    # -- evaluation / substitution ----------------------------------------------

    def evaluate(self, point):
        if len(point) != self.arity:
            raise ArityMismatch(f"point has {len(point)} coordinates, expected {self.arity}")
        if point and all(isinstance(v, FieldElem) for v in point):
            return self._evaluate_field(point)
        pt = [_as_fraction(v) for v in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for v, k in zip(pt, e):
                if k:
                    t *= v ** k
            total += t
        return total

    __call__ = evaluate

    def _evaluate_field(self, point):
        field = point[0].field
        p = field.p
        vals = [v.value for v in point]
        total = 0
        for e, c in self.terms.items():
            t = coeff_mod(c, p)
            for v, k in zip(vals, e):
                if k:
                    t = t * pow(v, k, p) % p
            total += t
        return FieldElem(total, field)

    def compose(self, subs):
        """Substitute polynomial ``subs[i]`` for variable i (all of equal arity)."""
        if len(subs) != self.arity:
            raise ArityMismatch("need one substitution per variable")
        n = subs[0].arity
        for s in subs:
            if s.arity != n:
                raise ArityMismatch("substitutions must share arity")
        cache = [dict() for _ in subs]

        def power(i, k):
            got = cache[i].get(k)
            if got is None:
                if k == 0:
                    got = RatPoly.const(1, n)
                elif k == 1:
                    got = subs[i]
                else:
                    got = power(i, k // 2) * power(i, k - k // 2)
                cache[i][k] = got
            return got

        total = RatPoly.zero(n)
        for e, c in self.terms.items():
            t = RatPoly.const(c, n)
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            total = total + t
        return total

    def compose_univariate(self, inner):
        """self(inner) for univariate self and any inner."""
        if self.arity != 1:
            raise ArityMismatch("compose_univariate needs a univariate outer polynomial")
        coeffs = self.coeffs()
        result = RatPoly.zero(inner.arity)
        for c in reversed(coeffs):
            result = result * inner + c
        return result

    def specialize(self, var, value):
        """Set variable ``var`` to a rational value, keeping the arity."""
        value = _as_fraction(value)
        out = {}
        for e, c in self.terms.items():
            k = e[var]
            e2 = list(e)
            e2[var] = 0
            e2 = tuple(e2)
            s = out.get(e2, 0) + c * value ** k
            if s:
                out[e2] = s
            else:
                out.pop(e2, None)
        return RatPoly._raw(self.arity, out)

    def embed(self, slots, arity):
        """Rename variable i to ``slots[i]`` in a polynomial of the given arity."""
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * arity
            for i, k in enumerate(e):
                e2[slots[i]] += k
            out[tuple(e2)] = c
        return RatPoly._raw(arity, out)

    def restrict(self, var):
        """Univariate polynomial in ``var``; other variables must be absent."""
        out = {}
        for e, c in self.terms.items():
            if any(k for i, k in enumerate(e) if i != var):
                raise ValueError("polynomial depends on other variables")
            out[(e[var],)] = c
        return RatPoly._raw(1, out)

    # -- integer / modular views ----------------------------------------------

    def denominator_lcm(self):
        den = 1
        for c in self.terms.values():
            den = lcm(den, c.denominator)
        return den

    def reduce_mod(self, p):
        """Dense int64/object coefficient array over GF(p), axis i <-> variable i."""
        shape = tuple(max(self.degree_in(i), 0) + 1 for i in range(self.arity))
        dtype = np.int64 if p < (1 << 62) else object
        arr = np.zeros(shape, dtype=dtype)
        for e, c in self.terms.items():
            arr[e] = (int(arr[e]) + coeff_mod(c, p)) % p
        return arr

    # -- univariate helpers ------------------------------------------------------

    def _univariate_var(self):
        vs = self.variables()
        if len(vs) > 1:
            raise ValueError("polynomial is not univariate")
        return vs[0] if vs else 0

    def coeffs(self, var=None):
        """Ascending coefficient list of a univariate polynomial."""
        if var is None:
            var = self._univariate_var() if self.arity > 1 else 0
        deg = self.degree_in(var)
        out = [Fraction(0)] * (deg + 1)
        for e, c in self.terms.items():
            if any(k for i, k in enumerate(e) if i != var):
                raise ValueError("polynomial is not univariate in the requested variable")
            out[e[var]] = c
        return out

    # -- printing ------------------------------------------------------------

    def to_str(self, names=None):
        names = names or DEFAULT_NAMES.get(self.arity) or tuple(f"x{i}" for i in range(self.arity))
        if not self.terms:
            return "0"
        parts = []
        for idx, (e, c) in enumerate(self.sorted_terms()):
            neg = c < 0
            a = -c if neg else c
            factors = []
            for name, k in zip(names, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            if not factors:
                body = _fmt_rat(a)
            elif a == 1:
                body = "*".join(factors)
            else:
                body = _fmt_rat(a) + "*" + "*".join(factors)
            if idx == 0:
                parts.append("-" + body if neg else body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)


def _fmt_rat(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def coeff_mod(c, p):
    """n/d as n * d^-1 mod p."""
    c = _as_fraction(c)
    d = c.denominator % p
    if d == 0:
        raise DenominatorNotInvertible(p)
    return c.numerator * pow(d, -1, p) % p


def poly_arith(u, v, op):
    if u.arity != v.arity:
        raise ArityMismatch(f"arity {u.arity} vs {v.arity}")
    if op == "add":
        return u + v
    if op == "sub":
        return u - v
    if op == "mul":
        return u * v
    raise ValueError(f"unknown op {op!r}")


def partial_derivative(P, var):
    return P.derivative(var)


def evaluate(P, point):
    return P.evaluate(point)


# -- univariate algebra over Q ---------------------------------------------------
# Lists are ascending coefficient lists of Fractions without trailing zeros.


def _trim(a):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def u_divmod(a, b):
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lb = b[-1]
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        f = r[-1] / lb
        q[k] = f
        for i, bc in enumerate(b):
            r[k + i] -= f * bc
        r = _trim(r)
    return _trim(q), r


def u_monic(a):
    a = _trim(a)
    if not a:
        return a
    lc_ = a[-1]
    return [c / lc_ for c in a]


def u_gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        _, r = u_divmod(a, b)
        a, b = b, r
    return u_monic(a)


def u_deriv(a):
    return _trim([c * k for k, c in enumerate(a)][1:])


def u_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def u_eval(a, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def squarefree_part(P):
    """P / gcd(P, P'), made monic."""
    if P.is_zero():
        raise ZeroPolynomial("squarefree part of zero")
    var = P._univariate_var() if P.arity > 1 else 0
    a = P.coeffs(var)
    g = u_gcd(a, u_deriv(a))
    q, _ = u_divmod(a, g)
    return RatPoly.from_coeffs(u_monic(q), P.arity, var)


def interpolate_univariate(points):
    """Unique polynomial of degree < len(points) through (s, v) pairs."""
    pts = [(_as_fraction(s), _as_fraction(v)) for s, v in points]
    if not pts:
        raise ValueError("need at least one node")
    xs = [s for s, _ in pts]
    if len(set(xs)) != len(xs):
        raise DuplicateNode("interpolation nodes must be distinct")
    # Newton divided differences.
    n = len(pts)
    coef = [v for _, v in pts]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    acc = [coef[-1]]
    for i in range(n - 2, -1, -1):
        acc = u_mul(acc, [-xs[i], Fraction(1)])
        if acc:
            acc[0] += coef[i]
        else:
            acc = [coef[i]]
        acc = _trim(acc)
    return RatPoly.from_coeffs(acc, 1)


def exact_divide(a, b):
    """a / b for multivariate polynomials when b divides a, else None."""
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    eb, cb = b.leading_term()
    q = RatPoly.zero(a.arity)
    r = a
    while r:
        er, cr = r.leading_term()
        if any(x < y for x, y in zip(er, eb)):
            return None
        e = tuple(x - y for x, y in zip(er, eb))
        t = RatPoly._raw(a.arity, {e: cr / cb})
        q = q + t
        r = r - t * b
    return q


# -- rational functions -----------------------------------------------------------


class RatFunc:
    """num/den with den normalized to integer coefficients and positive lead."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        if den.is_zero():
            raise ZeroDenominator("rational function with zero denominator")
        if num.arity != den.arity:
            raise ArityMismatch("numerator and denominator arity differ")
        self.num = num
        self.den = den

    @property
    def arity(self):
        return self.num.arity

    def __repr__(self):
        return f"RatFunc({self.num.to_str()!r}, {self.den.to_str()!r})"

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def is_polynomial(self):
        return self.den.is_constant()

    def evaluate(self, point):
        d = self.den.evaluate(point)
        if not d:
            raise ZeroDivisionError("pole")
        return self.num.evaluate(point) / d

    __call__ = evaluate


def _normalize_pair(num, den):
    scale = lcm(num.denominator_lcm(), den.denominator_lcm())
    ints = [int(c * scale) for c in num.terms.values()] + [int(c * scale) for c in den.terms.values()]
    g = 0
    for v in ints:
        g = gcd(g, v)
    factor = Fraction(scale, g or 1)
    if den.lc() < 0:
        factor = -factor
    return num.scale(factor), den.scale(factor)


def reduce_fraction(num, den):
    """Normalized RatFunc; full gcd cancellation for univariate inputs."""
    if den.is_zero():
        raise ZeroDenominator("zero denominator")
    if num.arity != den.arity:
        raise ArityMismatch("numerator and denominator arity differ")
    if num.is_zero():
        return RatFunc(RatPoly.zero(num.arity), RatPoly.const(1, num.arity))
    vs = sorted(set(num.variables()) | set(den.variables()))
    if len(vs) == 1:
        var = vs[0]
        a, b = num.coeffs(var), den.coeffs(var)
        g = u_gcd(a, b)
        if len(g) > 1:
            a, _ = u_divmod(a, g)
            b, _ = u_divmod(b, g)
        num = RatPoly.from_coeffs(a, num.arity, var)
        den = RatPoly.from_coeffs(b, num.arity, var)
    num, den = _normalize_pair(num, den)
    return RatFunc(num, den)

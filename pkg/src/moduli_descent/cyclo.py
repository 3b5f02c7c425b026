"""Exact arithmetic in cyclotomic fields Q(zeta_m).

An element of Q(zeta_m) is stored as its reduced residue modulo the m-th
cyclotomic polynomial: a tuple of phi(m) rationals, lowest power first.
Rational entries are Python ``int`` when integral and ``Fraction`` otherwise,
so the common integer case stays on the fast path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

from .arith import divisors, totient, units_mod


class ConductorMismatch(ValueError):
    """Two operands live in cyclotomic fields of different conductor."""


def _norm(q):
    if type(q) is Fraction and q.denominator == 1:
        return q.numerator
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m):
    """Integer coefficients of Phi_m, lowest degree first.

    Computed by dividing x^m - 1 by Phi_d for every proper divisor d of m.
    The cache is an ``lru_cache``; concurrent first calls may compute the
    same (deterministic) value twice, which is harmless.
    """
    if m < 1:
        raise ValueError("conductor must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    for d in divisors(m)[:-1]:
        num = _exact_divide_int(num, cyclotomic_polynomial(d))
    return tuple(num)


def _exact_divide_int(num, den):
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1]  # den is monic
        q[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact cyclotomic division")
    return q


@lru_cache(maxsize=None)
def _reduction_table(m):
    """Row k is the reduced coefficient vector of x^k, for 0 <= k < 2*phi(m)."""
    n = totient(m)
    phi_m = cyclotomic_polynomial(m)
    rows = []
    cur = [0] * n
    cur[0] = 1
    for _ in range(max(2 * n, m)):
        rows.append(tuple(cur))
        # multiply by x, then fold x^n = -sum(phi_m[j] x^j)
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(n):
                cur[j] -= top * phi_m[j]
    return tuple(rows)


@lru_cache(maxsize=None)
def _zeta_powers(m):
    """Reduced vectors of zeta^k for 0 <= k < m."""
    table = _reduction_table(m)
    return table[:m]


class CyclotomicNumber:
    """An element of Q(zeta_m) in the power basis 1, z, ..., z^(phi(m)-1)."""

    __slots__ = ("m", "coeffs", "_hash")

    def __init__(self, m, coeffs):
        # trusted constructor: coeffs already reduced, length phi(m)
        self.m = m
        self.coeffs = coeffs
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def rational(cls, m, q):
        n = totient(m)
        q = _norm(Fraction(q)) if not isinstance(q, int) else q
        return cls(m, (q,) + (0,) * (n - 1))

    @classmethod
    def zero(cls, m):
        return cls.rational(m, 0)

    @classmethod
    def one(cls, m):
        return cls.rational(m, 1)

    @classmethod
    def zeta(cls, m, k=1):
        """zeta_m^k for any integer k."""
        return cls(m, _zeta_powers(m)[k % m])

    @classmethod
    def i(cls, m):
        if m % 4:
            raise ValueError(f"i is not available at conductor {m} (needs 4 | m)")
        return cls.zeta(m, m // 4)

    @classmethod
    def from_poly(cls, m, coeffs):
        """Reduce sum(coeffs[j] * z^j) modulo Phi_m; any length is accepted."""
        n = totient(m)
        out = [0] * n
        zp = _zeta_powers(m)
        for j, c in enumerate(coeffs):
            if not c:
                continue
            c = _norm(c) if isinstance(c, Fraction) else c
            row = zp[j % m]
            for t in range(n):
                if row[t]:
                    out[t] += c * row[t]
        return cls(m, tuple(_norm(x) for x in out))

    def _coerce(self, other):
        if isinstance(other, CyclotomicNumber):
            if other.m != self.m:
                raise ConductorMismatch(f"conductor {self.m} vs {other.m}")
            return other
        if isinstance(other, Rational):
            return CyclotomicNumber.rational(self.m, other)
        return NotImplemented

    # predicates -------------------------------------------------------
    def is_zero(self):
        return not any(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def is_rational(self):
        return not any(self.coeffs[1:])

    def rational_value(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.coeffs[0])

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash((self.m, self.coeffs))
        return self._hash

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CyclotomicNumber(
            self.m, tuple(_norm(a + b) for a, b in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.m, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CyclotomicNumber(
            self.m, tuple(_norm(a - b) for a, b in zip(self.coeffs, other.coeffs))
        )

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, Rational):
            if not other:
                return CyclotomicNumber.zero(self.m)
            return CyclotomicNumber(self.m, tuple(_norm(a * other) for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        n = len(a)
        if n == 1:
            return CyclotomicNumber(self.m, (_norm(a[0] * b[0]),))
        raw = [0] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        raw[i + j] += ai * bj
        out = raw[:n]
        table = _reduction_table(self.m)
        for k in range(n, 2 * n - 1):
            c = raw[k]
            if c:
                row = table[k]
                for t in range(n):
                    if row[t]:
                        out[t] += c * row[t]
        return CyclotomicNumber(self.m, tuple(_norm(x) for x in out))

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = CyclotomicNumber.one(self.m)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self):
        """Multiplicative inverse by the extended Euclidean algorithm against Phi_m."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_m)")
        if len(self.coeffs) == 1:
            return CyclotomicNumber(self.m, (_norm(Fraction(1) / self.coeffs[0]),))
        s = _poly_inverse_mod(list(self.coeffs), list(cyclotomic_polynomial(self.m)))
        return CyclotomicNumber.from_poly(self.m, s)

    def __truediv__(self, other):
        if isinstance(other, Rational):
            if not other:
                raise ZeroDivisionError("division by zero")
            inv = Fraction(1) / Fraction(other)
            return CyclotomicNumber(self.m, tuple(_norm(a * inv) for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    # structure --------------------------------------------------------
    def galois(self, k):
        """Image under zeta -> zeta^k (k coprime to m)."""
        zp = _zeta_powers(self.m)
        n = len(self.coeffs)
        out = [0] * n
        for j, c in enumerate(self.coeffs):
            if c:
                row = zp[(j * k) % self.m]
                for t in range(n):
                    if row[t]:
                        out[t] += c * row[t]
        return CyclotomicNumber(self.m, tuple(_norm(x) for x in out))

    def conj(self):
        return self.galois(self.m - 1) if self.m > 2 else self

    def lift(self, m2):
        """Image under zeta_m -> zeta_{m2}^(m2/m); requires m | m2."""
        if m2 % self.m:
            raise ConductorMismatch(f"cannot lift conductor {self.m} to {m2}")
        step = m2 // self.m
        raw = {}
        for j, c in enumerate(self.coeffs):
            if c:
                raw[j * step] = c
        if not raw:
            return CyclotomicNumber.zero(m2)
        poly = [0] * (max(raw) + 1)
        for j, c in raw.items():
            poly[j] = c
        return CyclotomicNumber.from_poly(m2, poly)

    def norm(self):
        """Product over the full Galois orbit; a rational number."""
        result = CyclotomicNumber.one(self.m)
        for k in units_mod(self.m):
            result = result * self.galois(k)
        return result.rational_value()

    # text -------------------------------------------------------------
    def render(self, var="z"):
        terms = []
        for j in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[j]
            if c:
                terms.append((j, c))
        if not terms:
            return "0"
        parts = []
        for idx, (j, c) in enumerate(terms):
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            if j == 0:
                body = str(a)
            else:
                mono = var if j == 1 else f"{var}^{j}"
                body = mono if a == 1 else f"{a}*{mono}"
            if idx == 0:
                parts.append(("-" if sign == "-" else "") + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def needs_parens(self):
        return sum(1 for c in self.coeffs if c) > 1

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"CyclotomicNumber({self.m}, {self.render()!r})"


def _poly_trim(p):
    while p and not p[-1]:
        p.pop()
    return p


def _poly_divmod(a, b):
    a = _poly_trim([Fraction(x) for x in a])
    b = _poly_trim([Fraction(x) for x in b])
    if not b:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for j, bj in enumerate(b):
            a[shift + j] -= c * bj
        _poly_trim(a)
    return _poly_trim(q), a


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _poly_trim(out)


def _poly_inverse_mod(a, mod):
    """s with s * a = 1 modulo the irreducible polynomial ``mod``."""
    r0, r1 = _poly_trim([Fraction(x) for x in mod]), _poly_trim([Fraction(x) for x in a])
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if not r1:
        raise ZeroDivisionError("element is not invertible")
    c = r1[0]
    return [x / c for x in s1]


@dataclass(frozen=True, order=True)
class GaloisElement:
    """The automorphism zeta_m -> zeta_m^k of Q(zeta_m)."""

    m: int
    k: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("conductor must be positive")
        lo_ok = (self.m == 1 and self.k == 1) or 1 <= self.k < self.m
        if not lo_ok or gcd(self.k, self.m) != 1:
            raise ValueError(f"k={self.k} is not a unit modulo {self.m}")

    @classmethod
    def identity(cls, m):
        return cls(m, 1)

    @classmethod
    def complex_conjugation(cls, m):
        return cls(m, m - 1 if m > 2 else 1)

    def compose(self, other):
        """self o other, i.e. zeta -> zeta^(k1*k2)."""
        if other.m != self.m:
            raise ConductorMismatch(f"conductor {self.m} vs {other.m}")
        k = (self.k * other.k) % self.m if self.m > 1 else 1
        return GaloisElement(self.m, k)

    __mul__ = compose

    def inverse(self):
        if self.m == 1:
            return self
        return GaloisElement(self.m, pow(self.k, -1, self.m))

    def is_identity(self):
        return self.k == 1

    def order(self):
        e, x = 1, self
        while not x.is_identity():
            x = x.compose(self)
            e += 1
        return e

    def __call__(self, a):
        return galois_apply(self, a)

    def __str__(self):
        return f"sigma_{self.k}"


def cyc_arith(a, b, op):
    """Binary field operation on equal-conductor elements."""
    if a.m != b.m:
        raise ConductorMismatch(f"conductor {a.m} vs {b.m}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def galois_apply(s, a):
    if s.m != a.m:
        raise ConductorMismatch(f"Galois element at conductor {s.m}, value at {a.m}")
    return a.galois(s.k)


def galois_group(m):
    """Gal(Q(zeta_m)/Q) as exponents coprime to m, ascending."""
    return [GaloisElement(m, k) for k in units_mod(m)]


def check_subgroup(H):
    """Raise ValueError unless H (nonempty) is closed under composition."""
    H = list(H)
    if not H:
        raise ValueError("empty set of Galois elements")
    keys = {(s.m, s.k) for s in H}
    for s in H:
        for t in H:
            u = s.compose(t)
            if (u.m, u.k) not in keys:
                raise ValueError(f"not closed: {s} o {t} = {u} is missing")
    return H


def fixed_field_test(a, H):
    """True iff every element of the subgroup H fixes a."""
    H = check_subgroup(H)
    return all(galois_apply(s, a) == a for s in H)


def is_rational(a):
    return fixed_field_test(a, galois_group(a.m))


def lift_conductor(a, m2):
    return a.lift(m2)


def subgroup_fixing(m, a):
    """Elements of Gal(Q(zeta_m)/Q) fixing a (always a subgroup)."""
    return [s for s in galois_group(m) if galois_apply(s, a) == a]


def quadratic_gauss_sum(p, m):
    """sum over a mod p of (a|p) zeta_p^a at conductor m, for an odd prime p | m.

    Its square is p when p = 1 mod 4 and -p when p = 3 mod 4.
    """
    if m % p:
        raise ConductorMismatch(f"{p} does not divide conductor {m}")
    step = m // p
    poly = [0] * m
    for a in range(1, p):
        poly[(a * step) % m] += 1 if pow(a, (p - 1) // 2, p) == 1 else -1
    return CyclotomicNumber.from_poly(m, poly)

"""Homogeneous forms over Q(zeta_m) and morphisms of P^N given by them.

Monomials are exponent tuples (e0, ..., eN).  Within a form every monomial has
the same degree, so graded-lex order is plain lexicographic order on the
tuples, with X0 largest.  Rendering lists terms in descending order.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from numbers import Rational

from .cyclo import CyclotomicNumber, ConductorMismatch, GaloisElement
from .solver import (
    Budget,
    PolyIdeal,
    PolyRing,
    buchberger,
    pure_power_leading_terms,
    _render_term,
)


def monomials(N, d):
    """All exponent vectors of total degree d in N+1 variables, descending."""
    out = []
    for combo in combinations_with_replacement(range(N + 1), d):
        e = [0] * (N + 1)
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


class HomogeneousForm:
    """A form of degree d in X0..XN; the zero form is allowed."""

    __slots__ = ("N", "d", "m", "terms")

    def __init__(self, N, d, m, terms=None):
        self.N, self.d, self.m = N, d, m
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != N + 1 or sum(e) != d or min(e) < 0:
                raise ValueError(f"monomial {e} does not have degree {d} in {N + 1} variables")
            if not isinstance(c, CyclotomicNumber):
                c = CyclotomicNumber.rational(m, c)
            elif c.m != m:
                raise ConductorMismatch(f"coefficient at conductor {c.m}, form at {m}")
            if c:
                clean[e] = c
        self.terms = clean

    @classmethod
    def _raw(cls, N, d, m, terms):
        f = cls.__new__(cls)
        f.N, f.d, f.m, f.terms = N, d, m, terms
        return f

    @classmethod
    def variable(cls, N, j, m):
        e = [0] * (N + 1)
        e[j] = 1
        return cls._raw(N, 1, m, {tuple(e): CyclotomicNumber.one(m)})

    @classmethod
    def constant(cls, N, m, c):
        c = c if isinstance(c, CyclotomicNumber) else CyclotomicNumber.rational(m, c)
        return cls._raw(N, 0, m, {(0,) * (N + 1): c} if c else {})

    # protocol ---------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, HomogeneousForm):
            return NotImplemented
        return (self.N, self.d, self.m, self.terms) == (other.N, other.d, other.m, other.terms)

    def __hash__(self):
        return hash((self.N, self.d, self.m, frozenset(self.terms.items())))

    def sorted_terms(self):
        return sorted(self.terms.items(), reverse=True)

    def coefficient(self, e):
        return self.terms.get(tuple(e), CyclotomicNumber.zero(self.m))

    def leading(self):
        """(monomial, coefficient) of the graded-lex largest term, or None."""
        if not self.terms:
            return None
        e = max(self.terms)
        return e, self.terms[e]

    def _check(self, other):
        if (self.N, self.m) != (other.N, other.m):
            raise ValueError("forms live in different spaces or fields")

    def __add__(self, other):
        if isinstance(other, HomogeneousForm):
            self._check(other)
            if other.d != self.d and self.terms and other.terms:
                raise ValueError("adding forms of different degree")
            d = self.d if self.terms else other.d
            out = dict(self.terms)
            for e, c in other.terms.items():
                v = out.get(e)
                v = c if v is None else v + c
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
            return HomogeneousForm._raw(self.N, d, self.m, out)
        return NotImplemented

    def __neg__(self):
        return HomogeneousForm._raw(self.N, self.d, self.m, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, HomogeneousForm):
            return self + (-other)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (Rational, CyclotomicNumber)):
            if isinstance(other, CyclotomicNumber) and other.m != self.m:
                raise ConductorMismatch(f"scalar at conductor {other.m}, form at {self.m}")
            if not other:
                return HomogeneousForm._raw(self.N, self.d, self.m, {})
            return HomogeneousForm._raw(
                self.N, self.d, self.m, {e: c * other for e, c in self.terms.items()}
            )
        if isinstance(other, HomogeneousForm):
            self._check(other)
            out = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    v = out.get(e)
                    out[e] = c1 * c2 if v is None else v + c1 * c2
            return HomogeneousForm._raw(
                self.N, self.d + other.d, self.m, {e: c for e, c in out.items() if c}
            )
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k):
        result = HomogeneousForm.constant(self.N, self.m, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # structure --------------------------------------------------------
    def substitute_forms(self, images):
        """F(G0, ..., GN) for forms Gj of a common degree."""
        if len(images) != self.N + 1:
            raise ValueError("need one image per variable")
        N2, m = images[0].N, images[0].m
        deg = images[0].d
        powers = [[HomogeneousForm.constant(N2, m, 1)] for _ in images]
        total = HomogeneousForm._raw(N2, self.d * deg, m, {})
        for e, c in self.sorted_terms():
            term = HomogeneousForm.constant(N2, m, c)
            for j, k in enumerate(e):
                if k:
                    pj = powers[j]
                    while len(pj) <= k:
                        pj.append(pj[-1] * images[j])
                    term = term * pj[k]
            total = total + term
        total.d = self.d * deg
        return total

    def galois(self, k):
        return HomogeneousForm._raw(
            self.N, self.d, self.m, {e: c.galois(k) for e, c in self.terms.items()}
        )

    def lift(self, m2):
        return HomogeneousForm._raw(
            self.N, self.d, m2, {e: c.lift(m2) for e, c in self.terms.items()}
        )

    def evaluate(self, point):
        total = CyclotomicNumber.zero(self.m)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = t * (x ** k)
            total = total + t
        return total

    def to_poly(self, ring):
        return ring.from_dict(self.terms)

    def render(self):
        if not self.terms:
            return "0"
        parts = []
        for idx, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                f"X{j}" if k == 1 else f"X{j}^{k}" for j, k in enumerate(e) if k
            )
            parts.append(_render_term(c, mono, first=idx == 0))
        return "".join(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"HomogeneousForm({self.render()!r})"


def linear_form(row, N, m):
    """sum_k row[k] * Xk."""
    terms = {}
    for k, c in enumerate(row):
        if not isinstance(c, CyclotomicNumber):
            c = CyclotomicNumber.rational(m, c)
        if c:
            e = [0] * (N + 1)
            e[k] = 1
            terms[tuple(e)] = c
    return HomogeneousForm._raw(N, 1, m, terms)


def _rows(M):
    return M.entries if hasattr(M, "entries") else M


def substitute_linear(F, M):
    """F(M X): each Xj becomes sum_k M[j][k] Xk."""
    rows = _rows(M)
    n = F.N + 1
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"substitution matrix must be {n}x{n}")
    images = [linear_form(r, F.N, F.m) for r in rows]
    out = F.substitute_forms(images)
    out.d = F.d
    return out


class HomogeneousMap:
    """A morphism candidate P^N -> P^N given by N+1 forms of degree d.

    The raw coordinates are kept as given; equality and hashing go through the
    canonical representative (first nonzero coefficient scaled to 1), so ``==``
    is equality in projective space.
    """

    __slots__ = ("coords", "N", "d", "m", "_canon")

    def __init__(self, coords):
        coords = tuple(coords)
        if not coords:
            raise ValueError("a map needs coordinates")
        N, m = coords[0].N, coords[0].m
        if len(coords) != N + 1:
            raise ValueError(f"P^{N} needs {N + 1} coordinates, got {len(coords)}")
        nonzero = [c for c in coords if c]
        if not nonzero:
            raise ValueError("all coordinates are zero")
        d = nonzero[0].d
        for c in coords:
            if (c.N, c.m) != (N, m):
                raise ValueError("coordinates live in different spaces or fields")
            if c and c.d != d:
                raise ValueError(f"coordinate degrees differ ({c.d} vs {d})")
        if d < 1:
            raise ValueError("degree must be at least 1")
        self.coords = tuple(
            c if c or c.d == d else HomogeneousForm._raw(N, d, m, {}) for c in coords
        )
        self.N, self.d, self.m = N, d, m
        self._canon = None

    @classmethod
    def identity(cls, N, m):
        return cls([HomogeneousForm.variable(N, j, m) for j in range(N + 1)])

    def first_coefficient(self):
        for f in self.coords:
            if f:
                return f.leading()[1]
        raise AssertionError("unreachable: nonzero map")

    def canonical(self):
        if self._canon is None:
            inv = self.first_coefficient().inverse()
            if inv == 1:
                self._canon = self
            else:
                m = HomogeneousMap([f * inv for f in self.coords])
                m._canon = m
                self._canon = m
        return self._canon

    def scaled(self, c):
        return HomogeneousMap([f * c for f in self.coords])

    def __eq__(self, other):
        if not isinstance(other, HomogeneousMap):
            return NotImplemented
        if (self.N, self.d, self.m) != (other.N, other.d, other.m):
            return False
        return self.canonical().coords == other.canonical().coords

    def __hash__(self):
        return hash(self.canonical().coords)

    def coefficients(self):
        """All coefficients, coordinate-major, descending within a coordinate."""
        return [c for f in self.coords for _, c in f.sorted_terms()]

    def galois(self, k):
        return HomogeneousMap([f.galois(k) for f in self.coords]).canonical()

    def lift(self, m2):
        return HomogeneousMap([f.lift(m2) for f in self.coords])

    def is_defined_over_q(self):
        return all(c.is_rational() for c in self.canonical().coefficients())

    def render(self):
        return "[" + ", ".join(f.render() for f in self.coords) + "]"

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"HomogeneousMap({self.render()!r})"


def compose_map(outer, inner):
    """outer o inner, canonicalized; degree multiplies."""
    if outer.N != inner.N:
        raise ValueError("dimension mismatch in composition")
    if outer.m != inner.m:
        raise ConductorMismatch(f"conductor {outer.m} vs {inner.m}")
    coords = [f.substitute_forms(list(inner.coords)) for f in outer.coords]
    for c in coords:
        c.d = outer.d * inner.d
    return HomogeneousMap(coords).canonical()


def proj_equal(phi, psi):
    return phi == psi


def galois_map(s, phi):
    if s.m != phi.m:
        raise ConductorMismatch(f"Galois element at conductor {s.m}, map at {phi.m}")
    return phi.galois(s.k)


def coordinate_ring(N, m):
    return PolyRing([f"X{j}" for j in range(N + 1)], "grlex", m)


def is_morphism(phi, budget=None):
    """True iff the coordinate forms have no common zero in P^N over Qbar.

    Decided from a graded Groebner basis of the coordinate ideal: the zero set
    is the origin alone iff every variable has a pure power among the leading
    monomials.  ResourceLimitExceeded propagates.
    """
    ring = coordinate_ring(phi.N, phi.m)
    G = buchberger(PolyIdeal(ring, [f.to_poly(ring) for f in phi.coords]), budget or Budget())
    return all(e is not None for e in pure_power_leading_terms(G))


def binary_resultant(F, G):
    """Sylvester resultant of two binary forms (an independent morphism test on P^1)."""
    from .linalg import det

    if F.N != 1 or G.N != 1:
        raise ValueError("resultant is only provided for binary forms")
    a, b = F.d, G.d
    fc = [F.coefficient((a - k, k)) for k in range(a + 1)]
    gc = [G.coefficient((b - k, k)) for k in range(b + 1)]
    size = a + b
    zero = CyclotomicNumber.zero(F.m)
    rows = []
    for r in range(b):
        rows.append([zero] * r + fc + [zero] * (size - a - 1 - r))
    for r in range(a):
        rows.append([zero] * r + gc + [zero] * (size - b - 1 - r))
    return det(rows)

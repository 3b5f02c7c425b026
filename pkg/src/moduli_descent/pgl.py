"""PGL_{N+1}(Q(zeta_m)) and its conjugation action on morphisms.

Matrices act on column vectors.  The conjugate of phi by f is
``f^-1 o phi o f``, computed as adj(f) * phi(f X) and compared projectively.
"""

from __future__ import annotations

from numbers import Rational

from .cyclo import CyclotomicNumber, ConductorMismatch
from .forms import HomogeneousMap, substitute_linear
from . import linalg


class SingularMatrix(ValueError):
    pass


def _cyc(x, m):
    if isinstance(x, CyclotomicNumber):
        if x.m != m:
            raise ConductorMismatch(f"entry at conductor {x.m}, matrix at {m}")
        return x
    if isinstance(x, Rational):
        return CyclotomicNumber.rational(m, x)
    raise TypeError(f"bad matrix entry {x!r}")


class ProjectiveMatrix:
    """An invertible (N+1)x(N+1) matrix up to a nonzero scalar.

    ``entries`` keeps the representative exactly as given (the lift matters
    for coboundary computations); ``==`` compares canonical forms.
    """

    __slots__ = ("entries", "N", "m", "_canon")

    def __init__(self, rows, m=None):
        rows = [list(r) for r in rows]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square and nonempty")
        if m is None:
            m = next((x.m for r in rows for x in r if isinstance(x, CyclotomicNumber)), 1)
        self.entries = tuple(tuple(_cyc(x, m) for x in r) for r in rows)
        self.N = n - 1
        self.m = m
        self._canon = None
        if not linalg.det([list(r) for r in self.entries]):
            raise SingularMatrix("matrix is not invertible")

    @classmethod
    def identity(cls, N, m=1):
        return cls([[1 if i == j else 0 for j in range(N + 1)] for i in range(N + 1)], m)

    @classmethod
    def _trusted(cls, entries, m):
        obj = cls.__new__(cls)
        obj.entries = tuple(tuple(r) for r in entries)
        obj.N = len(entries) - 1
        obj.m = m
        obj._canon = None
        return obj

    def first_entry(self):
        for r in self.entries:
            for x in r:
                if x:
                    return x
        raise AssertionError("unreachable: invertible matrix")

    def canonical(self):
        if self._canon is None:
            inv = self.first_entry().inverse()
            if inv == 1:
                self._canon = self
            else:
                c = ProjectiveMatrix._trusted([[x * inv for x in r] for r in self.entries], self.m)
                c._canon = c
                self._canon = c
        return self._canon

    def __eq__(self, other):
        if not isinstance(other, ProjectiveMatrix):
            return NotImplemented
        if (self.N, self.m) != (other.N, other.m):
            return False
        return self.canonical().entries == other.canonical().entries

    def __hash__(self):
        return hash(self.canonical().entries)

    def __matmul__(self, other):
        if other.m != self.m:
            raise ConductorMismatch(f"conductor {self.m} vs {other.m}")
        if other.N != self.N:
            raise ValueError("dimension mismatch")
        return ProjectiveMatrix._trusted(linalg.matmul(self.entries, other.entries), self.m)

    __mul__ = __matmul__

    def scaled(self, c):
        c = _cyc(c, self.m)
        if not c:
            raise SingularMatrix("zero scalar")
        return ProjectiveMatrix._trusted([[x * c for x in r] for r in self.entries], self.m)

    def det(self):
        return linalg.det([list(r) for r in self.entries])

    def adjugate(self):
        one = CyclotomicNumber.one(self.m)
        return ProjectiveMatrix._trusted(linalg.adjugate([list(r) for r in self.entries], one), self.m)

    def gl_inverse(self):
        """The honest matrix inverse of this representative (not projective)."""
        adj = self.adjugate()
        inv = self.det().inverse()
        return ProjectiveMatrix._trusted([[x * inv for x in r] for r in adj.entries], self.m)

    def galois(self, k):
        return ProjectiveMatrix._trusted([[x.galois(k) for x in r] for r in self.entries], self.m)

    def lift(self, m2):
        return ProjectiveMatrix._trusted([[x.lift(m2) for x in r] for r in self.entries], m2)

    def is_scalar(self):
        """Return c if this representative equals c * I, else None."""
        c = self.entries[0][0]
        for i, r in enumerate(self.entries):
            for j, x in enumerate(r):
                if x != (c if i == j else 0):
                    return None
        return c

    def is_identity(self):
        return self == ProjectiveMatrix.identity(self.N, self.m)

    def is_defined_over_q(self):
        return all(x.is_rational() for r in self.canonical().entries for x in r)

    def render(self):
        return "[" + ", ".join(
            "[" + ", ".join(x.render() for x in r) + "]" for r in self.entries
        ) + "]"

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"ProjectiveMatrix({self.render()!r})"


def pm_inverse(f):
    """Projective inverse via the adjugate, canonicalized."""
    return f.adjugate().canonical()


def galois_matrix(s, f):
    if s.m != f.m:
        raise ConductorMismatch(f"Galois element at conductor {s.m}, matrix at {f.m}")
    return f.galois(s.k).canonical()


def _check_compatible(phi, f):
    if phi.N != f.N:
        raise ValueError(f"map on P^{phi.N} vs matrix in PGL_{f.N + 1}")
    if phi.m != f.m:
        raise ConductorMismatch(f"map at conductor {phi.m}, matrix at {f.m}")


def conjugate(phi, f):
    """phi^f = f^-1 o phi o f, canonicalized."""
    _check_compatible(phi, f)
    pulled = [substitute_linear(F, f.entries) for F in phi.coords]
    adj = f.adjugate().entries
    coords = []
    for row in adj:
        acc = None
        for a, G in zip(row, pulled):
            if a:
                t = G * a
                acc = t if acc is None else acc + t
        if acc is None:
            acc = pulled[0] * 0
        acc.d = phi.d
        coords.append(acc)
    return HomogeneousMap(coords).canonical()


def is_stabilizer_element(phi, f):
    return conjugate(phi, f) == phi


def in_conjugating_set(phi, psi, f):
    if (phi.N, phi.d) != (psi.N, psi.d):
        raise ValueError("maps of different dimension or degree")
    return conjugate(phi, f) == psi

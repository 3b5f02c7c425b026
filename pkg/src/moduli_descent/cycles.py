"""Periodic points of self-maps of P^1: iterates and fixed-point forms.

The fixed-point form of phi^n is X1 * Phi_0 - X0 * Phi_1 where
Phi = phi^n; its roots with multiplicity are the points of period dividing n.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .criterion import degree_Dn
from .cyclo import CyclotomicNumber
from .forms import HomogeneousForm, HomogeneousMap, compose_map


def _check_p1(phi):
    if phi.N != 1:
        raise ValueError(f"periodic-point forms are only computed on P^1, got P^{phi.N}")


def iterate(phi, n, max_degree=None):
    _check_p1(phi)
    if n < 1:
        raise ValueError("n must be positive")
    if max_degree is not None and phi.d ** n > max_degree:
        raise OverflowError(f"degree {phi.d}^{n} exceeds the limit {max_degree}")
    out = phi
    for _ in range(n - 1):
        out = compose_map(phi, out)
    return out


def _canonical_form(F):
    c = F.leading()[1]
    return F if c == 1 else F * c.inverse()


@dataclass(frozen=True)
class FixedPointForm:
    n: int
    d: int
    form: HomogeneousForm
    source: str

    @property
    def degree(self):
        return self.form.d

    def is_rational(self):
        return all(c.is_rational() for _, c in self.form.sorted_terms())

    def render(self):
        return "\n".join([
            f"map: {self.source}",
            f"n={self.n} d={self.d} degree={self.degree} D_n={degree_Dn(self.d, 1, self.n)} "
            f"rational={str(self.is_rational()).lower()}",
            f"form: {self.form.render()}",
        ])


def fixed_point_form(phi, n=1):
    _check_p1(phi)
    if phi.d < 2:
        raise ValueError("fixed-point forms need degree at least 2")
    Phi = iterate(phi, n)
    X0 = HomogeneousForm.variable(1, 0, phi.m)
    X1 = HomogeneousForm.variable(1, 1, phi.m)
    F = X1 * Phi.coords[0] - X0 * Phi.coords[1]
    if not F:
        raise ValueError("fixed-point form vanishes identically")
    return FixedPointForm(n, phi.d, _canonical_form(F), phi.render())


def degree_consistency(phi, n):
    fp = fixed_point_form(phi, n)
    degrees = {sum(e) for e, _ in fp.form.sorted_terms()}
    return degrees == {degree_Dn(phi.d, 1, n)} and fp.degree == degree_Dn(phi.d, 1, n)


# binary forms ----------------------------------------------------------------

def binary_divmod(F, G):
    """(Q, R) with F = Q*G + R, dividing by the X0-leading term of G.

    For binary forms of the same field this is exact division whenever G | F.
    """
    if (F.N, G.N) != (1, 1) or F.m != G.m:
        raise ValueError("binary forms over one field expected")
    if not G:
        raise ZeroDivisionError("division by the zero form")
    lead_e, lead_c = G.leading()
    inv = lead_c.inverse()
    rem = dict(F.terms)
    quo = {}
    rest = {}
    while rem:
        e = max(rem)
        c = rem.pop(e)
        if e[0] >= lead_e[0] and e[1] >= lead_e[1]:
            q = (e[0] - lead_e[0], e[1] - lead_e[1])
            qc = c * inv
            quo[q] = quo.get(q, 0) + qc if q in quo else qc
            for ge, gc in G.terms.items():
                t = (q[0] + ge[0], q[1] + ge[1])
                if t == e:
                    continue
                v = rem.get(t)
                nv = -(qc * gc) if v is None else v - qc * gc
                if nv:
                    rem[t] = nv
                else:
                    rem.pop(t, None)
        else:
            rest[e] = c
    qd = F.d - G.d
    Q = HomogeneousForm(1, max(qd, 0), F.m, {e: c for e, c in quo.items() if c}) if quo else HomogeneousForm(1, max(qd, 0), F.m)
    R = HomogeneousForm(1, F.d, F.m, rest)
    return Q, R


def binary_divides(G, F):
    if G.d > F.d:
        return not F
    return not binary_divmod(F, G)[1]


def _linear(a, b, m):
    """The form b*X0 - a*X1 vanishing at (a : b)."""
    terms = {}
    if b:
        terms[(1, 0)] = CyclotomicNumber.rational(m, b)
    if a:
        terms[(0, 1)] = CyclotomicNumber.rational(m, -a)
    return HomogeneousForm(1, 1, m, terms)


def _multiplicity(F, L):
    k = 0
    while F and F.d >= 1:
        Q, R = binary_divmod(F, L)
        if R:
            break
        F = Q
        k += 1
    return k


def rational_roots(F, height=20):
    """Roots of a binary form in P^1(Q) of height <= ``height``, with multiplicity.

    Returns a list of (root, multiplicity) with root a Fraction or the string
    "inf" for (1 : 0), in a fixed order.
    """
    if F.N != 1 or not F:
        raise ValueError("a nonzero binary form is required")
    out = []
    m = F.m
    k = _multiplicity(F, _linear(1, 0, m))
    if k:
        out.append(("inf", k))
    seen = set()
    for b in range(1, height + 1):
        for a in range(-height, height + 1):
            if gcd(a, b) != 1:
                continue
            z = Fraction(a, b)
            if z in seen:
                continue
            seen.add(z)
            k = _multiplicity(F, _linear(a, b, m))
            if k:
                out.append((z, k))
    out.sort(key=lambda rk: (rk[0] != "inf", rk[0] if rk[0] != "inf" else 0))
    return out


def splits_over_q(F, height=20):
    """True iff height-bounded rational roots account for the whole degree."""
    return sum(k for _, k in rational_roots(F, height)) == F.d

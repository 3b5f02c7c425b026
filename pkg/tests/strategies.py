"""Hypothesis strategies for cyclotomic numbers, forms, maps and matrices."""

from fractions import Fraction

from hypothesis import strategies as st

from moduli_descent.arith import totient
from moduli_descent.cyclo import CyclotomicNumber, GaloisElement, galois_group
from moduli_descent.forms import HomogeneousForm, HomogeneousMap, monomials
from moduli_descent.pgl import ProjectiveMatrix, SingularMatrix

CONDUCTORS = (1, 3, 4, 5, 8, 12, 20)

small_fraction = st.builds(
    Fraction, st.integers(-6, 6), st.integers(1, 4)
)


@st.composite
def cyc(draw, m, nonzero=False, density=None):
    n = totient(m)
    coeffs = draw(st.lists(small_fraction, min_size=n, max_size=n))
    if density is not None:
        mask = draw(st.lists(st.booleans(), min_size=n, max_size=n))
        coeffs = [c if keep else 0 for c, keep in zip(coeffs, mask)]
    a = CyclotomicNumber.from_poly(m, coeffs)
    if nonzero and not a:
        a = CyclotomicNumber.one(m)
    return a


@st.composite
def cyc_with_conductor(draw, count=1, nonzero=False):
    m = draw(st.sampled_from(CONDUCTORS))
    vals = [draw(cyc(m, nonzero=nonzero)) for _ in range(count)]
    return (m, *vals)


def galois_element(m):
    return st.sampled_from(galois_group(m))


@st.composite
def form(draw, N, d, m, max_terms=3):
    mons = monomials(N, d)
    chosen = draw(st.lists(st.sampled_from(mons), min_size=1, max_size=max_terms, unique=True))
    terms = {}
    for e in chosen:
        c = draw(cyc(m, nonzero=True))
        terms[e] = c
    return HomogeneousForm(N, d, m, terms)


@st.composite
def hmap(draw, N=1, d=2, m=4, max_terms=2):
    coords = [draw(form(N, d, m, max_terms)) for _ in range(N + 1)]
    return HomogeneousMap(coords)


@st.composite
def pmatrix(draw, N=1, m=4, sparse=True):
    n = N + 1
    for _ in range(20):
        rows = [[draw(cyc(m, density=sparse or None)) for _ in range(n)] for _ in range(n)]
        try:
            return ProjectiveMatrix(rows, m)
        except SingularMatrix:
            continue
    # fall back to a random diagonal matrix, always invertible
    diag = [draw(cyc(m, nonzero=True)) for _ in range(n)]
    return ProjectiveMatrix(
        [[diag[i] if i == j else CyclotomicNumber.zero(m) for j in range(n)] for i in range(n)], m
    )


def scalar(m):
    return cyc(m, nonzero=True)


def complex_conj(m):
    return GaloisElement.complex_conjugation(m)

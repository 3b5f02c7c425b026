import pytest
from hypothesis import given

from moduli_descent import corpus
from moduli_descent.cyclo import CyclotomicNumber, GaloisElement
from moduli_descent.dsl import parse_matrix
from moduli_descent.forms import galois_map
from moduli_descent.linalg import matmul
from moduli_descent.pgl import (
    ProjectiveMatrix,
    SingularMatrix,
    conjugate,
    galois_matrix,
    in_conjugating_set,
    is_stabilizer_element,
    pm_inverse,
)

from strategies import cyc, galois_element, hmap, pmatrix


def is_projective_identity(rows, m):
    return ProjectiveMatrix._trusted(rows, m).is_identity()


# --- pm_inverse ------------------------------------------------------------------

def test_inverse_identity():
    I = ProjectiveMatrix.identity(2, 4)
    assert pm_inverse(I) == I


def test_inverse_swap_is_itself():
    S = corpus.swap()
    assert pm_inverse(S) == S


def test_inverse_f8():
    f = corpus.f8()
    inv = pm_inverse(f)
    expected = parse_matrix("[[0, z^7, 0], [-z^7, 0, 0], [0, 0, -z^6]]", 8)
    assert inv == expected
    assert inv == parse_matrix("[[0,1,0],[-1,0,0],[0,0,z^3]]", 8)
    # oracle: the product is a scalar matrix
    assert is_projective_identity(matmul(f.entries, inv.entries), 8)
    assert is_projective_identity(matmul(inv.entries, f.entries), 8)


def test_singular_matrix_rejected():
    with pytest.raises(SingularMatrix):
        ProjectiveMatrix([[1, 2], [2, 4]], 4)


def test_canonical_matrix():
    f = ProjectiveMatrix([[0, 2], [4, 6]], 1)
    assert f.canonical().entries[0][1] == 1
    assert f == ProjectiveMatrix([[0, 1], [2, 3]], 1)
    # entries keep the given lift
    assert f.entries[0][1] == 2


# --- conjugate -------------------------------------------------------------------

def test_conjugate_by_identity():
    phi = corpus.phi_trivial()
    assert conjugate(phi, ProjectiveMatrix.identity(2, 4)) == phi


def test_swap_conjugates_to_galois_conjugate():
    phi = corpus.phi_trivial()
    sigma = corpus.conj(4)
    assert conjugate(phi, corpus.swap()) == galois_map(sigma, phi)


def test_zeta6_swap_is_projectively_swap():
    Z = corpus.zeta6_swap()
    assert Z == corpus.swap(12)
    phi = corpus.phi_trivial(12)
    assert conjugate(phi, Z) == galois_map(GaloisElement(12, 11), phi)


@pytest.mark.parametrize("d", [1, 3, 5, 7])
def test_odd_degree_alpha_under_j(d):
    a = corpus.alpha(d)
    assert conjugate(a, corpus.j_matrix()) == galois_map(corpus.conj(4), a)


def test_conjugate_dimension_and_conductor_errors():
    with pytest.raises(ValueError):
        conjugate(corpus.alpha(3), corpus.swap())
    with pytest.raises(ValueError):
        conjugate(corpus.phi_trivial(), corpus.swap(8))


# --- stabilizer membership -------------------------------------------------------

def test_identity_stabilizes():
    for phi in (corpus.phi_trivial(), corpus.phi_c2(), corpus.alpha(3)):
        assert is_stabilizer_element(phi, ProjectiveMatrix.identity(phi.N, phi.m))


def test_g2_stabilizes_phi_c2():
    assert is_stabilizer_element(corpus.phi_c2(), corpus.g2())


def test_swap_does_not_stabilize_phi_trivial():
    phi = corpus.phi_trivial()
    assert not is_stabilizer_element(phi, corpus.swap())
    # oracle: the conjugate is the Galois conjugate, which differs from phi
    assert conjugate(phi, corpus.swap()) != phi


# --- conjugating set -------------------------------------------------------------

def test_twist_pair():
    assert in_conjugating_set(corpus.phi_twist(), corpus.psi_twist(), corpus.f_twist())


def test_conjugating_set_identity():
    phi = corpus.phi_twist()
    assert in_conjugating_set(phi, phi, ProjectiveMatrix.identity(1, 20))


def test_twist_matrix_not_in_stabilizer():
    phi = corpus.phi_twist()
    assert not in_conjugating_set(phi, phi, corpus.f_twist())


def test_conjugating_set_degree_mismatch():
    with pytest.raises(ValueError):
        in_conjugating_set(corpus.alpha(3), corpus.alpha(5), ProjectiveMatrix.identity(1, 4))


# --- properties ------------------------------------------------------------------

@given(hmap(1, 2, 4), pmatrix(1, 4), pmatrix(1, 4))
def test_action_law(phi, f, g):
    fg = f @ g
    assert conjugate(phi, fg) == conjugate(conjugate(phi, f), g)


@given(hmap(1, 2, 4), pmatrix(1, 4), cyc(4, nonzero=True))
def test_scalar_insensitivity(phi, f, c):
    assert conjugate(phi, f.scaled(c)) == conjugate(phi, f)


@given(hmap(1, 2, 8), pmatrix(1, 8), galois_element(8))
def test_galois_compatibility(phi, f, s):
    left = galois_map(s, conjugate(phi, f))
    right = conjugate(galois_map(s, phi), galois_matrix(s, f))
    assert left == right


@given(hmap(2, 2, 3, 2), pmatrix(2, 3), galois_element(3))
def test_galois_compatibility_in_p2(phi, f, s):
    assert galois_map(s, conjugate(phi, f)) == conjugate(galois_map(s, phi), galois_matrix(s, f))


@given(pmatrix(2, 4))
def test_inverse_is_two_sided(f):
    inv = pm_inverse(f)
    assert is_projective_identity(matmul(f.entries, inv.entries), 4)
    assert pm_inverse(inv) == f


@given(pmatrix(1, 20))
def test_twist_conjugators_form_a_stabilizer_coset(h):
    # 2z + 5/z is odd, so A_phi = {id, z -> -z} and Conj(phi_t, psi_t) = A_phi * f_t
    phi, psi, f = corpus.phi_twist(), corpus.psi_twist(), corpus.f_twist()
    assert in_conjugating_set(phi, psi, h @ f) == is_stabilizer_element(phi, h)


def test_twist_pair_has_exactly_two_conjugators():
    phi, psi, f = corpus.phi_twist(), corpus.psi_twist(), corpus.f_twist()
    neg = ProjectiveMatrix([[-1, 0], [0, 1]], 20)
    assert is_stabilizer_element(phi, neg)
    assert in_conjugating_set(phi, psi, neg @ f)
    assert neg @ f != f
    # z -> 1/z composed with f is the same coset element
    assert f @ ProjectiveMatrix([[0, 1], [1, 0]], 20) == neg @ f


@given(pmatrix(2, 4))
def test_conjugator_unique_for_trivial_stabilizer_map(h):
    phi = corpus.phi_trivial()
    psi = galois_map(corpus.conj(4), phi)
    assert in_conjugating_set(phi, psi, corpus.swap() @ h) == h.is_identity()


def test_near_miss_conjugators_rejected():
    # deterministic companions to the randomized uniqueness checks
    phi, psi, f = corpus.phi_twist(), corpus.psi_twist(), corpus.f_twist()
    for rows in ([[1, 1], [0, 1]], [[2, 0], [0, 1]], [[0, 5], [2, 0]]):
        assert not in_conjugating_set(phi, psi, ProjectiveMatrix(rows, 20) @ f)
    phi3 = corpus.phi_trivial()
    psi3 = galois_map(corpus.conj(4), phi3)
    i = CyclotomicNumber.i(4)
    for rows in ([[-1, 0, 0], [0, -1, 0], [0, 0, 1]], [[i, 0, 0], [0, 1, 0], [0, 0, 1]]):
        assert not in_conjugating_set(phi3, psi3, corpus.swap() @ ProjectiveMatrix(rows, 4))

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from moduli_descent import corpus
from moduli_descent.cycles import fixed_point_form, splits_over_q
from moduli_descent.cyclo import CyclotomicNumber, GaloisElement
from moduli_descent.dsl import parse_map
from moduli_descent.forms import galois_map
from moduli_descent.linalg import det
from moduli_descent.pgl import ProjectiveMatrix, conjugate, is_stabilizer_element, pm_inverse
from moduli_descent.descent import (
    CoboundaryStatus,
    FamilyTooLarge,
    GaloisCocycle,
    InvalidLift,
    MonomialFamily,
    TwistVerdict,
    check_coboundary_identity,
    coboundary_solve_quadratic,
    descend,
    fom_witness_search,
    galois_fixed,
    twist_check,
    verify_cocycle,
)

from strategies import hmap, pmatrix

i4 = CyclotomicNumber.i(4)


def cocycle(m, f):
    return GaloisCocycle(m, {GaloisElement.identity(m): ProjectiveMatrix.identity(f.N, m),
                             corpus.conj(m): f})


# --- cocycles --------------------------------------------------------------------

def test_trivial_cocycle_on_rational_map():
    phi = parse_map("[X0^2 + 3*X1^2, X0*X1]", 4)
    c = cocycle(4, ProjectiveMatrix.identity(1, 4))
    assert verify_cocycle(c, phi, [ProjectiveMatrix.identity(1, 4)])


def test_swap_cocycle_for_trivial_stabilizer_map():
    S = corpus.swap()
    c = cocycle(4, S)
    # S has rational entries and S^2 = I
    assert c.defect(corpus.conj(4), corpus.conj(4)).is_identity()
    assert verify_cocycle(c, corpus.phi_trivial(), [ProjectiveMatrix.identity(2, 4)])


def test_j_cocycle_for_alpha():
    J = corpus.j_matrix()
    assert (J @ J).is_scalar() == -1
    c = cocycle(4, J)
    assert verify_cocycle(c, corpus.alpha(3), [ProjectiveMatrix.identity(1, 4)])


def test_f8_cocycle_relative_to_c2():
    phi = corpus.phi_c2(8)
    f = corpus.f8()
    c = cocycle(8, f)
    stab = [ProjectiveMatrix.identity(2, 8), corpus.g2(8)]
    assert verify_cocycle(c, phi, stab)
    # the defect is the nontrivial stabilizer element, so a trivial stab fails
    assert c.defect(corpus.conj(8), corpus.conj(8)) == corpus.g2(8)
    assert not verify_cocycle(c, phi, stab[:1])


def test_cocycle_validation():
    with pytest.raises(ValueError):
        GaloisCocycle(4, {GaloisElement.identity(4): corpus.swap()})
    with pytest.raises(ValueError):
        GaloisCocycle(12, {GaloisElement.identity(12): ProjectiveMatrix.identity(2, 12),
                           GaloisElement(12, 5): corpus.swap(12), GaloisElement(12, 7): corpus.swap(12)})
    with pytest.raises(ValueError):
        verify_cocycle(cocycle(4, corpus.swap()), corpus.phi_trivial(), [corpus.swap()])


def test_wrong_cocycle_rejected():
    c = cocycle(4, ProjectiveMatrix.identity(2, 4))
    assert not verify_cocycle(c, corpus.phi_trivial(), [ProjectiveMatrix.identity(2, 4)])


# --- witness search --------------------------------------------------------------

def test_search_finds_swap():
    f = fom_witness_search(corpus.phi_trivial(12), corpus.conj(12), MonomialFamily(roots=12))
    assert f == corpus.swap(12)
    assert f == corpus.zeta6_swap()


def test_search_finds_f8():
    f = fom_witness_search(corpus.phi_c2(8), corpus.conj(8), MonomialFamily(roots=8))
    assert f is not None
    # any witness differs from f_8 by a stabilizer element
    assert conjugate(corpus.phi_c2(8), f) == galois_map(corpus.conj(8), corpus.phi_c2(8))
    d = f @ pm_inverse(corpus.f8())
    assert d.is_identity() or d == corpus.g2(8)


@pytest.mark.parametrize("d", [1, 3, 5])
def test_search_finds_j(d):
    f = fom_witness_search(corpus.alpha(d), corpus.conj(4), MonomialFamily(roots=4))
    assert f == corpus.j_matrix()


def test_search_explicit_list_and_miss():
    phi = corpus.phi_trivial()
    assert fom_witness_search(phi, corpus.conj(4), [ProjectiveMatrix.identity(2, 4)]) is None
    assert fom_witness_search(phi, corpus.conj(4), [corpus.swap()]) == corpus.swap()


def test_search_family_too_large():
    with pytest.raises(FamilyTooLarge):
        fom_witness_search(corpus.phi_trivial(12), corpus.conj(12), MonomialFamily(roots=12, max_candidates=10))


def test_family_needs_roots_dividing_conductor():
    with pytest.raises(ValueError):
        fom_witness_search(corpus.phi_trivial(), corpus.conj(4), MonomialFamily(roots=8))


# --- coboundary solving ----------------------------------------------------------

def test_restricted_mode_on_zeta6_lift():
    r = coboundary_solve_quadratic(corpus.zeta6_swap(), mode="restricted", subfield=4)
    assert r.mu == 1
    assert r.status is CoboundaryStatus.NO_SOLUTION
    assert not r.det_polynomial
    assert "identically" in r.reason


def test_restricted_mode_on_i_swap_has_third_column_family():
    F = corpus.swap().scaled(i4)
    r = coboundary_solve_quadratic(F, mode="restricted", subfield=4)
    assert r.dimension == 9
    # g^sigma = g * (i S) for every basis element
    for B in r.solution_space:
        assert check_coboundary_identity(ProjectiveMatrix._trusted(B, 4), F, 1, corpus.conj(4))


def test_full_mode_alpha_norm_obstruction():
    r = coboundary_solve_quadratic(corpus.j_matrix())
    assert r.c == -1
    assert r.status is CoboundaryStatus.NO_SOLUTION
    assert "norm obstruction" in r.reason


def test_full_mode_trivial_stabilizer_witness():
    r = coboundary_solve_quadratic(corpus.swap())
    assert r.c == 1 and r.mu == 1
    assert r.status is CoboundaryStatus.WITNESS
    g = r.witness
    assert g.det()
    assert check_coboundary_identity(g, corpus.swap(), r.mu, corpus.conj(4))
    psi, rational = descend(corpus.phi_trivial(), g)
    assert rational and galois_fixed(psi)


def test_full_mode_on_zeta6_lift():
    r = coboundary_solve_quadratic(corpus.zeta6_swap())
    assert r.c == 1
    assert r.status is CoboundaryStatus.WITNESS
    psi, rational = descend(corpus.phi_trivial(12), r.witness)
    # only conjugation is imposed, so psi is fixed by it but may sit in Q(sqrt 3)
    sigma = corpus.conj(12)
    assert galois_map(sigma, psi) == psi
    fixed = [k for k in (1, 5, 7, 11) if galois_map(GaloisElement(12, k), psi) == psi]
    assert fixed == [1, 11] and not rational


def test_candidate_witness_identity():
    g = corpus.descent_candidate()
    S = corpus.swap()
    # oracle: entrywise check of g^sigma = i * g * S and det(g) = -2(1 - i)
    assert check_coboundary_identity(g, S, i4, corpus.conj(4))
    assert g.det() == -2 * (1 - i4)
    assert det([list(r) for r in g.entries]) == 2 * CyclotomicNumber.zeta(4) - 2


def test_invalid_lift():
    with pytest.raises(InvalidLift):
        coboundary_solve_quadratic(corpus.f8())


def test_non_rational_c_is_inconclusive():
    sqrt3 = CyclotomicNumber.zeta(12) + CyclotomicNumber.zeta(12, 11)
    F = ProjectiveMatrix([[0, 1], [sqrt3, 0]], 12)
    r = coboundary_solve_quadratic(F)
    assert r.c == sqrt3
    assert r.status is CoboundaryStatus.INCONCLUSIVE


def test_non_square_c_is_inconclusive():
    F = ProjectiveMatrix([[0, 1], [2, 0]], 4)
    r = coboundary_solve_quadratic(F)
    assert r.c == 2
    assert r.status is CoboundaryStatus.INCONCLUSIVE


def test_rational_square_c_rescales():
    F = corpus.swap().scaled(3)
    r = coboundary_solve_quadratic(F)
    assert r.c == 9 and r.mu == Fraction(1, 3)
    assert r.status is CoboundaryStatus.WITNESS
    assert check_coboundary_identity(r.witness, F, r.mu, corpus.conj(4))


def test_report_render_is_deterministic():
    a = coboundary_solve_quadratic(corpus.swap()).render()
    b = coboundary_solve_quadratic(corpus.swap()).render()
    assert a == b
    assert "solution space dimension: 9" in a
    assert a.splitlines()[0] == "mode: full"


# --- descend and twists ----------------------------------------------------------

def test_descend_identity():
    phi = corpus.phi_trivial()
    assert descend(phi, ProjectiveMatrix.identity(2, 4)) == (phi, False)
    psi = corpus.phi_twist()
    assert descend(psi, ProjectiveMatrix.identity(1, 20)) == (psi, True)


def test_descend_twist_recovers_psi():
    psi, rational = descend(corpus.phi_twist(), pm_inverse(corpus.f_twist()))
    assert psi == corpus.psi_twist()
    assert rational


def test_descend_candidate_expansion():
    psi, rational = descend(corpus.phi_trivial(), corpus.descent_candidate())
    assert rational
    assert all(galois_map(s, psi) == psi for s in (GaloisElement(4, 1), GaloisElement(4, 3)))
    oracle = parse_map("[(1+i)*(X0 - i*X1 + (1-i)*X2)^4 + (1-i)*(X0 + i*X1 + (1+i)*X2)^4, 0, 0]", 4).coords[0]
    lead = psi.coords[0].leading()[1]
    assert psi.coords[0] * oracle.leading()[1] == oracle * lead


def test_twist_check_examples():
    phi, psi, f = corpus.phi_twist(), corpus.psi_twist(), corpus.f_twist()
    assert twist_check(phi, psi, f) is TwistVerdict.TWIST_ONLY
    assert twist_check(phi, phi, ProjectiveMatrix.identity(1, 20)) is TwistVerdict.K_EQUIVALENT
    assert twist_check(phi, psi, ProjectiveMatrix.identity(1, 20)) is TwistVerdict.NOT_EQUIVALENT


def test_twist_fixed_points_differ():
    F_psi = fixed_point_form(parse_map(corpus.PSI_TWIST, 1))
    F_phi = fixed_point_form(parse_map(corpus.PHI_TWIST, 1))
    assert F_psi.degree == F_phi.degree == 3
    assert splits_over_q(F_psi.form)
    assert not splits_over_q(F_phi.form)


# --- properties ------------------------------------------------------------------

I2 = ProjectiveMatrix.identity(2, 4)


@given(pmatrix(2, 4))
def test_defect_invariant_under_stabilizer(h):
    phi = corpus.phi_trivial()
    c = cocycle(4, corpus.swap()).scaled_left(h)
    assert verify_cocycle(c, phi, [I2]) == is_stabilizer_element(phi, h)


@given(st.sampled_from([0, 1]))
def test_defect_invariant_c2(k):
    phi = corpus.phi_c2(8)
    stab = [ProjectiveMatrix.identity(2, 8), corpus.g2(8)]
    c = cocycle(8, corpus.f8()).scaled_left(stab[k])
    assert verify_cocycle(c, phi, stab)


@st.composite
def coboundary_data(draw):
    """A rational binary map phi0, a random g, and phi = phi0^g with its cocycle."""
    phi0 = draw(hmap(1, 2, 1, 2)).lift(4)
    g = draw(pmatrix(1, 4, sparse=False))
    r = draw(st.sampled_from([Fraction(1), Fraction(2), Fraction(-1, 3), i4]))
    # the honest inverse keeps c a rational square; the adjugate would give c = N(det g)
    F = (g.gl_inverse() @ g.galois(3)).scaled(r)
    return phi0, g, F


@given(coboundary_data())
def test_witness_consistency_and_descent(data):
    phi0, g, F = data
    phi = conjugate(phi0, g)
    assert conjugate(phi, F) == galois_map(corpus.conj(4), phi)
    r = coboundary_solve_quadratic(F)
    assert r.status is CoboundaryStatus.WITNESS
    mu, c, sigma = r.mu, r.c, corpus.conj(4)
    assert mu.galois(sigma.k) * mu * c == 1
    assert check_coboundary_identity(r.witness, F, mu, sigma)
    psi, rational = descend(phi, r.witness)
    assert rational
    assert galois_fixed(psi)


@given(coboundary_data())
def test_restricted_solutions_solve_full_problem(data):
    _, _, F = data
    full = coboundary_solve_quadratic(F)
    restricted = coboundary_solve_quadratic(F, mode="restricted", subfield=4)
    for B in restricted.solution_space:
        assert check_coboundary_identity(ProjectiveMatrix._trusted(B, 4), F, full.mu, corpus.conj(4))


def test_restricted_inside_full_on_corpus():
    for F in (corpus.swap(), corpus.swap().scaled(i4)):
        full = coboundary_solve_quadratic(F)
        restricted = coboundary_solve_quadratic(F, mode="restricted", subfield=4)
        for B in restricted.solution_space:
            assert check_coboundary_identity(ProjectiveMatrix._trusted(B, 4), F, full.mu, corpus.conj(4))

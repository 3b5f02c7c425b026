"""The worked examples: maps, matrices and ansatz patterns used by the audit."""

from .cyclo import CyclotomicNumber, GaloisElement, quadratic_gauss_sum
from .dsl import parse_ansatz, parse_map, parse_matrix
from .pgl import ProjectiveMatrix

# Example 1: degree-4 map of P^2 with trivial stabilizer
PHI_TRIVIAL = "[(X0 - i*X2)^4, (X1 + i*X2)^4, X2^4]"
SWAP = "[[0,1,0],[1,0,0],[0,0,1]]"
TRIVIAL_ANSATZ = "[[a0,a1,a2],[b0,b1,b2],[0,0,1]]"
# z is zeta_12 below, so zeta_6 = z^2
ZETA6_SWAP = "[[0,z^2,0],[z^2,0,0],[0,0,z^2]]"
DESCENT_CANDIDATE = "[[1,-i,0],[i,-1,0],[0,0,1-i]]"

# Example 2: degree-3 map of P^2 with stabilizer of order two
PHI_C2 = "[i*(X0 - X1)^3, (X0 + X1)^3, X2^3]"
G2 = "[[-1,0,0],[0,-1,0],[0,0,1]]"
# z is zeta_8 below
F8 = "[[0,-z,0],[z,0,0],[0,0,-z^2]]"
C2_ANSATZ = "[[a0,a1,a2],[b0,b1,b2],[0,0,1]]"

J = "[[0,-1],[1,0]]"

PHI_TWIST = "[2*X0^2 + 5*X1^2, X0*X1]"
PSI_TWIST = "[X0^2 - 3*X0*X1, 3*X0*X1 - X1^2]"


def phi_trivial(m=4):
    return parse_map(PHI_TRIVIAL, m)


def phi_c2(m=4, d=3):
    return parse_map(f"[i*(X0 - X1)^{d}, (X0 + X1)^{d}, X2^{d}]", m)


def alpha(d=3, m=4):
    """The odd-degree binary map [i(X0 - X1)^d, (X0 + X1)^d]."""
    return parse_map(f"[i*(X0 - X1)^{d}, (X0 + X1)^{d}]", m)


def swap(m=4):
    return parse_matrix(SWAP, m)


def zeta6_swap():
    return parse_matrix(ZETA6_SWAP, 12)


def descent_candidate():
    return parse_matrix(DESCENT_CANDIDATE, 4)


def g2(m=4):
    return parse_matrix(G2, m)


def f8():
    return parse_matrix(F8, 8)


def j_matrix(m=4):
    return parse_matrix(J, m)


def trivial_ansatz(m=4):
    return parse_ansatz(TRIVIAL_ANSATZ, m)


def c2_ansatz(m=4):
    return parse_ansatz(C2_ANSATZ, m)


def i_sqrt5(m=20):
    """i*sqrt(5) = zeta_4 * (zeta_5 - zeta_5^2 - zeta_5^3 + zeta_5^4) at conductor m."""
    return CyclotomicNumber.i(m) * quadratic_gauss_sum(5, m)


def phi_twist(m=20):
    return parse_map(PHI_TWIST, m)


def psi_twist(m=20):
    return parse_map(PSI_TWIST, m)


def f_twist(m=20):
    r = i_sqrt5(m)
    return ProjectiveMatrix([[r, -r], [1, 1]], m)


def conj(m):
    return GaloisElement.complex_conjugation(m)

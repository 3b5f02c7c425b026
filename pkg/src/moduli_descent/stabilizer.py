"""Stabilizer systems phi o f = lam * f o phi over a user-supplied matrix ansatz.

Certification is always *within the ansatz*: the caller asserts the shape of
stabilizer elements, and this module decides whether anything beyond the
claimed elements solves the system of that shape.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .cyclo import CyclotomicNumber, ConductorMismatch
from .linalg import det_leibniz
from .pgl import ProjectiveMatrix, SingularMatrix, is_stabilizer_element, pm_inverse
from .solver import (
    Budget,
    PolyIdeal,
    PolyRing,
    ResourceLimitExceeded,
    buchberger,
    intersect_ideals,
    normal_form,
)


class Unknown(str):
    """Name of an unknown ansatz entry."""


class MatrixAnsatz:
    """An (N+1)x(N+1) pattern of Unknown names and CyclotomicNumber constants."""

    def __init__(self, rows, m):
        rows = [list(r) for r in rows]
        n = len(rows)
        if n < 2 or any(len(r) != n for r in rows):
            raise ValueError("ansatz must be square, at least 2x2")
        cells = []
        names = []
        for r in rows:
            out = []
            for c in r:
                if isinstance(c, Unknown):
                    names.append(str(c))
                    out.append(c)
                else:
                    if not isinstance(c, CyclotomicNumber):
                        c = CyclotomicNumber.rational(m, c)
                    elif c.m != m:
                        raise ConductorMismatch(f"constant at conductor {c.m}, ansatz at {m}")
                    out.append(c)
            cells.append(tuple(out))
        if len(set(names)) != len(names):
            raise ValueError("ansatz unknown names must be distinct")
        self.cells = tuple(cells)
        self.N = n - 1
        self.m = m
        self.unknowns = tuple(names)

    def pins_scale(self):
        return any(not isinstance(c, Unknown) and c for r in self.cells for c in r)

    def parameters_of(self, M):
        """Values of the unknowns for the representative of M matching the constants.

        Raises ValueError when no scalar multiple of M fits the pattern.  For a
        scale-free ansatz the canonical representative is used.
        """
        if M.N != self.N or M.m != self.m:
            raise ValueError("matrix and ansatz live in different spaces")
        entries = M.canonical().entries
        scale = CyclotomicNumber.one(self.m)
        if self.pins_scale():
            i, j, c = next(
                (i, j, c) for i, r in enumerate(self.cells) for j, c in enumerate(r)
                if not isinstance(c, Unknown) and c
            )
            if not entries[i][j]:
                raise ValueError(f"{M} does not fit the ansatz")
            scale = c / entries[i][j]
        values = {}
        for i, r in enumerate(self.cells):
            for j, c in enumerate(r):
                x = entries[i][j] * scale
                if isinstance(c, Unknown):
                    values[str(c)] = x
                elif x != c:
                    raise ValueError(f"{M} does not fit the ansatz")
        return values

    def instantiate(self, values):
        rows = [[values[str(c)] if isinstance(c, Unknown) else c for c in r] for r in self.cells]
        return ProjectiveMatrix(rows, self.m)

    def render(self):
        return "[" + ", ".join(
            "[" + ", ".join(str(c) if isinstance(c, Unknown) else c.render() for c in r) + "]"
            for r in self.cells
        ) + "]"


def _fresh(name, taken):
    while name in taken:
        name += "_"
    return name


def stabilizer_system(phi, A):
    """Ideal whose zeros are the (f, lam) with phi(f X) = lam * f(phi(X)), f invertible.

    Variables: the ansatz unknowns, then ``lam`` and the Rabinowitsch
    variable ``t`` (renamed with trailing underscores on collision).
    """
    if phi.N != A.N:
        raise ValueError(f"map on P^{phi.N} vs ansatz of size {A.N + 1}")
    if phi.m != A.m:
        raise ConductorMismatch(f"map at conductor {phi.m}, ansatz at {A.m}")
    N, m = phi.N, phi.m
    taken = set(A.unknowns)
    lam_name = _fresh("lam", taken)
    t_name = _fresh("t", taken | {lam_name})
    xs = [_fresh(f"X{j}", taken | {lam_name, t_name}) for j in range(N + 1)]
    param_names = list(A.unknowns) + [lam_name, t_name]
    big = PolyRing(param_names + xs, "grlex", m)
    ring = PolyRing(param_names, "grlex", m)
    X = [big.gen(x) for x in xs]
    f = [[big.gen(str(c)) if isinstance(c, Unknown) else big.const(c) for c in r] for r in A.cells]
    lam = big.gen(lam_name)

    fX = [sum((f[j][k] * X[k] for k in range(N + 1)), big.zero()) for j in range(N + 1)]
    phiX = [F.to_poly(PolyRing(xs, "grlex", m)).to_ring(big) for F in phi.coords]

    pulled = []
    powers = [[big.one()] for _ in range(N + 1)]
    for F in phi.coords:
        acc = big.zero()
        for e, c in F.sorted_terms():
            term = big.const(c)
            for j, k in enumerate(e):
                if k:
                    while len(powers[j]) <= k:
                        powers[j].append(powers[j][-1] * fX[j])
                    term = term * powers[j][k]
            acc = acc + term
        pulled.append(acc)

    npar = len(param_names)
    gens_by_key = {}
    for i in range(N + 1):
        pushed = sum((f[i][j] * phiX[j] for j in range(N + 1)), big.zero())
        diff = pulled[i] - lam * pushed
        for key, c in diff.terms.items():
            exps = big.decode(key)
            xpart, ppart = exps[npar:], exps[:npar]
            gens_by_key.setdefault((i, xpart), {})[ppart] = c
    gens = [ring.from_dict(d) for _, d in sorted(gens_by_key.items(), key=lambda kv: (kv[0][0], tuple(-x for x in kv[0][1])))]

    fr = [[ring.gen(str(c)) if isinstance(c, Unknown) else ring.const(c) for c in r] for r in A.cells]
    det = det_leibniz(fr, ring.one())
    gens.append(ring.gen(t_name) * ring.gen(lam_name) * det - 1)
    return PolyIdeal(ring, gens)


class Status(str, Enum):
    ONLY_CLAIMED = "OnlyClaimed"
    EXTRA_SOLUTIONS_POSSIBLE = "ExtraSolutionsPossible"
    INCONSISTENT = "Inconsistent"
    RESOURCE_LIMIT = "ResourceLimit"


@dataclass
class StabilizerVerdict:
    status: Status
    claimed: list
    basis: object = None  # GroebnerBasis when computed
    solutions: list = field(default_factory=list)
    pairs: int = 0
    message: str = ""

    def render(self):
        lines = [f"status: {self.status.value}"]
        if self.message:
            lines.append(f"note: {self.message}")
        lines.append(f"claimed ({len(self.claimed)}):")
        lines += [f"  {M.canonical().render()}" for M in self.claimed]
        if self.status is Status.ONLY_CLAIMED:
            lines.append(f"solutions within ansatz ({len(self.solutions)}):")
            lines += [f"  {M.canonical().render()}" for M in self.solutions]
        if self.basis is not None:
            lines.append(f"basis size: {len(self.basis)}")
        lines.append(f"pairs processed: {self.pairs}")
        return "\n".join(lines)


def claimed_point_ideal(A, claimed, budget=None):
    """Vanishing ideal, in the ring of ansatz unknowns, of the claimed matrices.

    With a scale-pinning constant each claim is a point; for a scale-free
    ansatz each claim is the line through its canonical representative.
    """
    ring = PolyRing(A.unknowns, "grlex", A.m)
    gens = ring.gens()
    ideals = []
    for M in claimed:
        vals = [A.parameters_of(M)[n] for n in A.unknowns]
        if A.pins_scale():
            ideals.append(PolyIdeal(ring, [g - v for g, v in zip(gens, vals)]))
        else:
            n = len(gens)
            ideals.append(PolyIdeal(ring, [
                gens[a] * vals[b] - gens[b] * vals[a] for a in range(n) for b in range(a + 1, n)
            ]))
    return intersect_ideals(ideals, budget)


def _closure_problem(claimed):
    for a in claimed:
        inv = pm_inverse(a)
        if not any(inv == c for c in claimed):
            return f"inverse of {a.canonical()} is not claimed"
        for b in claimed:
            p = a @ b
            if not any(p == c for c in claimed):
                return f"product {a.canonical()} * {b.canonical()} is not claimed"
    return None


def certify_group(phi, A, claimed, budget=None):
    """Check that ``claimed`` is exactly the set of stabilizer elements fitting A."""
    budget = budget or Budget()
    claimed = list(claimed)
    for M in claimed:
        A.parameters_of(M)  # precondition: raises if M does not fit
    for M in claimed:
        if not is_stabilizer_element(phi, M):
            return StabilizerVerdict(Status.INCONSISTENT, claimed,
                                     message=f"{M.canonical()} does not stabilize the map")
    problem = _closure_problem(claimed)
    if problem:
        return StabilizerVerdict(Status.INCONSISTENT, claimed, message=problem)
    system = stabilizer_system(phi, A)
    try:
        G = buchberger(system, budget)
        vanishing = claimed_point_ideal(A, claimed, budget)
    except ResourceLimitExceeded as exc:
        return StabilizerVerdict(Status.RESOURCE_LIMIT, claimed, pairs=exc.pairs, message=str(exc))
    for h in vanishing.generators:
        if normal_form(h.to_ring(G.ring), G):
            return StabilizerVerdict(Status.EXTRA_SOLUTIONS_POSSIBLE, claimed, G, pairs=G.pairs_processed,
                                     message="claimed points do not exhaust the solution set")
    return StabilizerVerdict(Status.ONLY_CLAIMED, claimed, G, solutions=list(claimed),
                             pairs=G.pairs_processed)


def read_point(G, A):
    """If G is {u - c for each unknown} plus lam/t, return the matrix; else None."""
    values = {}
    for g in G.basis:
        if g.total_degree() != 1:
            return None
        vs = g.variables()
        if len(vs) != 1:
            return None
        name = vs[0]
        lin = g.ring.gen(name)
        values[name] = -(g - lin).lc() if (g - lin) else CyclotomicNumber.zero(A.m)
    if not all(n in values for n in A.unknowns):
        return None
    try:
        return A.instantiate(values)
    except SingularMatrix:
        return None

"""Buchberger's algorithm over Q(zeta_m).

Monomials are stored in an order-specific encoding so that plain tuple
comparison *is* the monomial order and elementwise addition/subtraction is
monomial multiplication/division:

* grlex:        (deg, e0, ..., en)
* lex:          (e0, ..., en)
* block(k):     (deg(e[:k]), e0..e(k-1), deg(e[k:]), ek..en), each block grlex

Only lcm needs to decode.
"""

from __future__ import annotations

import operator
import time
from dataclasses import dataclass, field
from numbers import Rational

from .cyclo import CyclotomicNumber, ConductorMismatch

_add = operator.add
_sub = operator.sub
_le = operator.le


class ResourceLimitExceeded(RuntimeError):
    """A Groebner computation hit its budget; no partial basis is returned."""

    def __init__(self, reason, pairs=0):
        super().__init__(f"resource limit exceeded: {reason} (after {pairs} pairs)")
        self.reason = reason
        self.pairs = pairs


@dataclass(frozen=True)
class Budget:
    max_pairs: int = 50_000
    max_degree: int = 64
    timeout_secs: float = 300.0


class PolyRing:
    """Polynomial ring Q(zeta_m)[names] with a fixed monomial order."""

    ORDERS = ("grlex", "lex", "block")

    def __init__(self, names, order="grlex", m=1, split=None):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        if order not in self.ORDERS:
            raise ValueError(f"unknown monomial order {order!r}")
        if order == "block":
            if split is None or not 0 < split < len(names):
                raise ValueError("block order needs 0 < split < number of variables")
        else:
            split = None
        self.names = names
        self.order = order
        self.split = split
        self.m = m
        self.nvars = len(names)
        self._index = {n: i for i, n in enumerate(names)}

    def __eq__(self, other):
        return isinstance(other, PolyRing) and (
            self.names, self.order, self.split, self.m
        ) == (other.names, other.order, other.split, other.m)

    def __hash__(self):
        return hash((self.names, self.order, self.split, self.m))

    def __repr__(self):
        extra = f", split={self.split}" if self.split else ""
        return f"PolyRing({list(self.names)}, {self.order!r}, m={self.m}{extra})"

    def index(self, name):
        return self._index[name]

    # monomial encoding ------------------------------------------------
    def encode(self, exps):
        exps = tuple(exps)
        if self.order == "grlex":
            return (sum(exps),) + exps
        if self.order == "lex":
            return exps
        k = self.split
        return (sum(exps[:k]),) + exps[:k] + (sum(exps[k:]),) + exps[k:]

    def decode(self, key):
        if self.order == "grlex":
            return key[1:]
        if self.order == "lex":
            return key
        k = self.split
        return key[1:k + 1] + key[k + 2:]

    def lcm(self, a, b):
        return self.encode(tuple(map(max, self.decode(a), self.decode(b))))

    def degree_of(self, key):
        return sum(self.decode(key))

    # construction -----------------------------------------------------
    def coeff(self, c):
        if isinstance(c, CyclotomicNumber):
            if c.m != self.m:
                raise ConductorMismatch(f"coefficient at conductor {c.m} in ring at {self.m}")
            return c
        if isinstance(c, Rational):
            return CyclotomicNumber.rational(self.m, c)
        raise TypeError(f"bad coefficient {c!r}")

    def zero(self):
        return Poly(self, {})

    def const(self, c):
        c = self.coeff(c)
        if not c:
            return self.zero()
        return Poly(self, {self.encode((0,) * self.nvars): c})

    def one(self):
        return self.const(1)

    def gen(self, name):
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Poly(self, {self.encode(e): self.coeff(1)})

    def gens(self):
        return [self.gen(n) for n in self.names]

    def from_dict(self, d):
        """Build from {exponent tuple: coefficient}."""
        terms = {}
        for e, c in d.items():
            c = self.coeff(c)
            if c:
                terms[self.encode(e)] = c
        return Poly(self, terms)

    def with_order(self, order, split=None, names=None):
        return PolyRing(self.names if names is None else names, order, self.m, split)


class Poly:
    """Sparse polynomial; ``terms`` maps encoded monomials to nonzero coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # basic protocol ---------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (Rational, CyclotomicNumber)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _lift(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError("ring mismatch")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v = v + c
                if v:
                    out[k] = v
                else:
                    del out[k]
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (Rational, CyclotomicNumber)):
            c = self.ring.coeff(other)
            if not c:
                return self.ring.zero()
            return Poly(self.ring, {k: v * c for k, v in self.terms.items()})
        other = self._lift(other)
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(map(_add, k1, k2))
                v = out.get(k)
                out[k] = c1 * c2 if v is None else v + c1 * c2
        return Poly(self.ring, {k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # order-dependent accessors ---------------------------------------
    def lm(self):
        return max(self.terms)

    def lc(self):
        return self.terms[max(self.terms)]

    def monic(self):
        if not self.terms:
            return self
        inv = self.lc().inverse()
        return Poly(self.ring, {k: v * inv for k, v in self.terms.items()})

    def total_degree(self):
        if not self.terms:
            return -1
        return max(self.ring.degree_of(k) for k in self.terms)

    def exponents(self):
        """{exponent tuple: coefficient}, independent of the order encoding."""
        return {self.ring.decode(k): c for k, c in self.terms.items()}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def variables(self):
        used = set()
        for k in self.terms:
            for i, e in enumerate(self.ring.decode(k)):
                if e:
                    used.add(i)
        return [self.ring.names[i] for i in sorted(used)]

    def is_constant(self):
        return all(not any(self.ring.decode(k)) for k in self.terms)

    def to_ring(self, ring):
        """Re-express in another ring that contains every variable used here."""
        used = set(self.variables())
        missing = [n for n in used if n not in ring.names]
        if missing:
            raise ValueError(f"target ring lacks variables {sorted(missing)}")
        idx = [ring.index(n) if n in used else None for n in self.ring.names]
        out = {}
        for k, c in self.terms.items():
            e = [0] * ring.nvars
            for i, x in zip(idx, self.ring.decode(k)):
                if x:
                    e[i] += x
            out[ring.encode(e)] = c if c.m == ring.m else c.lift(ring.m)
        return Poly(ring, out)

    def evaluate(self, values):
        """Substitute {name: value} for every variable; returns a coefficient."""
        total = self.ring.coeff(0)
        vals = [self.ring.coeff(values[n]) for n in self.ring.names]
        for k, c in self.terms.items():
            t = c
            for v, e in zip(vals, self.ring.decode(k)):
                if e:
                    t = t * v ** e
            total = total + t
        return total

    def galois(self, k):
        return Poly(self.ring, {key: c.galois(k) for key, c in self.terms.items()})

    def render(self):
        if not self.terms:
            return "0"
        parts = []
        for idx, (k, c) in enumerate(self.sorted_terms()):
            exps = self.ring.decode(k)
            mono = "*".join(
                n if e == 1 else f"{n}^{e}"
                for n, e in zip(self.ring.names, exps) if e
            )
            parts.append(_render_term(c, mono, first=idx == 0))
        return "".join(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"Poly({self.render()!r})"


def _render_term(c, mono, first):
    """One signed term `coefficient*monomial` in DSL syntax."""
    if c.needs_parens():
        body = f"({c.render()})" + (f"*{mono}" if mono else "")
        return body if first else f" + {body}"
    q = c.coeffs[0] if c.is_rational() else None
    if q is None:
        # single non-constant power of z, possibly scaled
        j = next(j for j, x in enumerate(c.coeffs) if x)
        q = c.coeffs[j]
        zpart = "z" if j == 1 else f"z^{j}"
        a = -q if q < 0 else q
        core = zpart if a == 1 else f"{a}*{zpart}"
        body = core + (f"*{mono}" if mono else "")
    else:
        a = -q if q < 0 else q
        if mono:
            body = mono if a == 1 else f"{a}*{mono}"
        else:
            body = str(a)
    neg = q < 0
    if first:
        return ("-" if neg else "") + body
    return (" - " if neg else " + ") + body


@dataclass(frozen=True)
class PolyIdeal:
    ring: PolyRing
    generators: tuple

    def __init__(self, ring, generators):
        gens = []
        for g in generators:
            if not isinstance(g, Poly):
                g = ring.const(g)
            if g.ring != ring:
                raise ValueError("generator does not belong to the ideal's ring")
            if g:
                gens.append(g)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "generators", tuple(gens))


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced, monic Groebner basis, sorted by descending leading monomial."""

    ring: PolyRing
    basis: tuple
    pairs_processed: int = field(default=0, compare=False)

    def __len__(self):
        return len(self.basis)

    def render(self):
        return "\n".join(p.render() for p in self.basis)


# --- core reduction ---------------------------------------------------------

def _divides(a, b):
    return all(map(_le, a, b))


def _reduce_terms(terms, G):
    """Full reduction of ``terms`` by monic polys ``G`` given as (lm, tail) pairs."""
    p = dict(terms)
    rem = {}
    while p:
        lm = max(p)
        c = p.pop(lm)
        for glm, tail in G:
            if _divides(glm, lm):
                q = tuple(map(_sub, lm, glm))
                for k, v in tail:
                    key = tuple(map(_add, k, q))
                    old = p.get(key)
                    if old is None:
                        p[key] = -(c * v)
                    else:
                        new = old - c * v
                        if new:
                            p[key] = new
                        else:
                            del p[key]
                break
        else:
            rem[lm] = c
    return rem


def _as_reducer(poly):
    lm = poly.lm()
    tail = [(k, v) for k, v in poly.terms.items() if k != lm]
    return lm, tail


def normal_form(p, G):
    """Remainder of p on division by the basis G (zero iff p lies in the ideal)."""
    basis = G.basis if isinstance(G, GroebnerBasis) else tuple(G)
    ring = G.ring if isinstance(G, GroebnerBasis) else p.ring
    if p.ring != ring:
        raise ValueError("normal_form: ring mismatch")
    reducers = [_as_reducer(g.monic()) for g in basis]
    return Poly(ring, _reduce_terms(p.terms, reducers))


def _spoly(ring, f, g):
    lf, lg = f.lm(), g.lm()
    L = ring.lcm(lf, lg)
    qf = tuple(map(_sub, L, lf))
    qg = tuple(map(_sub, L, lg))
    out = {}
    for k, c in f.terms.items():
        if k != lf:
            out[tuple(map(_add, k, qf))] = c
    for k, c in g.terms.items():
        if k == lg:
            continue
        key = tuple(map(_add, k, qg))
        old = out.get(key)
        if old is None:
            out[key] = -c
        else:
            new = old - c
            if new:
                out[key] = new
            else:
                del out[key]
    return out


def buchberger(ideal, budget=None, rng=None):
    """Reduced Groebner basis of ``ideal`` under its ring's order.

    Normal selection strategy, the coprime-leading-term criterion and the
    chain criterion.  Passing a ``random.Random`` as rng picks pairs at
    random instead; the reduced basis is the same either way.
    Raises ResourceLimitExceeded when the budget runs out.
    """
    budget = budget or Budget()
    ring = ideal.ring
    start = time.monotonic()
    G = []
    for g in ideal.generators:
        g = g.monic()
        if g not in G:
            G.append(g)
    if not G:
        return GroebnerBasis(ring, (), 0)
    if any(g.is_constant() for g in G):
        return GroebnerBasis(ring, (ring.one(),), 0)

    lms = [g.lm() for g in G]
    pairs = {}
    for j in range(len(G)):
        for i in range(j):
            pairs[(i, j)] = ring.lcm(lms[i], lms[j])
    reducers = [_as_reducer(g) for g in G]
    processed = 0
    while pairs:
        if rng is None:
            (i, j), L = min(pairs.items(), key=lambda kv: (kv[1], kv[0][1], kv[0][0]))
        else:
            (i, j) = rng.choice(sorted(pairs))
            L = pairs[(i, j)]
        del pairs[(i, j)]
        processed += 1
        if processed > budget.max_pairs:
            raise ResourceLimitExceeded(f"more than {budget.max_pairs} S-pairs", processed)
        if time.monotonic() - start > budget.timeout_secs:
            raise ResourceLimitExceeded(f"wall clock above {budget.timeout_secs}s", processed)
        if L == tuple(map(_add, lms[i], lms[j])):
            continue  # coprime leading monomials
        if _chain_skip(i, j, L, lms, pairs):
            continue
        s = _spoly(ring, G[i], G[j])
        if not s:
            continue
        r = _reduce_terms(s, reducers)
        if not r:
            continue
        h = Poly(ring, r).monic()
        if h.is_constant():
            return GroebnerBasis(ring, (ring.one(),), processed)
        if h.total_degree() > budget.max_degree:
            raise ResourceLimitExceeded(f"basis degree above {budget.max_degree}", processed)
        G.append(h)
        lms.append(h.lm())
        reducers.append(_as_reducer(h))
        n = len(G) - 1
        for t in range(n):
            pairs[(t, n)] = ring.lcm(lms[t], lms[n])
    return GroebnerBasis(ring, _reduce_basis(ring, G), processed)


def _chain_skip(i, j, L, lms, pairs):
    # some lm_k divides lcm(lm_i, lm_j) and both pairs with k are already done
    for k, mk in enumerate(lms):
        if k == i or k == j or not _divides(mk, L):
            continue
        if (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
            return True
    return False


def _reduce_basis(ring, G):
    # minimal basis: drop elements whose leading monomial is divisible by another
    G = sorted(G, key=lambda g: g.lm())
    minimal = []
    for g in G:
        if not any(_divides(h.lm(), g.lm()) for h in minimal):
            minimal.append(g)
    reduced = []
    for idx, g in enumerate(minimal):
        others = [_as_reducer(h) for t, h in enumerate(minimal) if t != idx]
        lm = g.lm()
        tail = {k: v for k, v in g.terms.items() if k != lm}
        rest = _reduce_terms(tail, others)
        rest[lm] = g.terms[lm]
        reduced.append(Poly(ring, rest).monic())
    reduced.sort(key=lambda g: g.lm(), reverse=True)
    return tuple(reduced)


def groebner(generators, ring=None, budget=None):
    generators = list(generators)
    ring = ring or generators[0].ring
    return buchberger(PolyIdeal(ring, generators), budget)


def contains_one(G):
    return len(G.basis) == 1 and G.basis[0].is_constant()


def pure_power_leading_terms(G):
    """Per variable, the least e such that var^e is a leading monomial, else None."""
    ring = G.ring
    out = [None] * ring.nvars
    for g in G.basis:
        exps = ring.decode(g.lm())
        nz = [i for i, e in enumerate(exps) if e]
        if not nz:
            return [0] * ring.nvars
        if len(nz) == 1:
            i = nz[0]
            if out[i] is None or exps[i] < out[i]:
                out[i] = exps[i]
    return out


def is_groebner(G):
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    basis = list(G.basis)
    reducers = [_as_reducer(g.monic()) for g in basis]
    for j in range(len(basis)):
        for i in range(j):
            s = _spoly(G.ring, basis[i].monic(), basis[j].monic())
            if _reduce_terms(s, reducers):
                return False
    return True


def eliminate(G, keep):
    """Generators of the elimination ideal onto the variables ``keep``.

    G must come from a lex order or a block order whose first block is exactly
    the discarded variables.  Keeping every variable returns the basis itself.
    """
    ring = G.ring
    keep = list(keep)
    unknown = [k for k in keep if k not in ring.names]
    if unknown:
        raise ValueError(f"unknown variables {unknown}")
    kept_ring = PolyRing([n for n in ring.names if n in keep], "grlex", ring.m)
    if len(keep) == ring.nvars:
        return PolyIdeal(kept_ring, [g.to_ring(kept_ring) for g in G.basis])
    dropped = [n for n in ring.names if n not in keep]
    prefix = list(ring.names[: len(dropped)])
    if prefix != dropped:
        raise ValueError("discarded variables must come first in the ring")
    if ring.order == "block":
        if ring.split != len(dropped):
            raise ValueError("block split does not match the discarded variables")
    elif ring.order != "lex":
        raise ValueError("elimination needs a lex or block order")
    gens = [g.to_ring(kept_ring) for g in G.basis if not set(g.variables()) & set(dropped)]
    return PolyIdeal(kept_ring, gens)


def intersect_ideals(ideals, budget=None):
    """Intersection of ideals in one ring via an auxiliary variable."""
    ideals = list(ideals)
    if not ideals:
        raise ValueError("nothing to intersect")
    ring = ideals[0].ring
    aux = "_s"
    while aux in ring.names:
        aux += "_"
    big = PolyRing((aux,) + ring.names, "block", ring.m, split=1)
    s = big.gen(aux)
    current = list(ideals[0].generators)
    for other in ideals[1:]:
        gens = [s * g.to_ring(big) for g in current]
        gens += [(1 - s) * g.to_ring(big) for g in other.generators]
        G = buchberger(PolyIdeal(big, gens), budget)
        J = eliminate(G, ring.names)
        current = [g.to_ring(ring) for g in J.generators]
    return PolyIdeal(ring, current)

"""The line-oriented session language.

    # comments run to end of line
    conductor 4
    space P2 degree 4
    map phi = [(X0 - i*X2)^4, (X1 + i*X2)^4, X2^4]
    matrix S = [[0,1,0],[1,0,0],[0,0,1]]
    ansatz A = [[a0,a1,a2],[b0,b1,b2],[0,0,1]]
    cocycle c = {3: S}
    conjugate phi S --expect-galois=3

Expressions use integers, ``p/q``, ``z`` (zeta_m), ``i`` (needs 4 | m),
``X0..XN``, ``+ - * / ^`` and parentheses.  Inside an ansatz any other
identifier names an unknown matrix entry.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .cyclo import CyclotomicNumber, GaloisElement
from .forms import HomogeneousForm, HomogeneousMap
from .pgl import ProjectiveMatrix, SingularMatrix
from .solver import PolyRing

COMMANDS = (
    "conjugate",
    "stab-verify",
    "stab-solve",
    "fom-search",
    "cocycle-verify",
    "coboundary-solve",
    "descend",
    "twist-check",
    "criterion",
    "fixform",
    "paper-audit",
)


class ParseError(ValueError):
    """Input error with a 1-based source position."""

    def __init__(self, message, line=0, col=0):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


# --- expressions -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^(),\[\]{}:=]))")


@dataclass
class _Tok:
    kind: str  # "int", "name", "op", "end"
    text: str
    col: int


def tokenize(text, line=1, col0=1):
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos] in " \t":
            pos += 1
        if pos >= len(text):
            break
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col0 + pos)
        start = mt.start(mt.lastindex)
        if mt.group(1):
            toks.append(_Tok("int", mt.group(1), col0 + start))
        elif mt.group(2):
            toks.append(_Tok("name", mt.group(2), col0 + start))
        else:
            op = mt.group(3)
            toks.append(_Tok("op", "^" if op == "**" else op, col0 + start))
        pos = mt.end()
    toks.append(_Tok("end", "", col0 + len(text)))
    return toks


class _ExprParser:
    """Recursive descent over a token list, producing solver polynomials."""

    def __init__(self, toks, ring, line, allow_unknowns=False):
        self.toks = toks
        self.pos = 0
        self.ring = ring
        self.line = line
        self.allow_unknowns = allow_unknowns

    @property
    def cur(self):
        return self.toks[self.pos]

    def error(self, msg, tok=None):
        tok = tok or self.cur
        return ParseError(msg, self.line, tok.col)

    def expect(self, text):
        if self.cur.text != text or self.cur.kind not in ("op",):
            raise self.error(f"expected {text!r}, found {self.cur.text or 'end of line'!r}")
        self.pos += 1

    def expr(self):
        value = self.term()
        while self.cur.kind == "op" and self.cur.text in "+-":
            op = self.cur.text
            self.pos += 1
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.cur.kind == "op" and self.cur.text in "*/":
            op_tok = self.cur
            self.pos += 1
            rhs = self.unary()
            if op_tok.text == "*":
                value = value * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise self.error("division only by a nonzero constant", op_tok)
                value = value * rhs.lc().inverse()
        return value

    def unary(self):
        if self.cur.kind == "op" and self.cur.text in "+-":
            neg = self.cur.text == "-"
            self.pos += 1
            v = self.unary()
            return -v if neg else v
        return self.power()

    def power(self):
        base = self.atom()
        if self.cur.kind == "op" and self.cur.text == "^":
            self.pos += 1
            tok = self.cur
            if tok.kind != "int":
                raise self.error("exponent must be a non-negative integer literal")
            self.pos += 1
            return base ** int(tok.text)
        return base

    def atom(self):
        tok = self.cur
        ring = self.ring
        if tok.kind == "int":
            self.pos += 1
            return ring.const(int(tok.text))
        if tok.kind == "name":
            self.pos += 1
            if tok.text == "z":
                return ring.const(CyclotomicNumber.zeta(ring.m))
            if tok.text == "i":
                if ring.m % 4:
                    raise self.error(f"'i' needs 4 | conductor, conductor is {ring.m}", tok)
                return ring.const(CyclotomicNumber.i(ring.m))
            if tok.text in ring.names:
                return ring.gen(tok.text)
            if re.fullmatch(r"X\d+", tok.text):
                raise self.error(f"variable {tok.text} is outside the declared space", tok)
            raise self.error(f"unknown name {tok.text!r}", tok)
        if tok.kind == "op" and tok.text == "(":
            self.pos += 1
            v = self.expr()
            self.expect(")")
            return v
        raise self.error(f"unexpected {tok.text or 'end of line'!r}")


def parse_expr(text, ring, line=1, col0=1):
    toks = tokenize(text, line, col0)
    p = _ExprParser(toks, ring, line)
    v = p.expr()
    if p.cur.kind != "end":
        raise p.error(f"unexpected {p.cur.text!r}")
    return v


def poly_to_form(poly, N, m):
    return HomogeneousForm(N, _poly_degree(poly), m, poly.exponents())


def _poly_degree(poly):
    if poly.is_zero():
        return 0
    degs = {sum(e) for e in poly.exponents()}
    if len(degs) != 1:
        raise ValueError("expression is not homogeneous")
    return degs.pop()


def parse_map(text, m, N=None, d=None, line=1, col0=1):
    """Parse ``[F0, ..., FN]``; N is inferred from the entry count when omitted."""
    toks = tokenize(text, line, col0)
    if N is None:
        N = _count_top_level(toks) - 1
    ring = PolyRing([f"X{j}" for j in range(N + 1)], "grlex", m)
    p = _ExprParser(toks, ring, line)
    p.expect("[")
    forms = []
    while True:
        start = p.cur
        poly = p.expr()
        try:
            form = poly_to_form(poly, N, m)
        except ValueError as exc:
            raise ParseError(str(exc), line, start.col) from None
        if d is not None and poly and form.d != d:
            raise ParseError(f"degree mismatch: declared degree {d}, entry has degree {form.d}",
                             line, start.col)
        forms.append(form)
        if p.cur.text == ",":
            p.pos += 1
            continue
        break
    p.expect("]")
    if p.cur.kind != "end":
        raise p.error(f"unexpected {p.cur.text!r}")
    if len(forms) != N + 1:
        raise ParseError(f"P{N} needs {N + 1} coordinates, got {len(forms)}", line, col0)
    degs = {f.d for f in forms if f}
    if len(degs) > 1:
        raise ParseError("coordinates have different degrees", line, col0)
    try:
        return HomogeneousMap(forms)
    except ValueError as exc:
        raise ParseError(str(exc), line, col0) from None


def _count_top_level(toks):
    depth, count = 0, 1
    for t in toks:
        if t.kind != "op":
            continue
        if t.text in "([{":
            depth += 1
        elif t.text in ")]}":
            depth -= 1
        elif t.text == "," and depth == 1:
            count += 1
    return count


def _parse_grid(toks, line, cell):
    """Parse ``[[c, ...], ...]`` calling ``cell(p)`` for each entry."""

    def run(p):
        p.expect("[")
        rows = []
        while True:
            p.expect("[")
            row = []
            while True:
                row.append(cell(p))
                if p.cur.text == ",":
                    p.pos += 1
                    continue
                break
            p.expect("]")
            rows.append(row)
            if p.cur.text == ",":
                p.pos += 1
                continue
            break
        p.expect("]")
        if p.cur.kind != "end":
            raise p.error(f"unexpected {p.cur.text!r}")
        return rows

    return run


def parse_matrix(text, m, N=None, line=1, col0=1):
    toks = tokenize(text, line, col0)
    ring = PolyRing(["_"], "grlex", m)
    p = _ExprParser(toks, ring, line)

    def cell(p):
        start = p.cur
        v = p.expr()
        if not v.is_constant():
            raise ParseError("matrix entries must be constants", line, start.col)
        return v.lc() if v else CyclotomicNumber.zero(m)

    rows = _parse_grid(toks, line, cell)(p)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ParseError("matrix must be square", line, col0)
    if N is not None and n != N + 1:
        raise ParseError(f"matrix must be {N + 1}x{N + 1} in P{N}", line, col0)
    try:
        return ProjectiveMatrix(rows, m)
    except SingularMatrix:
        raise ParseError("matrix is singular", line, col0) from None


def parse_ansatz(text, m, N=None, line=1, col0=1):
    from .stabilizer import MatrixAnsatz, Unknown

    toks = tokenize(text, line, col0)
    ring = PolyRing(["_"], "grlex", m)
    p = _ExprParser(toks, ring, line)

    def cell(p):
        tok = p.cur
        nxt = p.toks[p.pos + 1]
        if (tok.kind == "name" and tok.text not in ("z", "i")
                and nxt.kind == "op" and nxt.text in ",]"):
            p.pos += 1
            return Unknown(tok.text)
        v = p.expr()
        if not v.is_constant():
            raise ParseError("ansatz constants must not involve variables", line, tok.col)
        return v.lc() if v else CyclotomicNumber.zero(m)

    rows = _parse_grid(toks, line, cell)(p)
    if N is not None and (len(rows) != N + 1 or any(len(r) != N + 1 for r in rows)):
        raise ParseError(f"ansatz must be {N + 1}x{N + 1} in P{N}", line, col0)
    try:
        return MatrixAnsatz(rows, m)
    except ValueError as exc:
        raise ParseError(str(exc), line, col0) from None


# --- scripts -----------------------------------------------------------------

@dataclass(frozen=True)
class Command:
    name: str
    args: tuple
    options: tuple  # sorted (key, value) pairs; value None for bare flags
    line: int = field(default=0, compare=False)

    def option(self, key, default=None):
        for k, v in self.options:
            if k == key:
                return v
        return default

    def render(self):
        parts = [self.name, *self.args]
        for k, v in self.options:
            parts.append(f"--{k}" if v is None else f"--{k}={v}")
        return " ".join(parts)


@dataclass
class SessionScript:
    conductor: int = 1
    N: int | None = None
    d: int | None = None
    bindings: dict = field(default_factory=dict)  # name -> (kind, value)
    commands: list = field(default_factory=list)

    def __eq__(self, other):
        if not isinstance(other, SessionScript):
            return NotImplemented
        if (self.conductor, self.N, self.d, self.commands) != (
            other.conductor, other.N, other.d, other.commands
        ):
            return False
        if list(self.bindings) != list(other.bindings):
            return False
        for name, (kind, value) in self.bindings.items():
            okind, ovalue = other.bindings[name]
            if kind != okind or _structural(value) != _structural(ovalue):
                return False
        return True

    def lookup(self, name, kind, line=0):
        if name not in self.bindings:
            raise ParseError(f"undeclared name {name!r}", line, 1)
        k, v = self.bindings[name]
        if k != kind:
            raise ParseError(f"{name!r} is a {k}, expected a {kind}", line, 1)
        return v


def _structural(value):
    if isinstance(value, HomogeneousMap):
        return ("map", value.coords)
    if isinstance(value, ProjectiveMatrix):
        return ("matrix", value.entries)
    if isinstance(value, dict):
        return ("cocycle", tuple(sorted((k, _structural(v)) for k, v in value.items())))
    return ("other", value.render())


_BIND = re.compile(r"(map|matrix|ansatz|cocycle)\s+([A-Za-z_][A-Za-z_0-9]*)\s*=\s*")
_SPACE = re.compile(r"space\s+P(\d+)\s+degree\s+(\d+)\s*$")


def parse(source):
    """Parse a session script; errors carry line and column."""
    script = SessionScript()
    have_conductor = False
    for lineno, raw in enumerate(source.splitlines(), start=1):
        text = raw.split("#", 1)[0].rstrip()
        stripped = text.lstrip()
        if not stripped:
            continue
        indent = len(text) - len(stripped)
        col = indent + 1
        word = stripped.split()[0]
        if word == "conductor":
            if have_conductor:
                raise ParseError("conductor declared twice", lineno, col)
            if script.bindings:
                raise ParseError("conductor must precede all bindings", lineno, col)
            parts = stripped.split()
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) < 1:
                raise ParseError("usage: conductor <positive integer>", lineno, col)
            script.conductor = int(parts[1])
            have_conductor = True
        elif word == "space":
            mt = _SPACE.match(stripped)
            if not mt:
                raise ParseError("usage: space P<N> degree <d>", lineno, col)
            if script.N is not None:
                raise ParseError("space declared twice", lineno, col)
            script.N, script.d = int(mt.group(1)), int(mt.group(2))
            if script.N < 1 or script.d < 1:
                raise ParseError("need N >= 1 and d >= 1", lineno, col)
        elif word in ("map", "matrix", "ansatz", "cocycle"):
            mt = _BIND.match(stripped)
            if not mt:
                raise ParseError(f"usage: {word} <name> = <value>", lineno, col)
            kind, name = mt.group(1), mt.group(2)
            if name in script.bindings:
                raise ParseError(f"{name!r} is already bound", lineno, col + mt.start(2))
            body = stripped[mt.end():]
            bcol = col + mt.end()
            if kind != "cocycle" and script.N is None:
                raise ParseError("declare the space before binding maps or matrices", lineno, col)
            m = script.conductor
            if kind == "map":
                value = parse_map(body, m, script.N, script.d, lineno, bcol)
            elif kind == "matrix":
                value = parse_matrix(body, m, script.N, lineno, bcol)
            elif kind == "ansatz":
                value = parse_ansatz(body, m, script.N, lineno, bcol)
            else:
                value = _parse_cocycle(body, script, lineno, bcol)
            script.bindings[name] = (kind, value)
        elif word in COMMANDS:
            script.commands.append(_parse_command(stripped, script, lineno, col))
        else:
            raise ParseError(f"unknown statement {word!r}", lineno, col)
    return script


def _parse_cocycle(body, script, line, col0):
    toks = tokenize(body, line, col0)
    pos = 0

    def take(kind=None, text=None):
        nonlocal pos
        t = toks[pos]
        if (kind and t.kind != kind) or (text and t.text != text):
            raise ParseError(f"expected {text or kind}, found {t.text or 'end of line'!r}", line, t.col)
        pos += 1
        return t

    take(text="{")
    assignment = {}
    while True:
        kt = take("int")
        take(text=":")
        nt = take("name")
        k = int(kt.text)
        try:
            s = GaloisElement(script.conductor, k)
        except ValueError as exc:
            raise ParseError(str(exc), line, kt.col) from None
        if nt.text not in script.bindings or script.bindings[nt.text][0] != "matrix":
            raise ParseError(f"undeclared matrix {nt.text!r}", line, nt.col)
        assignment[s.k] = script.bindings[nt.text][1]
        if toks[pos].text == ",":
            pos += 1
            continue
        break
    take(text="}")
    if toks[pos].kind != "end":
        raise ParseError(f"unexpected {toks[pos].text!r}", line, toks[pos].col)
    return assignment


_ARITY = {
    "conjugate": (2, 2, ("map", "matrix")),
    "stab-verify": (2, None, ("map", "matrix")),
    "stab-solve": (2, None, ("map", "ansatz", "matrix")),
    "fom-search": (1, 1, ("map",)),
    "cocycle-verify": (2, None, ("cocycle", "map", "matrix")),
    "coboundary-solve": (1, 1, ("matrix",)),
    "descend": (2, 2, ("map", "matrix")),
    "twist-check": (3, 3, ("map", "map", "matrix")),
    "criterion": (2, 2, ("int", "int")),
    "fixform": (2, 2, ("map", "int")),
    "paper-audit": (0, 0, ()),
}


def _parse_command(text, script, line, col):
    words = text.split()
    name = words[0]
    args, options = [], []
    offset = col
    positions = []
    cursor = 0
    for w in words:
        idx = text.index(w, cursor)
        positions.append(col + idx)
        cursor = idx + len(w)
    for w, wcol in zip(words[1:], positions[1:]):
        if w.startswith("--"):
            key, _, value = w[2:].partition("=")
            if not key:
                raise ParseError("empty option name", line, wcol)
            options.append((key, value if _ else None))
        else:
            args.append((w, wcol))
    lo, hi, kinds = _ARITY[name]
    if len(args) < lo or (hi is not None and len(args) > hi):
        raise ParseError(f"{name} takes {lo}{'' if hi == lo else '+' if hi is None else f'-{hi}'} "
                         f"arguments, got {len(args)}", line, offset)
    for idx, (a, acol) in enumerate(args):
        kind = kinds[min(idx, len(kinds) - 1)]
        if kind == "int":
            if not re.fullmatch(r"\d+", a):
                raise ParseError(f"expected an integer, found {a!r}", line, acol)
            continue
        if a not in script.bindings:
            raise ParseError(f"undeclared name {a!r}", line, acol)
        if script.bindings[a][0] != kind:
            raise ParseError(f"{a!r} is a {script.bindings[a][0]}, expected a {kind}", line, acol)
    return Command(name, tuple(a for a, _ in args), tuple(sorted(options)), line)


def print_script(script):
    """Canonical source text; ``parse(print_script(s)) == s``."""
    out = [f"conductor {script.conductor}"]
    if script.N is not None:
        out.append(f"space P{script.N} degree {script.d}")
    for name, (kind, value) in script.bindings.items():
        if kind == "cocycle":
            body = "{" + ", ".join(f"{k}: {_matrix_name(script, v)}" for k, v in value.items()) + "}"
        else:
            body = value.render()
        out.append(f"{kind} {name} = {body}")
    for cmd in script.commands:
        out.append(cmd.render())
    return "\n".join(out) + "\n"


def _matrix_name(script, value):
    for name, (kind, v) in script.bindings.items():
        if kind == "matrix" and v is value:
            return name
    raise ValueError("cocycle refers to an unbound matrix")

"""Execute parsed session scripts and produce deterministic reports.

Exit codes: 0 every verification true, 1 some verification false, 2 input
error, 3 some question left undecided (resource limit or inconclusive
outcome).  When several apply the most severe wins, in the order 2, 1, 3.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .criterion import criterion_check
from .cyclo import ConductorMismatch, GaloisElement
from .cycles import degree_consistency, fixed_point_form, rational_roots
from .descent import (
    CoboundaryStatus,
    FamilyTooLarge,
    GaloisCocycle,
    InvalidLift,
    MonomialFamily,
    TwistVerdict,
    coboundary_solve_quadratic,
    descend,
    fom_witness_search,
    twist_check,
    verify_cocycle,
)
from .dsl import ParseError, parse
from .forms import galois_map
from .pgl import ProjectiveMatrix, conjugate, is_stabilizer_element
from .solver import Budget, ResourceLimitExceeded
from .stabilizer import Status, certify_group

OK, NO, INPUT_ERROR, UNDECIDED = 0, 1, 2, 3
_SEVERITY = {OK: 0, UNDECIDED: 1, NO: 2, INPUT_ERROR: 3}

ENV_PREFIX = "MODULI_DESCENT_"


def combine(*codes):
    return max(codes, key=lambda c: _SEVERITY[c]) if codes else OK


@dataclass
class Config:
    budget: Budget = field(default_factory=Budget)
    porcelain: bool = False

    @classmethod
    def from_env(cls, max_pairs=None, max_degree=None, timeout_secs=None, porcelain=False, environ=None):
        """Flags win over environment variables, which win over defaults."""
        env = os.environ if environ is None else environ
        b = Budget()

        def pick(flag, key, conv, default):
            if flag is not None:
                return conv(flag)
            if ENV_PREFIX + key in env:
                return conv(env[ENV_PREFIX + key])
            return default

        budget = Budget(
            max_pairs=pick(max_pairs, "MAX_PAIRS", int, b.max_pairs),
            max_degree=pick(max_degree, "MAX_DEGREE", int, b.max_degree),
            timeout_secs=pick(timeout_secs, "TIMEOUT_SECS", float, b.timeout_secs),
        )
        return cls(budget, porcelain)


class _Report:
    def __init__(self, porcelain):
        self.porcelain = porcelain
        self.lines = []

    def header(self, cmd):
        if not self.porcelain:
            self.lines.append(f"== line {cmd.line}: {cmd.render()}")

    def text(self, s):
        if not self.porcelain:
            self.lines.extend(s.splitlines() or [""])

    def record(self, **kv):
        if self.porcelain:
            self.lines.append(" ".join(f"{k}={_porcelain_value(v)}" for k, v in kv.items()))

    def render(self):
        return "\n".join(self.lines) + "\n"


def _porcelain_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v).replace(" ", "")


def _bool(b):
    return "true" if b else "false"


def _galois(script, cmd):
    k = cmd.option("galois")
    m = script.conductor
    if k is None:
        return GaloisElement.complex_conjugation(m)
    try:
        return GaloisElement(m, int(k))
    except ValueError as exc:
        raise ParseError(str(exc), cmd.line, 1) from None


def _int_option(cmd, key, default):
    v = cmd.option(key)
    if v is None:
        return default
    try:
        return int(v)
    except ValueError:
        raise ParseError(f"--{key} needs an integer, got {v!r}", cmd.line, 1) from None


# --- commands --------------------------------------------------------------------

def _cmd_conjugate(script, cmd, rep, cfg):
    phi = script.lookup(cmd.args[0], "map", cmd.line)
    f = script.lookup(cmd.args[1], "matrix", cmd.line)
    out = conjugate(phi, f)
    rep.text(f"result: {out.render()}")
    code = OK
    checks = {}
    if cmd.option("expect-galois") is not None:
        k = _int_option(cmd, "expect-galois", None)
        s = GaloisElement(script.conductor, k)
        ok = out == galois_map(s, phi)
        rep.text(f"check: {cmd.args[0]}^{cmd.args[1]} == {cmd.args[0]}^sigma_{k}: {_bool(ok)}")
        checks["expect_galois"] = ok
        code = combine(code, OK if ok else NO)
    if cmd.option("expect") is not None:
        psi = script.lookup(cmd.option("expect"), "map", cmd.line)
        ok = out == psi
        rep.text(f"check: {cmd.args[0]}^{cmd.args[1]} == {cmd.option('expect')}: {_bool(ok)}")
        checks["expect"] = ok
        code = combine(code, OK if ok else NO)
    rep.record(command=cmd.name, line=cmd.line, result=out.render(), **checks)
    return code


def _cmd_stab_verify(script, cmd, rep, cfg):
    phi = script.lookup(cmd.args[0], "map", cmd.line)
    code = OK
    for name in cmd.args[1:]:
        f = script.lookup(name, "matrix", cmd.line)
        ok = is_stabilizer_element(phi, f)
        rep.text(f"{name} in stabilizer of {cmd.args[0]}: {_bool(ok)}")
        rep.record(command=cmd.name, line=cmd.line, matrix=name, stabilizes=ok)
        code = combine(code, OK if ok else NO)
    return code


def _cmd_stab_solve(script, cmd, rep, cfg):
    phi = script.lookup(cmd.args[0], "map", cmd.line)
    A = script.lookup(cmd.args[1], "ansatz", cmd.line)
    claimed = [script.lookup(n, "matrix", cmd.line) for n in cmd.args[2:]]
    if not claimed:
        claimed = [ProjectiveMatrix.identity(phi.N, phi.m)]
    try:
        v = certify_group(phi, A, claimed, cfg.budget)
    except ValueError as exc:
        raise ParseError(str(exc), cmd.line, 1) from None
    rep.text(v.render())
    rep.record(command=cmd.name, line=cmd.line, status=v.status.value, basis_size=len(v.basis or ()),
               pairs=v.pairs)
    return {
        Status.ONLY_CLAIMED: OK,
        Status.INCONSISTENT: NO,
        Status.EXTRA_SOLUTIONS_POSSIBLE: UNDECIDED,
        Status.RESOURCE_LIMIT: UNDECIDED,
    }[v.status]


def _cmd_fom_search(script, cmd, rep, cfg):
    phi = script.lookup(cmd.args[0], "map", cmd.line)
    s = _galois(script, cmd)
    roots = _int_option(cmd, "roots", script.conductor)
    rats = cmd.option("rationals", "1")
    try:
        rationals = tuple(int(x) for x in rats.split(","))
        family = MonomialFamily(roots, rationals)
        f = fom_witness_search(phi, s, family)
    except FamilyTooLarge as exc:
        rep.text(f"family too large: {exc}")
        rep.record(command=cmd.name, line=cmd.line, found="budget")
        return UNDECIDED
    except (ValueError, ConductorMismatch) as exc:
        raise ParseError(str(exc), cmd.line, 1) from None
    if f is None:
        rep.text(f"no witness in the monomial family over mu_{roots} (not a proof of nonexistence)")
        rep.record(command=cmd.name, line=cmd.line, found=False)
        return UNDECIDED
    rep.text(f"witness: {f.render()}")
    rep.text(f"check: {cmd.args[0]}^f == {cmd.args[0]}^sigma_{s.k}: true")
    rep.record(command=cmd.name, line=cmd.line, found=True, witness=f.render())
    return OK


def _cmd_cocycle_verify(script, cmd, rep, cfg):
    raw = script.lookup(cmd.args[0], "cocycle", cmd.line)
    phi = script.lookup(cmd.args[1], "map", cmd.line)
    m = script.conductor
    ident = ProjectiveMatrix.identity(phi.N, m)
    assignment = {GaloisElement(m, k): f for k, f in raw.items()}
    assignment.setdefault(GaloisElement.identity(m), ident)
    stab = [ident] + [script.lookup(n, "matrix", cmd.line) for n in cmd.args[2:]]
    try:
        c = GaloisCocycle(m, assignment)
    except ValueError as exc:
        raise ParseError(str(exc), cmd.line, 1) from None
    ok = verify_cocycle(c, phi, stab)
    rep.text(f"cocycle {c.render()}")
    rep.text(f"cocycle relation relative to {len(stab)} stabilizer element(s): {_bool(ok)}")
    rep.record(command=cmd.name, line=cmd.line, cocycle=ok)
    return OK if ok else NO


def _cmd_coboundary(script, cmd, rep, cfg):
    F = script.lookup(cmd.args[0], "matrix", cmd.line)
    mode = cmd.option("mode", "full")
    if mode not in ("restricted", "full"):
        raise ParseError(f"--mode must be restricted or full, got {mode!r}", cmd.line, 1)
    s = _galois(script, cmd)
    sub = _int_option(cmd, "subfield", None)
    try:
        r = coboundary_solve_quadratic(F, s, mode, sub)
    except (InvalidLift, ValueError) as exc:
        raise ParseError(str(exc), cmd.line, 1) from None
    rep.text(r.render())
    rep.record(command=cmd.name, line=cmd.line, mode=mode, status=r.status.value, dimension=r.dimension,
               witness=r.witness.render() if r.witness is not None else "-")
    return UNDECIDED if r.status is CoboundaryStatus.INCONCLUSIVE else OK


def _cmd_descend(script, cmd, rep, cfg):
    phi = script.lookup(cmd.args[0], "map", cmd.line)
    g = script.lookup(cmd.args[1], "matrix", cmd.line)
    psi, rational = descend(phi, g)
    rep.text(f"descended: {psi.render()}")
    rep.text(f"rational: {_bool(rational)}")
    rep.record(command=cmd.name, line=cmd.line, rational=rational, result=psi.render())
    return OK if rational else NO


def _cmd_twist(script, cmd, rep, cfg):
    phi = script.lookup(cmd.args[0], "map", cmd.line)
    psi = script.lookup(cmd.args[1], "map", cmd.line)
    f = script.lookup(cmd.args[2], "matrix", cmd.line)
    v = twist_check(phi, psi, f)
    rep.text(f"verdict: {v.value}")
    rep.record(command=cmd.name, line=cmd.line, verdict=v.value)
    return NO if v is TwistVerdict.NOT_EQUIVALENT else OK


def _cmd_criterion(script, cmd, rep, cfg):
    d, N = int(cmd.args[0]), int(cmd.args[1])
    try:
        cert = criterion_check(d, N)
    except ValueError as exc:
        raise ParseError(str(exc), cmd.line, 1) from None
    rep.text(cert.render())
    rep.record(command=cmd.name, line=cmd.line, d=d, N=N, verdict=cert.verdict,
               witness=cert.witness if cert.witness is not None else "-")
    return OK


def _cmd_fixform(script, cmd, rep, cfg):
    phi = script.lookup(cmd.args[0], "map", cmd.line)
    n = int(cmd.args[1])
    if phi.N != 1:
        raise ParseError("fixform works on P1 only; periodic cycles on P^N, N >= 2, are out of scope",
                         cmd.line, 1)
    if n < 1:
        raise ParseError("period must be positive", cmd.line, 1)
    height = _int_option(cmd, "height", 20)
    try:
        fp = fixed_point_form(phi, n)
    except ValueError as exc:
        raise ParseError(str(exc), cmd.line, 1) from None
    ok = degree_consistency(phi, n)
    roots = rational_roots(fp.form, height)
    rep.text(fp.render())
    rep.text(f"degree consistent: {_bool(ok)}")
    rep.text("rational roots (height <= %d): %s" % (height, ", ".join(
        f"{r}^{k}" if k > 1 else str(r) for r, k in roots) or "none"))
    rep.record(command=cmd.name, line=cmd.line, n=n, degree=fp.degree, consistent=ok,
               rational_roots=sum(k for _, k in roots))
    return OK if ok else NO


def _cmd_audit(script, cmd, rep, cfg):
    from .audit import paper_audit

    audit = paper_audit(cfg.budget)
    rep.text(audit.render())
    for c in audit.claims:
        rep.record(command=cmd.name, claim=c.key, status=c.status)
    return audit.exit_code()


_DISPATCH = {
    "conjugate": _cmd_conjugate,
    "stab-verify": _cmd_stab_verify,
    "stab-solve": _cmd_stab_solve,
    "fom-search": _cmd_fom_search,
    "cocycle-verify": _cmd_cocycle_verify,
    "coboundary-solve": _cmd_coboundary,
    "descend": _cmd_descend,
    "twist-check": _cmd_twist,
    "criterion": _cmd_criterion,
    "fixform": _cmd_fixform,
    "paper-audit": _cmd_audit,
}

_STATUS_WORD = {OK: "ok", NO: "verification-failed", INPUT_ERROR: "input-error", UNDECIDED: "undecided"}


def run(script, config=None):
    """Execute the commands in order; returns (exit code, report text)."""
    cfg = config or Config()
    rep = _Report(cfg.porcelain)
    code = OK
    for cmd in script.commands:
        rep.header(cmd)
        try:
            c = _DISPATCH[cmd.name](script, cmd, rep, cfg)
        except ParseError as exc:
            rep.text(f"error: {exc}")
            rep.record(command=cmd.name, line=cmd.line, error=exc.message)
            code = INPUT_ERROR
            break
        except ValueError as exc:  # conductor or dimension mismatches in the input
            rep.text(f"error: line {cmd.line}: {exc}")
            rep.record(command=cmd.name, line=cmd.line, error=str(exc))
            code = INPUT_ERROR
            break
        except ResourceLimitExceeded as exc:
            rep.text(f"resource limit: {exc}")
            rep.record(command=cmd.name, line=cmd.line, resource_limit=True)
            c = UNDECIDED
        code = combine(code, c)
    _finish(rep, code)
    return code, rep.render()


def _finish(rep, code):
    if rep.porcelain:
        rep.lines.append(f"status={_STATUS_WORD[code]} exit={code}")
    else:
        rep.lines.append(f"status: {_STATUS_WORD[code]} (exit {code})")


def run_source(source, config=None):
    """Parse and run; parse errors become exit code 2 with a one-line report."""
    cfg = config or Config()
    try:
        script = parse(source)
    except ParseError as exc:
        rep = _Report(cfg.porcelain)
        rep.text(f"error: {exc}")
        rep.record(error=exc.message, line=exc.line, column=exc.col)
        _finish(rep, INPUT_ERROR)
        return INPUT_ERROR, rep.render()
    return run(script, cfg)

"""Command line entry point: ``moduli-descent run <script>`` and ``moduli-descent audit``."""

import argparse
import sys

from .runner import INPUT_ERROR, Config, _finish, _Report, run, run_source


def _add_budget(p):
    p.add_argument("--max-pairs", type=int, default=None, help="S-pair limit per Groebner computation")
    p.add_argument("--max-degree", type=int, default=None, help="degree cap for basis elements")
    p.add_argument("--timeout-secs", type=float, default=None, help="wall-clock limit per Groebner computation")
    p.add_argument("--porcelain", action="store_true", help="machine-readable key=value records")
    p.add_argument("--output", "-o", default=None, help="write the report to this file as well")


def build_parser():
    parser = argparse.ArgumentParser(prog="moduli-descent", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="execute a session script")
    p_run.add_argument("script", help="path to the script, or - for stdin")
    _add_budget(p_run)
    p_audit = sub.add_parser("audit", help="rerun every worked example claim")
    _add_budget(p_audit)
    return parser


def _config(args):
    return Config.from_env(args.max_pairs, args.max_degree, args.timeout_secs, args.porcelain)


def main(argv=None):
    args = build_parser().parse_args(argv)
    cfg = _config(args)
    if args.command == "run":
        try:
            if args.script == "-":
                source = sys.stdin.read()
            else:
                with open(args.script, encoding="utf-8") as fh:
                    source = fh.read()
        except OSError as exc:
            rep = _Report(cfg.porcelain)
            rep.text(f"error: cannot read {args.script}: {exc.strerror}")
            rep.record(error="unreadable-script")
            _finish(rep, INPUT_ERROR)
            code, text = INPUT_ERROR, rep.render()
        else:
            code, text = run_source(source, cfg)
    else:
        from .dsl import parse

        code, text = run(parse("paper-audit\n"), cfg)
    sys.stdout.write(text)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command-line entry point.

Exit status: 0 when every check and assertion passes, 1 when one fails,
2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from . import handlebody, plumbing, script, surgery
from .errors import KirbyError
from .invariants import format_summary, summary

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--report", metavar="PATH", help="also write the output to PATH")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="kirbycalc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common], help="emit a decomposition file")
    b.add_argument("kind", choices=["cp", "bp", "chain"])
    b.add_argument("values", nargs="+", type=int)
    b.add_argument("-o", "--output", metavar="FILE")

    inv = sub.add_parser("invariants", parents=[common], help="invariants of a decomposition file")
    inv.add_argument("file")

    lens = sub.add_parser("lens", parents=[common], help="lens space bounded by a plumbing chain")
    lens.add_argument("kind", choices=["chain"])
    lens.add_argument("weights", nargs="+", type=int)

    run = sub.add_parser("run", parents=[common], help="execute a move script")
    run.add_argument("script")

    sub.add_parser("repl", parents=[common], help="interactive move interpreter")

    ver = sub.add_parser("verify", parents=[common], help="certify E(n)_{p,q} handle counts")
    ver.add_argument("target", choices=["enpq"])
    ver.add_argument("--n", type=int, required=True)
    ver.add_argument("--p", type=int)
    ver.add_argument("--q", type=int)
    ver.add_argument("--all-proved", action="store_true",
                     help="sweep n = 1..N over every established (p, q) pair")
    ver.add_argument("--allow-conjectural", action="store_true",
                     help="accept (p, q) outside the established pairs")
    return parser


class _Output:
    def __init__(self, args):
        self.args = args
        self.chunks: List[str] = []

    def emit(self, text: str):
        self.chunks.append(text)
        print(text)

    def emit_json(self, data):
        self.emit(json.dumps(data, indent=2, ensure_ascii=False))

    def close(self):
        if self.args.report:
            with open(self.args.report, "w", encoding="utf-8") as fh:
                fh.write("\n".join(self.chunks) + "\n")


def _cmd_build(args, out: _Output) -> int:
    if args.kind == "chain":
        X = plumbing.from_plumbing(plumbing.PlumbingGraph.chain(args.values))
    else:
        if len(args.values) != 1:
            raise KirbyError(f"build {args.kind} takes exactly one integer")
        X = (plumbing.c_p if args.kind == "cp" else plumbing.b_p)(args.values[0])
    text = handlebody.dumps(X)
    if args.output:
        handlebody.save(X, args.output)
    else:
        out.emit(text.rstrip("\n"))
    return EXIT_OK


def _cmd_invariants(args, out: _Output) -> int:
    info = summary(handlebody.load(args.file))
    if args.json:
        out.emit_json(info)
    else:
        out.emit(format_summary(info))
    return EXIT_OK


def _cmd_lens(args, out: _Output) -> int:
    L = plumbing.lens_space_of_chain(args.weights)
    if args.json:
        out.emit_json({"weights": args.weights, "lens_space": str(L), "p": L.p, "q": L.q})
    else:
        out.emit(str(L))
    return EXIT_OK


def _cmd_run(args, out: _Output) -> int:
    with open(args.script, encoding="utf-8") as fh:
        text = fh.read()
    try:
        program = script.parse(text)
    except script.ScriptSyntaxError as exc:
        print(f"{args.script}: syntax error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    base = os.path.dirname(os.path.abspath(args.script))
    session = script.Session(base_dir=base)
    status = EXIT_OK
    try:
        for statement in program:
            session.run(statement)
    except script.ScriptRuntimeError:
        status = EXIT_FAILED
    transcript = session.transcript
    if args.json:
        out.emit_json(transcript.to_dict())
    else:
        out.emit(transcript.to_text())
    if transcript.error:
        print(f"{args.script}: {transcript.error}", file=sys.stderr)
    return status


def _cmd_verify(args, out: _Output) -> int:
    if args.all_proved:
        grid = [(n, p, q) for n in range(1, args.n + 1) for p, q in surgery.PROVED_PAIRS]
    else:
        if args.p is None or args.q is None:
            raise KirbyError("verify enpq needs --p and --q (or --all-proved)")
        grid = [(args.n, args.p, args.q)]
    certs = [surgery.verify_main_theorem(n, p, q, args.allow_conjectural) for n, p, q in grid]
    if args.json:
        out.emit_json(certs[0].to_dict() if len(certs) == 1 else [c.to_dict() for c in certs])
    else:
        blocks = [f"== E({n})_{{{p},{q}}} ==\n{c.to_text()}" for (n, p, q), c in zip(grid, certs)]
        out.emit("\n\n".join(blocks))
    return EXIT_OK if all(c.passed for c in certs) else EXIT_FAILED


def _cmd_repl(args, out: _Output) -> int:
    return script.repl()


COMMANDS = {"build": _cmd_build, "invariants": _cmd_invariants, "lens": _cmd_lens,
            "run": _cmd_run, "repl": _cmd_repl, "verify": _cmd_verify}


def dispatch(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    out = _Output(args)
    try:
        status = COMMANDS[args.command](args, out)
    except (KirbyError, OSError) as exc:
        print(f"kirbycalc {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out.close()
    return status


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()

"""A small move-script language for reproducible Kirby-calculus sessions.

One statement per line, ``#`` comments::

    load cp 3
    assert det 9
    slide k2 over -k1
    assert signature 0 0 2

The interpreter keeps a single current decomposition and records a
transcript entry per executed statement.  Execution stops at the first
error or failed assertion.
"""
from __future__ import annotations

import json
import os
import re
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, TextIO, Tuple

from . import handlebody, moves, plumbing, surgery
from .errors import DomainError, KirbyError
from .handlebody import HandleDecomposition, counts
from .intalg import AbelianGroup
from .invariants import format_summary, summary

COMMANDS = ("load", "slide", "blowup", "blowdown", "cancel12", "add3", "add4",
            "rbd", "logt", "invariants", "counts", "assert", "save")
LOAD_KINDS = ("cp", "bp", "chain", "file", "en_p")
ASSERT_KINDS = ("counts", "chi", "h1", "lens", "det", "signature")

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_INT = re.compile(r"[+-]?[0-9]+\Z")
_TOKEN = re.compile(r'"(?:[^"\\\n]|\\.)*"|"|[^\s#"]+|#')


class ScriptSyntaxError(KirbyError):
    def __init__(self, line: int, col: int, expected, found: str = None):
        self.line, self.col = line, col
        self.expected = frozenset(expected)
        self.found = found
        what = " or ".join(sorted(self.expected))
        tail = f", found {found!r}" if found is not None else ", found end of line"
        super().__init__(f"line {line}, column {col}: expected {what}{tail}")


class ScriptRuntimeError(KirbyError):
    """A statement failed; carries its position and the partial transcript."""

    def __init__(self, statement: "Statement", cause: Exception, transcript: "Transcript" = None):
        self.line, self.col = statement.line, statement.col
        self.statement = statement
        self.cause = cause
        self.transcript = transcript
        super().__init__(f"line {self.line}, column {self.col}: {format_statement(statement)}: {cause}")


class ScriptAssertionError(ScriptRuntimeError):
    def __init__(self, statement, expected, actual, transcript=None):
        self.expected, self.actual = expected, actual
        super().__init__(statement, AssertionError(f"expected {expected}, got {actual}"), transcript)


@dataclass(frozen=True)
class Statement:
    command: str
    args: Tuple = ()
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class MoveScript:
    statements: Tuple[Statement, ...] = ()

    def __len__(self):
        return len(self.statements)

    def __iter__(self):
        return iter(self.statements)


# ---------------------------------------------------------------------------
# Parsing


@dataclass
class _Tok:
    text: str
    col: int
    quoted: bool = False


def _tokenize(line: str, lineno: int) -> List[_Tok]:
    out = []
    for m in _TOKEN.finditer(line):
        text = m.group()
        if text == "#":
            break
        if text == '"':
            raise ScriptSyntaxError(lineno, m.start() + 1, {"closing quote"}, line[m.start():])
        if text.startswith('"'):
            try:
                out.append(_Tok(json.loads(text), m.start() + 1, True))
            except ValueError:
                raise ScriptSyntaxError(lineno, m.start() + 1, {"string"}, text) from None
        else:
            out.append(_Tok(text, m.start() + 1))
    return out


class _LineParser:
    def __init__(self, tokens: List[_Tok], lineno: int, end_col: int):
        self.tokens = tokens
        self.pos = 0
        self.lineno = lineno
        self.end_col = end_col

    def fail(self, expected):
        if self.pos < len(self.tokens):
            tok = self.tokens[self.pos]
            raise ScriptSyntaxError(self.lineno, tok.col, expected, tok.text)
        raise ScriptSyntaxError(self.lineno, self.end_col, expected)

    def peek(self) -> Optional[_Tok]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> _Tok:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def keyword(self, options) -> str:
        tok = self.peek()
        if tok is None or tok.quoted or tok.text not in options:
            self.fail({f"'{o}'" for o in options})
        return self.take().text

    def integer(self) -> int:
        tok = self.peek()
        if tok is None or tok.quoted or not _INT.match(tok.text):
            self.fail({"integer"})
        try:
            value = int(tok.text)
        except ValueError:  # beyond the interpreter's digit limit
            self.fail({"integer of at most 4300 digits"})
        self.take()
        return value

    def label(self, allow_negated=False) -> Tuple[str, int]:
        tok = self.peek()
        text = tok.text if tok is not None and not tok.quoted else ""
        sign = 1
        if allow_negated and text.startswith("-"):
            sign, text = -1, text[1:]
        if not _IDENT.match(text):
            self.fail({"label", "-label"} if allow_negated else {"label"})
        self.take()
        return text, sign

    def path(self) -> str:
        tok = self.peek()
        if tok is None:
            self.fail({"path"})
        return self.take().text

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def end(self):
        if not self.at_end():
            self.fail({"end of line"})


def _parse_line(tokens: List[_Tok], lineno: int, end_col: int) -> Statement:
    P = _LineParser(tokens, lineno, end_col)
    col = tokens[0].col
    cmd = P.keyword(COMMANDS)
    args: Tuple
    if cmd == "load":
        kind = P.keyword(LOAD_KINDS)
        if kind in ("cp", "bp"):
            args = (kind, P.integer())
        elif kind == "chain":
            weights = [P.integer()]
            while not P.at_end():
                weights.append(P.integer())
            args = (kind, *weights)
        elif kind == "file":
            args = (kind, P.path())
        else:
            n, p = P.integer(), P.integer()
            args = (kind, n, p)
            if not P.at_end():
                P.keyword(("conjectural",))
                args += ("conjectural",)
    elif cmd == "slide":
        i, _ = P.label()
        P.keyword(("over",))
        j, sign = P.label(allow_negated=True)
        args = (i, j, sign)
    elif cmd == "blowup":
        sign = -1
        if not P.at_end():
            tok = P.peek()
            sign = P.integer()
            if sign not in (1, -1):
                raise ScriptSyntaxError(lineno, tok.col, {"'1'", "'-1'"}, tok.text)
        args = (sign,)
    elif cmd == "blowdown":
        label, _ = P.label()
        args = (label,)
        if not P.at_end():
            P.keyword(("strict",))
            args += ("strict",)
    elif cmd == "cancel12":
        d, _ = P.label()
        k, _ = P.label()
        args = (d, k)
    elif cmd in ("add3", "rbd", "logt"):
        args = (P.integer(),)
    elif cmd in ("add4", "invariants", "counts"):
        args = ()
    elif cmd == "save":
        args = (P.path(),)
    else:  # assert
        kind = P.keyword(ASSERT_KINDS)
        if kind == "counts":
            args = (kind, *(P.integer() for _ in range(5)))
        elif kind in ("chi", "det"):
            args = (kind, P.integer())
        elif kind == "lens":
            args = (kind, P.integer(), P.integer())
        elif kind == "signature":
            args = (kind, P.integer(), P.integer(), P.integer())
        else:
            values = [P.integer()]
            while not P.at_end():
                values.append(P.integer())
            args = (kind, *values)
    P.end()
    return Statement(cmd, args, lineno, col)


def parse(text: str) -> MoveScript:
    """Parse script text.  Raises :class:`ScriptSyntaxError` on any malformed line."""
    statements = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(line, lineno)
        if not tokens:
            continue
        statements.append(_parse_line(tokens, lineno, len(line) + 1))
    return MoveScript(tuple(statements))


def _quote_path(path: str) -> str:
    if path and re.fullmatch(r'[^\s#"]+', path):
        return path
    return json.dumps(path)


def format_statement(s: Statement) -> str:
    cmd, args = s.command, s.args
    if cmd == "slide":
        i, j, sign = args
        return f"slide {i} over {'-' if sign < 0 else ''}{j}"
    if cmd == "load" and args[0] == "file":
        return f"load file {_quote_path(args[1])}"
    if cmd == "save":
        return f"save {_quote_path(args[0])}"
    return " ".join([cmd, *map(str, args)])


def format(script: MoveScript) -> str:  # noqa: A001 - mirrors parse()
    """Canonical text: one statement per line, single spaces, no comments."""
    return "\n".join(format_statement(s) for s in script.statements)


# ---------------------------------------------------------------------------
# Execution


@dataclass(frozen=True)
class TranscriptEntry:
    echo: str
    counts: Tuple[int, int, int, int, int]
    chi: int
    report: Optional[str] = None
    line: int = 0


@dataclass
class Transcript:
    entries: List[TranscriptEntry] = field(default_factory=list)
    error: Optional[str] = None

    def __len__(self):
        return len(self.entries)

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_text(self) -> str:
        lines = []
        for n, e in enumerate(self.entries, start=1):
            lines.append(f"[{n}] {e.echo}  ->  counts {e.counts}, chi {e.chi}")
            if e.report:
                lines.extend("    " + r for r in e.report.splitlines())
        if self.error:
            lines.append(f"error: {self.error}")
        return "\n".join(lines)

    def to_dict(self) -> Dict:
        return {
            "entries": [{"line": e.line, "statement": e.echo, "counts": list(e.counts),
                         "chi": e.chi, "report": e.report} for e in self.entries],
            "ok": self.ok,
            "error": self.error,
        }


class Session:
    """Interpreter state: one current decomposition and its transcript."""

    def __init__(self, initial: HandleDecomposition = None, base_dir: str = None):
        self.current = initial if initial is not None else handlebody.empty_decomposition()
        self.base_dir = base_dir
        self.transcript = Transcript()
        self.certificates: List[surgery.Certificate] = []

    def _path(self, path: str) -> str:
        if self.base_dir and not os.path.isabs(path):
            return os.path.join(self.base_dir, path)
        return path

    def run(self, statement: Statement) -> TranscriptEntry:
        try:
            report = self._apply(statement)
        except ScriptAssertionError as exc:
            exc.transcript = self.transcript
            self.transcript.error = str(exc)
            raise
        except (KirbyError, ValueError, ArithmeticError, OSError) as exc:
            err = ScriptRuntimeError(statement, exc, self.transcript)
            self.transcript.error = str(err)
            raise err from exc
        c = counts(self.current)
        entry = TranscriptEntry(format_statement(statement), c.as_tuple(), c.chi, report,
                                statement.line)
        self.transcript.entries.append(entry)
        return entry

    def _apply(self, s: Statement) -> Optional[str]:
        X = self.current
        cmd, args = s.command, s.args
        if cmd == "load":
            kind = args[0]
            if kind == "cp":
                self.current = plumbing.c_p(args[1])
            elif kind == "bp":
                self.current = plumbing.b_p(args[1])
            elif kind == "chain":
                self.current = plumbing.from_plumbing(plumbing.PlumbingGraph.chain(args[1:]))
            elif kind == "file":
                self.current = handlebody.load(self._path(args[1]))
            else:
                shape = surgery.elliptic_en_p(args[1], args[2], conjectural=len(args) > 3)
                self.current = shape.host
        elif cmd == "slide":
            self.current = moves.handle_slide(X, args[0], args[1], args[2])
        elif cmd == "blowup":
            self.current = moves.blow_up(X, args[0])
        elif cmd == "blowdown":
            self.current = moves.blow_down(X, args[0], strict=len(args) > 1)
        elif cmd == "cancel12":
            self.current = moves.cancel_12(X, args[0], args[1])
        elif cmd == "add3":
            self.current = handlebody.add_three_handles(X, args[0])
        elif cmd == "add4":
            self.current = handlebody.add_four_handle(X)
        elif cmd == "rbd":
            shapes = surgery.find_cp_chains(X, args[0])
            if not shapes:
                raise DomainError(f"no copy of C_{args[0]} with an attachment handle found")
            self.current, cert = surgery.rational_blowdown(shapes[0])
            return self._certified(cert)
        elif cmd == "logt":
            shapes = surgery.find_cusp_shapes(X)
            if not shapes:
                raise DomainError("no cusp neighbourhood with an attachment handle found")
            self.current, cert = surgery.log_transform(shapes[0], args[0])
            return self._certified(cert)
        elif cmd == "invariants":
            return format_summary(summary(X))
        elif cmd == "counts":
            return counts(X).union_expression()
        elif cmd == "save":
            handlebody.save(X, self._path(args[0]))
        else:
            self._assert(s)
        return None

    def _certified(self, cert) -> str:
        self.certificates.append(cert)
        if not cert.passed:
            names = ", ".join(c.name for c in cert.failures())
            raise DomainError(f"internal checks did not pass: {names}")
        return f"{len(cert.checks)} checks pass"

    def _assert(self, s: Statement) -> None:
        X = self.current
        kind, values = s.args[0], s.args[1:]
        if kind == "counts":
            expected, actual = tuple(values), counts(X).as_tuple()
        elif kind == "chi":
            expected, actual = values[0], counts(X).chi
        elif kind == "det":
            expected, actual = values[0], handlebody.linking_determinant(X)
        elif kind == "signature":
            expected, actual = tuple(values), handlebody.linking_signature(X)
        elif kind == "h1":
            expected, actual = AbelianGroup(values[0], values[1:]), handlebody.homology_h1(X)
        else:
            expected = plumbing.LensSpace(values[0], values[1])
            actual = plumbing.boundary_lens_space(X)
            if actual is not None and plumbing.lens_equivalent(expected, actual):
                return
            raise ScriptAssertionError(s, expected, actual if actual is not None else "not a lens space")
        if expected != actual:
            raise ScriptAssertionError(s, expected, actual)


def execute(script: MoveScript, initial: HandleDecomposition = None,
            base_dir: str = None) -> Transcript:
    """Run every statement; raises :class:`ScriptRuntimeError` at the first failure.

    The raised error's ``transcript`` holds the entries executed so far.
    """
    session = Session(initial, base_dir)
    for statement in script:
        session.run(statement)
    return session.transcript


def _prompt(X: HandleDecomposition) -> str:
    c = counts(X)
    return f"{c.as_tuple()} chi={c.chi}> "


def repl(stdin: TextIO = None, stdout: TextIO = None, initial: HandleDecomposition = None) -> int:
    """Line-by-line interpreter.  Errors are reported and the session continues.

    Returns 0 if every assertion entered passed, 1 otherwise.
    """
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    session = Session(initial, os.getcwd())
    status = 0
    lineno = 0
    while True:
        stdout.write(_prompt(session.current))
        stdout.flush()
        line = stdin.readline()
        if not line:
            stdout.write("\n")
            return status
        lineno += 1
        if line.strip() in ("quit", "exit"):
            return status
        try:
            tokens = _tokenize(line.rstrip("\n"), lineno)
            if not tokens:
                continue
            statement = _parse_line(tokens, lineno, len(line.rstrip("\n")) + 1)
            entry = session.run(statement)
        except ScriptSyntaxError as exc:
            stdout.write(f"syntax error: {exc}\n")
            continue
        except ScriptRuntimeError as exc:
            session.transcript.error = None
            if isinstance(exc, ScriptAssertionError):
                status = 1
            stdout.write(f"error: {exc}\n")
            continue
        if entry.report:
            stdout.write(entry.report + "\n")

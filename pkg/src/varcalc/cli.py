"""``varcalc`` command line front end.

Exit status: 0 on success, 2 on a well-defined negative verdict (Helmholtz
failure, nontrivial Lagrangian), 1 on usage, parse and internal errors.
Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence

from . import exprio
from .errors import HelmholtzFailed, NotTrivial, VarCalcError
from .forms import Form, exterior_d, horizontal_d, vertical_d, volume_form
from .inverse import triviality_decompose, volterra_lagrangian
from .jetalg import Bundle, DiffPoly
from .variational import SourceForm, decompose, delta, euler_lagrange, first_variation, helmholtz_check, tau

VERBS = ("d", "dh", "dv", "tau", "delta", "el", "helmholtz", "trivial", "inverse", "decompose", "firstvar")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERDICT = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="varcalc", description="Variational bicomplex calculator.")
    parser.add_argument("verb", choices=VERBS)
    parser.add_argument("expression", nargs="?", help="input expression; read from stdin when omitted")
    parser.add_argument("--base-dim", "-n", type=int, default=1, help="base dimension n (default 1)")
    parser.add_argument("--fiber-dim", "-p", type=int, default=1, help="fiber dimension p (default 1)")
    parser.add_argument("--format", choices=("text", "wire"), default="text")
    parser.add_argument("--max-order", type=int, default=None,
                        help="highest jet order tried when searching d_H-potentials")
    return parser


@dataclass
class CliResult:
    code: int
    out: str
    err: str


class _Output:
    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines: List[str] = []
        self.doc: dict = {}

    def verdict(self, text: str):
        self.lines.append(text)
        self.doc["verdict"] = text

    def form(self, name: str, phi: Form):
        self.lines.append(f"{name} = {exprio.print_canonical(phi)}")
        self.doc.setdefault("results", {})[name] = exprio.to_wire(phi)

    def source(self, eps: SourceForm):
        n = eps.bundle.base_dim
        for i, E in enumerate(eps.components, start=1):
            self.lines.append(f"E_{i} = {exprio.print_poly(E, n)}")
        self.doc.setdefault("results", {})["E"] = exprio.to_wire(eps.to_form())

    def render(self) -> str:
        if self.fmt == "wire":
            return json.dumps(self.doc, sort_keys=True, separators=(",", ":")) + "\n"
        return "".join(line + "\n" for line in self.lines)


def _read_form(text: str, bundle: Bundle) -> Form:
    if text.lstrip().startswith("{"):
        return exprio.loads_wire(text, bundle)
    return exprio.parse(text, bundle)


def _is_function(phi: Form) -> bool:
    return all(w == () for w in phi.terms)


def _read_density(text: str, bundle: Bundle) -> Form:
    phi = _read_form(text, bundle)
    if _is_function(phi):
        return volume_form(bundle) * phi.terms.get((), DiffPoly.const(0))
    return phi


def _read_source(text: str, bundle: Bundle) -> SourceForm:
    """A source form, or ``;``-separated bare components ``E_1; ...; E_p``."""
    if text.lstrip().startswith("{"):
        return SourceForm.from_form(exprio.loads_wire(text, bundle))
    parts = [exprio.parse(part, bundle) for part in text.split(";")]
    if len(parts) == 1 and not _is_function(parts[0]):
        return SourceForm.from_form(parts[0])
    if not all(_is_function(p) for p in parts):
        raise UsageError("source components must be functions")
    if len(parts) != bundle.fiber_dim:
        raise UsageError(f"expected {bundle.fiber_dim} ';'-separated components, got {len(parts)}")
    return SourceForm(bundle, tuple(p.terms.get((), DiffPoly.const(0)) for p in parts))


def _execute(args, text: str, out: _Output) -> int:
    bundle = Bundle(args.base_dim, args.fiber_dim)
    verb = args.verb
    if verb in ("d", "dh", "dv", "tau", "delta"):
        phi = _read_form(text, bundle)
        op = {"d": exterior_d, "dh": horizontal_d, "dv": vertical_d, "tau": tau, "delta": delta}[verb]
        out.form("result", op(phi))
        return EXIT_OK
    if verb == "el":
        out.source(euler_lagrange(_read_density(text, bundle)))
        return EXIT_OK
    if verb == "helmholtz":
        check = helmholtz_check(_read_source(text, bundle))
        out.verdict("PASS" if check.passes else "FAIL")
        if not check.passes:
            out.form("obstruction", check.obstruction)
            return EXIT_VERDICT
        return EXIT_OK
    if verb == "inverse":
        try:
            L = volterra_lagrangian(_read_source(text, bundle))
        except HelmholtzFailed as exc:
            out.verdict("FAIL")
            out.form("obstruction", exc.obstruction)
            return EXIT_VERDICT
        out.form("L", L)
        return EXIT_OK
    if verb == "trivial":
        try:
            xi = triviality_decompose(_read_density(text, bundle), max_order=args.max_order)
        except NotTrivial as exc:
            out.verdict("NOT TRIVIAL")
            out.source(exc.euler_lagrange)
            return EXIT_VERDICT
        out.form("xi", xi)
        return EXIT_OK
    if verb == "decompose":
        dec = decompose(_read_form(text, bundle), max_order=args.max_order)
        out.form("source", dec.source_part)
        out.form("potential", dec.potential)
        return EXIT_OK
    if verb == "firstvar":
        eps, phi = first_variation(_read_density(text, bundle), max_order=args.max_order)
        out.source(eps)
        out.form("phi", phi)
        return EXIT_OK
    raise UsageError(f"unknown verb {verb!r}")  # pragma: no cover


_VALUED = ("--base-dim", "-n", "--fiber-dim", "-p", "--format", "--max-order")
_FLAGS = ("-h", "--help")


def _split_argv(argv: Sequence[str]) -> List[str]:
    # Expressions such as "-1 * u1_xx" must not be mistaken for options.
    options, positionals = [], []
    it = iter(argv)
    for tok in it:
        if tok == "--":
            positionals.extend(it)
            break
        if tok in _FLAGS or tok.split("=", 1)[0] in _VALUED and "=" in tok:
            options.append(tok)
        elif tok in _VALUED:
            options.append(tok)
            options.append(next(it, ""))
        elif tok.startswith("--"):
            options.append(tok)
        else:
            positionals.append(tok)
    return options + ["--"] + positionals


def run(argv: Sequence[str], stdin: Optional[io.TextIOBase] = None) -> CliResult:
    """Run one invocation; returns the exit code and both output streams."""
    try:
        args = build_parser().parse_args(_split_argv(argv))
        text = args.expression
        if text is None:
            text = (stdin if stdin is not None else sys.stdin).read()
        out = _Output(args.format)
        code = _execute(args, text, out)
        return CliResult(code, out.render(), "")
    except SystemExit as exc:  # --help
        return CliResult(exc.code or 0, "", "")
    except UsageError as exc:
        return CliResult(EXIT_ERROR, "", f"varcalc: usage error: {exc}\n")
    except (VarCalcError, ValueError, IndexError) as exc:
        return CliResult(EXIT_ERROR, "", f"varcalc: error: {type(exc).__name__}: {exc}\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    result = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(result.out)
    sys.stderr.write(result.err)
    return result.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

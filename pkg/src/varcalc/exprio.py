"""Text syntax and JSON wire format for forms.

Grammar (``*``, ``/`` and ``^`` bind tighter than ``+`` and ``-``; all
binary operators are left associative)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '^' | '/') unary)*
    unary  := ('-' | '+') unary | atom
    atom   := INT | VAR | '(' expr ')'
    VAR    := 'x' N | 'u' N suffix? | 'dx' N | 'th' N suffix?
    suffix := '_' [xyz]+ | '_{' N (',' N)* '}'

``*`` and ``^`` are both the graded wedge product (for functions that is
ordinary multiplication).  The right operand of ``/`` must be a nonzero
constant.  Letter suffixes map ``x, y, z`` to base indices 1, 2, 3.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import List, Optional, Tuple

from .errors import ParseError, WireFormatError
from .forms import DX, CoVector, Form, _Acc, dx, theta, wedge, wedge_key
from .jetalg import BASE, Bundle, DiffPoly, JetVariable, MultiIndex, base_var, fiber_var, mono_key

WIRE_VERSION = 1
LETTERS = "xyz"

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<var>(?:dx|th|x|u)\d+(?:_(?:[A-Za-z]+|\{[^}]*\}))?)
  | (?P<op>[-+*^/()])
    """,
    re.VERBOSE,
)
_VAR = re.compile(r"(dx|th|x|u)(\d+)(?:_([A-Za-z]+|\{[^}]*\}))?$")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", pos))
    return tokens


def _parse_suffix(suffix: Optional[str], bundle: Bundle, pos: int) -> MultiIndex:
    if not suffix:
        return MultiIndex()
    n = bundle.base_dim
    if suffix.startswith("{"):
        body = suffix[1:-1].strip()
        try:
            indices = [int(t) for t in body.split(",")] if body else []
        except ValueError:
            raise ParseError(f"bad numeric multi-index {suffix!r}", pos) from None
    else:
        if n > len(LETTERS):
            raise ParseError(f"letter indices need n <= 3 (n = {n}); use _{{1,2,...}}", pos)
        indices = []
        for ch in suffix:
            if ch not in LETTERS:
                raise ParseError(f"unknown index letter {ch!r}", pos)
            indices.append(LETTERS.index(ch) + 1)
    for lam in indices:
        if not 1 <= lam <= n:
            raise ParseError(f"base index {lam} out of range 1..{n}", pos)
    return MultiIndex(indices)


class _Parser:
    def __init__(self, text: str, bundle: Bundle):
        self.text = text
        self.bundle = bundle
        self.tokens = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def take(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos, self.text)

    def parse(self) -> Form:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0, self.text)
        out = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos, self.text)
        return out

    def expr(self) -> Form:
        out = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> Form:
        out = self.unary()
        while self.peek()[1] in ("*", "^", "/"):
            op = self.take()[1]
            pos = self.peek()[2]
            rhs = self.unary()
            if op == "/":
                if rhs.degree() not in (0, None) or not _is_constant(rhs):
                    raise ParseError("divisor must be a constant", pos, self.text)
                c = _constant(rhs)
                if c == 0:
                    raise ParseError("division by zero", pos, self.text)
                out = out * (Fraction(1) / c)
            else:
                out = wedge(out, rhs)
        return out

    def unary(self) -> Form:
        val = self.peek()[1]
        if val == "-":
            self.take()
            return -self.unary()
        if val == "+":
            self.take()
            return self.unary()
        return self.atom()

    def atom(self) -> Form:
        kind, val, pos = self.take()
        b = self.bundle
        if kind == "int":
            return Form.function(b, int(val))
        if kind == "var":
            m = _VAR.match(val)
            if m is None:
                raise ParseError(f"malformed variable {val!r}", pos, self.text)
            head, idx, suffix = m.group(1), int(m.group(2)), m.group(3)
            multi = _parse_suffix(suffix, b, pos)
            try:
                if head in ("x", "dx"):
                    if suffix:
                        raise ParseError(f"{head} takes no derivative suffix", pos, self.text)
                    b.check_base(idx)
                    return Form.function(b, DiffPoly.x(idx)) if head == "x" else Form.dx(b, idx)
                b.check_fiber(idx)
                if head == "u":
                    return Form.function(b, DiffPoly.var(fiber_var(idx, multi)))
                return Form.theta(b, idx, multi)
            except IndexError as exc:
                raise ParseError(str(exc), pos, self.text) from None
        if val == "(":
            out = self.expr()
            self.expect(")")
            return out
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos, self.text)


def _is_constant(phi: Form) -> bool:
    return all(w == () and f.is_constant() for w, f in phi.terms.items())


def _constant(phi: Form):
    f = phi.terms.get(())
    return 0 if f is None else f.constant_value()


def parse(text: str, bundle: Bundle) -> Form:
    """Parse ``text`` into a :class:`Form` on ``bundle``."""
    return _Parser(text, bundle).parse()


def parse_poly(text: str, bundle: Bundle) -> DiffPoly:
    """Parse a 0-form and return its coefficient."""
    phi = parse(text, bundle)
    if any(w for w in phi.terms):
        raise ParseError("expected a function, found covectors", 0, text)
    return phi.terms.get((), DiffPoly.const(0))


# -- printing -----------------------------------------------------------------


def _suffix(multi: MultiIndex, n: int) -> str:
    if not multi:
        return ""
    if n <= len(LETTERS):
        return "_" + "".join(LETTERS[lam - 1] for lam in multi)
    return "_{" + ",".join(str(lam) for lam in multi) + "}"


def var_name(v: JetVariable, n: int) -> str:
    if v.kind == BASE:
        return f"x{v.index}"
    return f"u{v.index}{_suffix(v.multi, n)}"


def covector_name(c: CoVector, n: int) -> str:
    if c.kind == DX:
        return f"dx{c.index}"
    return f"th{c.index}{_suffix(c.multi, n)}"


def _format_scalar(c) -> str:
    if isinstance(c, Fraction) and c.denominator != 1:
        return f"{c.numerator}/{c.denominator}"
    return str(int(c))


def print_poly(f: DiffPoly, n: int) -> str:
    """Canonical text of a function."""
    return print_canonical(Form._raw(Bundle(n, 1), {(): f} if f else {}))


def print_canonical(phi: Form) -> str:
    """Deterministic text; ``parse(print_canonical(phi)) == phi``."""
    n = phi.bundle.base_dim
    pieces = []
    for w in sorted(phi.terms, key=wedge_key):
        f = phi.terms[w]
        for m in sorted(f.terms, key=mono_key):
            c = f.terms[m]
            parts = []
            if c != 1 or (not m and not w):
                parts.append(_format_scalar(c))
            parts.extend(var_name(v, n) for v in m)
            if w:
                parts.append(" ^ ".join(covector_name(cv, n) for cv in w))
            pieces.append(" * ".join(parts))
    return " + ".join(pieces) if pieces else "0"


# -- wire format --------------------------------------------------------------


def _multi_counts(multi: MultiIndex, n: int) -> List[int]:
    return list(multi.counts(n))


def _var_doc(v: JetVariable, n: int) -> dict:
    if v.kind == BASE:
        return {"kind": "x", "index": v.index}
    return {"kind": "u", "index": v.index, "multi": _multi_counts(v.multi, n)}


def _cov_doc(c: CoVector, n: int) -> dict:
    if c.kind == DX:
        return {"kind": "dx", "index": c.index}
    return {"kind": "th", "index": c.index, "multi": _multi_counts(c.multi, n)}


def _rational(c) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def to_wire(phi: Form) -> dict:
    """JSON-compatible document for ``phi`` (schema version 1)."""
    n = phi.bundle.base_dim
    terms = []
    for w in sorted(phi.terms, key=wedge_key):
        f = phi.terms[w]
        terms.append({
            "wedge": [_cov_doc(c, n) for c in w],
            "coeff_monomials": [
                {"variables": [_var_doc(v, n) for v in m], "rational": _rational(f.terms[m])}
                for m in sorted(f.terms, key=mono_key)
            ],
        })
    return {
        "version": WIRE_VERSION,
        "bundle": {"n": phi.bundle.base_dim, "p": phi.bundle.fiber_dim},
        "terms": terms,
    }


def dumps_wire(phi: Form) -> str:
    """Byte-stable serialization of :func:`to_wire`."""
    return json.dumps(to_wire(phi), sort_keys=True, separators=(",", ":"))


def _field(doc, key, kind):
    if not isinstance(doc, dict) or key not in doc:
        raise WireFormatError(f"missing field {key!r}")
    value = doc[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise WireFormatError(f"field {key!r} must be an integer")
    if kind is not int and not isinstance(value, kind):
        raise WireFormatError(f"field {key!r} must be {kind.__name__}")
    return value


def _parse_multi(doc, n: int) -> MultiIndex:
    counts = _field(doc, "multi", list)
    if len(counts) != n or any(isinstance(c, bool) or not isinstance(c, int) or c < 0 for c in counts):
        raise WireFormatError(f"multi-index must be {n} nonnegative counts, got {counts!r}")
    return MultiIndex.from_counts(counts)


def _parse_rational(text) -> Fraction:
    if not isinstance(text, str) or not re.fullmatch(r"-?\d+/\d+", text):
        raise WireFormatError(f"rational must be a 'num/den' string, got {text!r}")
    num, den = text.split("/")
    if int(den) == 0:
        raise WireFormatError("zero denominator")
    return Fraction(int(num), int(den))


def from_wire(doc: dict, bundle: Optional[Bundle] = None) -> Form:
    """Inverse of :func:`to_wire`.  When ``bundle`` is given it must match."""
    if not isinstance(doc, dict):
        raise WireFormatError("document must be an object")
    version = _field(doc, "version", int)
    if version != WIRE_VERSION:
        raise WireFormatError(f"unsupported wire version {version}")
    bdoc = _field(doc, "bundle", dict)
    try:
        b = Bundle(_field(bdoc, "n", int), _field(bdoc, "p", int))
    except ValueError as exc:
        raise WireFormatError(str(exc)) from None
    if bundle is not None and b != bundle:
        raise WireFormatError(f"bundle mismatch: document has n={b.base_dim}, p={b.fiber_dim}, "
                              f"expected n={bundle.base_dim}, p={bundle.fiber_dim}")
    n = b.base_dim
    acc = _Acc(b)
    try:
        for tdoc in _field(doc, "terms", list):
            factors = []
            for cdoc in _field(tdoc, "wedge", list):
                kind = _field(cdoc, "kind", str)
                idx = _field(cdoc, "index", int)
                if kind == "dx":
                    b.check_base(idx)
                    factors.append(dx(idx))
                elif kind == "th":
                    b.check_fiber(idx)
                    factors.append(theta(idx, _parse_multi(cdoc, n)))
                else:
                    raise WireFormatError(f"unknown covector kind {kind!r}")
            coeff = {}
            for mdoc in _field(tdoc, "coeff_monomials", list):
                mono = []
                for vdoc in _field(mdoc, "variables", list):
                    kind = _field(vdoc, "kind", str)
                    idx = _field(vdoc, "index", int)
                    if kind == "x":
                        b.check_base(idx)
                        mono.append(base_var(idx))
                    elif kind == "u":
                        b.check_fiber(idx)
                        mono.append(fiber_var(idx, _parse_multi(vdoc, n)))
                    else:
                        raise WireFormatError(f"unknown variable kind {kind!r}")
                key = tuple(sorted(mono))
                coeff[key] = coeff.get(key, 0) + _parse_rational(_field(mdoc, "rational", str))
            acc.add_raw(tuple(factors), DiffPoly(coeff))
    except IndexError as exc:
        raise WireFormatError(str(exc)) from None
    return acc.form()


def loads_wire(text: str, bundle: Optional[Bundle] = None) -> Form:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WireFormatError(f"invalid JSON: {exc}") from None
    return from_wire(doc, bundle)


__all__ = [
    "WIRE_VERSION",
    "covector_name",
    "dumps_wire",
    "from_wire",
    "loads_wire",
    "parse",
    "parse_poly",
    "print_canonical",
    "print_poly",
    "to_wire",
    "var_name",
]

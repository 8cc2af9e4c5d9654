"""Bigraded exterior forms over :class:`DiffPoly` in the contact basis.

A form is a finite sum ``f * c_1 ^ ... ^ c_m`` where the ``c_j`` are the
horizontal covectors ``dx^lam`` and the contact covectors ``th^i_Lam``.
Wedge monomials are stored in one canonical order with the sign absorbed
into the coefficient: contact factors first, highest ``(i, |Lam|, Lam)``
leading, then horizontal factors by ascending ``lam``.  Source forms thus
read ``E * th^i ^ dx^1 ^ ... ^ dx^n``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, NamedTuple, Optional, Tuple, Union

from .jetalg import (
    BASE,
    EMPTY,
    FIBER,
    Bundle,
    DiffPoly,
    MultiIndex,
    Scalar,
    _concat,
    partial_derivative,
    prolong,
    qnorm,
    total_derivative,
)

THETA = 0
DX = 1


class CoVector(NamedTuple):
    kind: int
    index: int
    order: int
    multi: MultiIndex

    @property
    def is_contact(self) -> bool:
        return self.kind == THETA


@lru_cache(maxsize=None)
def dx(lam: int) -> CoVector:
    return CoVector(DX, lam, 0, EMPTY)


def theta(i: int, multi: Iterable[int] = EMPTY) -> CoVector:
    return _theta(i, MultiIndex(multi))


@lru_cache(maxsize=None)
def _theta(i: int, multi: MultiIndex) -> CoVector:
    if type(multi) is not MultiIndex:
        multi = MultiIndex(multi)
    return CoVector(THETA, i, len(multi), multi)


@lru_cache(maxsize=None)
def _theta_prolong(c: CoVector, lam: int) -> CoVector:
    return _theta(c.index, _concat(c.multi, lam))


@lru_cache(maxsize=None)
def cov_key(c: CoVector):
    if c.kind == DX:
        return (1, c.index)
    return (0, -c.index, -c.order, tuple(-a for a in c.multi))


Wedge = Tuple[CoVector, ...]


class Bidegree(NamedTuple):
    contact: int
    horizontal: int


@lru_cache(maxsize=1 << 16)
def canonical(factors: Wedge) -> Tuple[Optional[Wedge], int]:
    """Sort ``factors`` into canonical order; ``(None, 0)`` on a repeat."""
    if len(set(factors)) != len(factors):
        return None, 0
    keys = [cov_key(c) for c in factors]
    sign = 1
    for a in range(len(keys)):
        for b in range(a + 1, len(keys)):
            if keys[a] > keys[b]:
                sign = -sign
    order = sorted(range(len(factors)), key=keys.__getitem__)
    return tuple(factors[j] for j in order), sign


@lru_cache(maxsize=1 << 16)
def wedge_bidegree(w: Wedge) -> Bidegree:
    k = sum(1 for c in w if c.kind == THETA)
    return Bidegree(k, len(w) - k)


def wedge_key(w: Wedge):
    return (len(w), wedge_bidegree(w), tuple(cov_key(c) for c in w))


class Form:
    """Immutable exterior form on the jet space of ``bundle``.

    ``terms`` maps canonical wedge monomials to nonzero :class:`DiffPoly`
    coefficients.
    """

    __slots__ = ("bundle", "terms", "_hash")

    def __init__(self, bundle: Bundle, terms: Union[Dict[Wedge, DiffPoly], None] = None):
        self.bundle = bundle
        clean: Dict[Wedge, DiffPoly] = {}
        for w, f in (terms or {}).items():
            if not isinstance(f, DiffPoly):
                f = DiffPoly.const(f)
            cw, sign = canonical(tuple(w))
            if cw is None or not f:
                continue
            for c in cw:
                _check_covector(bundle, c)
            acc = clean.get(cw)
            f = f if sign > 0 else -f
            f = f if acc is None else acc + f
            if f:
                clean[cw] = f
            else:
                clean.pop(cw, None)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, bundle: Bundle, terms: Dict[Wedge, DiffPoly]) -> "Form":
        obj = cls.__new__(cls)
        obj.bundle = bundle
        obj.terms = terms
        obj._hash = None
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, bundle: Bundle) -> "Form":
        return cls._raw(bundle, {})

    @classmethod
    def function(cls, bundle: Bundle, f: Union[DiffPoly, Scalar]) -> "Form":
        if not isinstance(f, DiffPoly):
            f = DiffPoly.const(f)
        for v in f.variables():
            _check_variable(bundle, v)
        return cls._raw(bundle, {(): f} if f else {})

    @classmethod
    def generator(cls, bundle: Bundle, c: CoVector) -> "Form":
        _check_covector(bundle, c)
        return cls._raw(bundle, {(c,): DiffPoly.const(1)})

    @classmethod
    def dx(cls, bundle: Bundle, lam: int) -> "Form":
        return cls.generator(bundle, dx(lam))

    @classmethod
    def theta(cls, bundle: Bundle, i: int, multi: Iterable[int] = ()) -> "Form":
        return cls.generator(bundle, theta(i, multi))

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self) -> Iterator[Tuple[Wedge, DiffPoly]]:
        return iter(sorted(self.terms.items(), key=lambda kv: wedge_key(kv[0])))

    def __len__(self):
        return len(self.terms)

    def bidegrees(self) -> set:
        return {wedge_bidegree(w) for w in self.terms}

    def bidegree(self) -> Optional[Bidegree]:
        """The common bidegree of all terms, or None if not homogeneous (or zero)."""
        degs = self.bidegrees()
        return degs.pop() if len(degs) == 1 else None

    def is_homogeneous(self) -> bool:
        return len(self.bidegrees()) <= 1

    def degree(self) -> Optional[int]:
        degs = {len(w) for w in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def jet_order(self) -> int:
        order = 0
        for w, f in self.terms.items():
            order = max(order, f.jet_order(), *(c.order for c in w))
        return order

    def coeff_degree(self) -> int:
        return max((f.degree() for f in self.terms.values()), default=0)

    def coefficient(self, w: Iterable[CoVector]) -> DiffPoly:
        """Coefficient of the wedge monomial ``w`` (given in any order)."""
        cw, sign = canonical(tuple(w))
        if cw is None:
            return DiffPoly.const(0)
        f = self.terms.get(cw)
        if f is None:
            return DiffPoly.const(0)
        return f if sign > 0 else -f

    def __eq__(self, other):
        if isinstance(other, Form):
            return self.bundle == other.bundle and self.terms == other.terms
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.bundle, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        from .exprio import print_canonical

        return f"Form({print_canonical(self)!r}, n={self.bundle.base_dim}, p={self.bundle.fiber_dim})"

    # -- linear structure -------------------------------------------------

    def _check_bundle(self, other: "Form"):
        if self.bundle != other.bundle:
            raise ValueError(f"bundle mismatch: {self.bundle} vs {other.bundle}")

    def __add__(self, other):
        if not isinstance(other, Form):
            if isinstance(other, (int, Fraction, DiffPoly)):
                other = Form.function(self.bundle, other)
            else:
                return NotImplemented
        self._check_bundle(other)
        if not other.terms:
            return self
        out = dict(self.terms)
        for w, f in other.terms.items():
            g = out.get(w)
            g = f if g is None else g + f
            if g:
                out[w] = g
            else:
                out.pop(w, None)
        return Form._raw(self.bundle, out)

    __radd__ = __add__

    def __neg__(self):
        return Form._raw(self.bundle, {w: -f for w, f in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (Form, int, Fraction, DiffPoly)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        """Multiplication by a scalar or function; forms wedge."""
        if isinstance(other, Form):
            return wedge(self, other)
        if isinstance(other, (int, Fraction)):
            other = qnorm(other)
            if not other:
                return Form.zero(self.bundle)
            return Form._raw(self.bundle, {w: f.scale(other) for w, f in self.terms.items()})
        if isinstance(other, DiffPoly):
            out = {}
            for w, f in self.terms.items():
                g = f * other
                if g:
                    out[w] = g
            return Form._raw(self.bundle, out)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, DiffPoly)):
            return self.__mul__(other)
        return NotImplemented

    def __xor__(self, other):
        if isinstance(other, Form):
            return wedge(self, other)
        return NotImplemented

    def map_coefficients(self, fn) -> "Form":
        out = {}
        for w, f in self.terms.items():
            g = fn(f)
            if g:
                out[w] = g
        return Form._raw(self.bundle, out)


def _check_covector(bundle: Bundle, c: CoVector) -> None:
    if c.kind == DX:
        bundle.check_base(c.index)
    else:
        bundle.check_fiber(c.index)
        bundle.check_multi(c.multi)


def _check_variable(bundle: Bundle, v) -> None:
    if v.kind == BASE:
        bundle.check_base(v.index)
    else:
        bundle.check_fiber(v.index)
        bundle.check_multi(v.multi)


class _Acc:
    """Accumulator for building forms term by term."""

    __slots__ = ("bundle", "terms")

    def __init__(self, bundle: Bundle):
        self.bundle = bundle
        self.terms: Dict[Wedge, DiffPoly] = {}

    def add(self, w: Wedge, f: DiffPoly, sign: int = 1):
        if not f:
            return
        if sign < 0:
            f = -f
        g = self.terms.get(w)
        g = f if g is None else g + f
        if g:
            self.terms[w] = g
        else:
            del self.terms[w]

    def add_raw(self, factors: Wedge, f: DiffPoly, sign: int = 1):
        cw, s = canonical(factors)
        if cw is not None:
            self.add(cw, f, sign * s)

    def form(self) -> Form:
        return Form._raw(self.bundle, self.terms)


@lru_cache(maxsize=1 << 16)
def _wedge_mono(a: Wedge, b: Wedge) -> Tuple[Optional[Wedge], int]:
    return canonical(a + b)


def wedge(alpha: Form, beta: Form) -> Form:
    """Exterior product; graded-commutative."""
    alpha._check_bundle(beta)
    acc = _Acc(alpha.bundle)
    for wa, fa in alpha.terms.items():
        for wb, fb in beta.terms.items():
            w, sign = _wedge_mono(wa, wb)
            if w is not None:
                acc.add(w, fa * fb, sign)
    return acc.form()


def wedge_all(forms: Iterable[Form]) -> Form:
    forms = list(forms)
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def volume_form(bundle: Bundle) -> Form:
    """``dx^1 ^ ... ^ dx^n``."""
    return Form._raw(bundle, {volume_wedge(bundle.base_dim): DiffPoly.const(1)})


@lru_cache(maxsize=None)
def volume_wedge(n: int) -> Wedge:
    return tuple(dx(lam) for lam in range(1, n + 1))


# -- total derivative acting on forms ----------------------------------------


@lru_cache(maxsize=1 << 16)
def _wedge_total(w: Wedge, lam: int) -> Tuple[Tuple[Wedge, int], ...]:
    out = []
    for j, c in enumerate(w):
        if c.kind == THETA:
            cw, sign = canonical(w[:j] + (_theta_prolong(c, lam),) + w[j + 1:])
            if cw is not None:
                out.append((cw, sign))
    return tuple(out)


def total_derivative_form(phi: Form, lam: int) -> Form:
    """Lie derivative along the total derivative ``d_lam``.

    Acts on coefficients by :func:`total_derivative`, sends ``th^i_Lam`` to
    ``th^i_{lam+Lam}`` and kills ``dx^mu``.
    """
    acc = _Acc(phi.bundle)
    for w, f in phi.terms.items():
        acc.add(w, total_derivative(f, lam))
        for w2, sign in _wedge_total(w, lam):
            acc.add(w2, f, sign)
    return acc.form()


def total_derivative_form_multi(phi: Form, multi: Iterable[int]) -> Form:
    for lam in multi:
        phi = total_derivative_form(phi, lam)
    return phi


# -- differentials -----------------------------------------------------------


@lru_cache(maxsize=1 << 16)
def _prepend(c: CoVector, w: Wedge) -> Tuple[Optional[Wedge], int]:
    return canonical((c,) + w)


def horizontal_d(phi: Form) -> Form:
    """``d_H phi = dx^lam ^ d_lam(phi)``."""
    acc = _Acc(phi.bundle)
    for lam in range(1, phi.bundle.base_dim + 1):
        c = dx(lam)
        for w, f in total_derivative_form(phi, lam).terms.items():
            cw, sign = _prepend(c, w)
            if cw is not None:
                acc.add(cw, f, sign)
    return acc.form()


def vertical_d(phi: Form) -> Form:
    """``d_V phi = th^i_Lam ^ (d/du^i_Lam) phi``; generators are d_V-closed."""
    acc = _Acc(phi.bundle)
    for w, f in phi.terms.items():
        for v in f.variables():
            if v.kind != FIBER:
                continue
            cw, sign = _prepend(_theta(v.index, v.multi), w)
            if cw is not None:
                acc.add(cw, partial_derivative(f, v), sign)
    return acc.form()


@lru_cache(maxsize=1 << 16)
def _d_wedge(w: Wedge, n: int) -> Tuple[Tuple[Wedge, int], ...]:
    # graded Leibniz on generators: d(dx) = 0, d(th_Lam) = dx^lam ^ th_{lam+Lam}
    out = []
    for j, c in enumerate(w):
        if c.kind != THETA:
            continue
        for lam in range(1, n + 1):
            factors = w[:j] + (dx(lam), _theta_prolong(c, lam)) + w[j + 1:]
            cw, sign = canonical(factors)
            if cw is not None:
                out.append((cw, sign * (-1) ** j))
    return tuple(out)


def exterior_d(phi: Form) -> Form:
    """Exterior derivative, computed from the coordinate expansion.

    ``df = f_{x^lam} dx^lam + f_{u^i_Lam} du^i_Lam`` with
    ``du^i_Lam = th^i_Lam + u^i_{lam+Lam} dx^lam``, and the generator rules
    above.  Independent of :func:`horizontal_d` and :func:`vertical_d`.
    """
    n = phi.bundle.base_dim
    acc = _Acc(phi.bundle)
    for w, f in phi.terms.items():
        for v in f.variables():
            g = partial_derivative(f, v)
            if v.kind == BASE:
                acc.add_raw((dx(v.index),) + w, g)
                continue
            acc.add_raw((_theta(v.index, v.multi),) + w, g)
            for lam in range(1, n + 1):
                acc.add_raw((dx(lam),) + w, g * DiffPoly.var(prolong(v, lam)))
        for w2, sign in _d_wedge(w, n):
            acc.add(w2, f, sign)
    return acc.form()


# -- projections and contraction ---------------------------------------------


def bidegree_parts(phi: Form) -> Dict[Bidegree, Form]:
    """Split ``phi`` into its homogeneous ``(contact, horizontal)`` parts."""
    parts: Dict[Bidegree, Dict[Wedge, DiffPoly]] = {}
    for w, f in phi.terms.items():
        parts.setdefault(wedge_bidegree(w), {})[w] = f
    return {b: Form._raw(phi.bundle, t) for b, t in sorted(parts.items())}


def h_contact(phi: Form, k: int) -> Form:
    return Form._raw(phi.bundle, {w: f for w, f in phi.terms.items() if wedge_bidegree(w).contact == k})


def h_horizontal(phi: Form, s: int) -> Form:
    return Form._raw(phi.bundle, {w: f for w, f in phi.terms.items() if wedge_bidegree(w).horizontal == s})


def contract_fiber(phi: Form, i: int, multi: Iterable[int] = EMPTY) -> Form:
    """Interior product with the vector dual to ``th^i_Lam``.

    The factor in position ``j`` (0-based, canonical order) is removed with
    sign ``(-1)**j``.
    """
    target = theta(i, multi)
    acc = _Acc(phi.bundle)
    for w, f in phi.terms.items():
        try:
            j = w.index(target)
        except ValueError:
            continue
        acc.add(w[:j] + w[j + 1:], f, -1 if j % 2 else 1)
    return acc.form()


def contact_indices(phi: Form) -> set:
    """The ``(i, Lam)`` pairs carried by contact factors of ``phi``."""
    return {(c.index, c.multi) for w in phi.terms for c in w if c.kind == THETA}


__all__ = [
    "Bidegree",
    "CoVector",
    "Form",
    "bidegree_parts",
    "canonical",
    "contact_indices",
    "contract_fiber",
    "dx",
    "exterior_d",
    "h_contact",
    "h_horizontal",
    "horizontal_d",
    "theta",
    "total_derivative_form",
    "total_derivative_form_multi",
    "vertical_d",
    "volume_form",
    "wedge",
    "wedge_all",
]

"""Multi-indices, jet coordinates and the differential-polynomial ring.

Jet coordinates of the trivial bundle R^n x R^p -> R^n are the base
coordinates ``x^lam`` and the fiber coordinates ``u^i_Lam``.  A
:class:`DiffPoly` is a polynomial in finitely many of them with exact
rational coefficients.  Coefficients are kept as :class:`int` whenever they
are integral and as :class:`fractions.Fraction` otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Dict, Iterable, Iterator, NamedTuple, Tuple, Union

Scalar = Union[int, Fraction]

BASE = 0
FIBER = 1


def qnorm(c: Scalar) -> Scalar:
    """Return ``c`` as an int when it is integral, else as a Fraction."""
    if type(c) is int:
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return int(c)
    raise TypeError(f"inexact or unsupported coefficient {c!r}")


@dataclass(frozen=True)
class Bundle:
    """The trivial bundle with ``base_dim`` base and ``fiber_dim`` fiber coordinates."""

    base_dim: int
    fiber_dim: int

    def __post_init__(self):
        for name in ("base_dim", "fiber_dim"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")

    def check_base(self, lam: int) -> None:
        if not 1 <= lam <= self.base_dim:
            raise IndexError(f"base index {lam} outside 1..{self.base_dim}")

    def check_fiber(self, i: int) -> None:
        if not 1 <= i <= self.fiber_dim:
            raise IndexError(f"fiber index {i} outside 1..{self.fiber_dim}")

    def check_multi(self, multi: "MultiIndex") -> None:
        for lam in multi:
            self.check_base(lam)


class MultiIndex(tuple):
    """Symmetric multi-index, stored as the sorted tuple of its base indices.

    ``MultiIndex((2, 1)) == MultiIndex((1, 2))``; the order ``|Lam|`` is the
    length.  Sorting multi-indices of equal order by tuple comparison is the
    graded-lexicographic order used throughout (``xx < xy < yy``).
    """

    __slots__ = ()

    def __new__(cls, indices: Iterable[int] = ()):
        return super().__new__(cls, sorted(indices))

    @classmethod
    def from_counts(cls, counts: Iterable[int]) -> "MultiIndex":
        indices = []
        for lam, c in enumerate(counts, start=1):
            if c < 0:
                raise ValueError("multiplicities must be nonnegative")
            indices.extend([lam] * c)
        return cls(indices)

    @property
    def order(self) -> int:
        return len(self)

    def counts(self, n: int) -> Tuple[int, ...]:
        out = [0] * n
        for lam in self:
            out[lam - 1] += 1
        return tuple(out)

    def concat(self, lam: int) -> "MultiIndex":
        return _concat(self, lam)

    def __repr__(self):
        return f"MultiIndex({tuple(self)!r})"


EMPTY = MultiIndex()


@lru_cache(maxsize=None)
def _concat(multi: MultiIndex, lam: int) -> MultiIndex:
    return MultiIndex(multi + (lam,))


def mi_concat(multi: MultiIndex, lam: int, n: int) -> MultiIndex:
    """The multi-index ``lam + Lam``: one more derivative in direction ``lam``."""
    if not 1 <= lam <= n:
        raise IndexError(f"base index {lam} outside 1..{n}")
    return _concat(MultiIndex(multi), lam)


@lru_cache(maxsize=None)
def mi_enumerate(n: int, r: int) -> Tuple[MultiIndex, ...]:
    """All multi-indices over ``n`` base indices with order at most ``r``.

    Graded first, lexicographic within an order.
    """
    if r < 0:
        raise ValueError("max order must be nonnegative")
    out = []
    for s in range(r + 1):
        out.extend(MultiIndex(c) for c in combinations_with_replacement(range(1, n + 1), s))
    return tuple(out)


class JetVariable(NamedTuple):
    """A jet coordinate; tuple order is the canonical variable order.

    Base coordinates ``x^lam`` sort before fiber coordinates ``u^i_Lam``,
    which sort by ``(i, |Lam|, Lam)``.
    """

    kind: int
    index: int
    order: int
    multi: MultiIndex

    @property
    def is_base(self) -> bool:
        return self.kind == BASE

    @property
    def is_fiber(self) -> bool:
        return self.kind == FIBER


@lru_cache(maxsize=None)
def base_var(lam: int) -> JetVariable:
    return JetVariable(BASE, lam, 0, EMPTY)


def fiber_var(i: int, multi: Iterable[int] = EMPTY) -> JetVariable:
    return _fiber_var(i, MultiIndex(multi))


@lru_cache(maxsize=None)
def _fiber_var(i: int, multi: MultiIndex) -> JetVariable:
    if type(multi) is not MultiIndex:
        multi = MultiIndex(multi)
    return JetVariable(FIBER, i, len(multi), multi)


@lru_cache(maxsize=None)
def prolong(v: JetVariable, lam: int) -> JetVariable:
    """``u^i_Lam -> u^i_{lam+Lam}``."""
    multi = _concat(v.multi, lam)
    return JetVariable(FIBER, v.index, len(multi), multi)


# A monomial is a sorted tuple of JetVariables, repeated by multiplicity.
Monomial = Tuple[JetVariable, ...]
ONE: Monomial = ()


def mono_key(m: Monomial):
    """Graded-lexicographic sort key for monomials."""
    return (len(m), m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


def fiber_degree(m: Monomial) -> int:
    return sum(1 for v in m if v.kind == FIBER)


@lru_cache(maxsize=1 << 16)
def _mono_partial(m: Monomial, v: JetVariable) -> Tuple[Monomial, int]:
    e = m.count(v)
    if not e:
        return ONE, 0
    k = m.index(v)
    return m[:k] + m[k + 1:], e


@lru_cache(maxsize=1 << 16)
def _mono_total(m: Monomial, lam: int) -> Tuple[Tuple[Monomial, int], ...]:
    out: Dict[Monomial, int] = {}
    for v in dict.fromkeys(m):
        rest, e = _mono_partial(m, v)
        if v.kind == BASE:
            if v.index != lam:
                continue
            key = rest
        else:
            key = mono_mul(rest, (prolong(v, lam),))
        out[key] = out.get(key, 0) + e
    return tuple(out.items())


class DiffPoly:
    """Exact-rational polynomial in jet coordinates.

    Immutable.  ``terms`` maps sorted monomials to nonzero coefficients.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Union[Dict[Monomial, Scalar], None] = None):
        clean: Dict[Monomial, Scalar] = {}
        if terms:
            for m, c in terms.items():
                c = qnorm(c)
                if c:
                    key = tuple(sorted(m))
                    c = qnorm(clean.get(key, 0) + c)
                    if c:
                        clean[key] = c
                    else:
                        clean.pop(key, None)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Scalar]) -> "DiffPoly":
        # trusted constructor: canonical keys, nonzero normalized coefficients
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Scalar) -> "DiffPoly":
        c = qnorm(c)
        return cls._raw({ONE: c} if c else {})

    @classmethod
    def var(cls, v: JetVariable) -> "DiffPoly":
        return cls._raw({(v,): 1})

    @classmethod
    def x(cls, lam: int) -> "DiffPoly":
        return cls.var(base_var(lam))

    @classmethod
    def u(cls, i: int, multi: Iterable[int] = ()) -> "DiffPoly":
        return cls.var(fiber_var(i, MultiIndex(multi)))

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Monomial, Scalar]]:
        return iter(sorted(self.terms.items(), key=lambda kv: mono_key(kv[0])))

    def variables(self) -> set:
        return {v for m in self.terms for v in m}

    def jet_order(self) -> int:
        return max((v.order for m in self.terms for v in m if v.kind == FIBER), default=0)

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ONE in self.terms)

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self.terms.get(ONE, 0)

    def __eq__(self, other):
        if isinstance(other, DiffPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == DiffPoly.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        from .exprio import print_poly

        # smallest base dimension that names every variable
        n = max((lam for m in self.terms for v in m for lam in (v.index,) * (v.kind == BASE) + v.multi),
                default=1)
        return f"DiffPoly({print_poly(self, n)!r})"

    # -- ring operations --------------------------------------------------

    @staticmethod
    def _coerce(other) -> "DiffPoly":
        if isinstance(other, DiffPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return DiffPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = qnorm(s)
            else:
                del out[m]
        return DiffPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c: Scalar) -> "DiffPoly":
        c = qnorm(c)
        if not c:
            return DiffPoly._raw({})
        if c == 1:
            return self
        return DiffPoly._raw({m: qnorm(a * c) for m, a in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        out: Dict[Monomial, Scalar] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = mono_mul(ma, mb)
                out[m] = out.get(m, 0) + ca * cb
        return DiffPoly._raw({m: qnorm(c) for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = DiffPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    # -- calculus ---------------------------------------------------------

    def partial(self, v: JetVariable) -> "DiffPoly":
        return partial_derivative(self, v)

    def total(self, lam: int) -> "DiffPoly":
        return total_derivative(self, lam)


def _accumulate(pairs: Iterable[Tuple[Monomial, Scalar]]) -> DiffPoly:
    out: Dict[Monomial, Scalar] = {}
    for m, c in pairs:
        out[m] = out.get(m, 0) + c
    return DiffPoly._raw({m: qnorm(c) for m, c in out.items() if c})


def partial_derivative(P: DiffPoly, v: JetVariable) -> DiffPoly:
    """Formal partial derivative; all jet coordinates are independent."""
    return _accumulate(
        (rest, c * e)
        for m, c in P.terms.items()
        for rest, e in (_mono_partial(m, v),)
        if e
    )


def total_derivative(P: DiffPoly, lam: int) -> DiffPoly:
    """``d_lam = d/dx^lam + sum u^i_{lam+Lam} d/du^i_Lam``, truncated to the
    variables present in ``P``."""
    if lam < 1:
        raise IndexError(f"base index {lam} must be positive")
    return _accumulate(
        (m2, c * e) for m, c in P.terms.items() for m2, e in _mono_total(m, lam)
    )


def total_derivative_multi(P: DiffPoly, multi: Iterable[int]) -> DiffPoly:
    """Composite ``d_Lam``; order of application is irrelevant."""
    for lam in multi:
        P = total_derivative(P, lam)
    return P


def fiber_scale(P: DiffPoly, t: Scalar) -> DiffPoly:
    """Substitute ``u^i_Lam -> t u^i_Lam``; base coordinates are untouched."""
    t = qnorm(t)
    return DiffPoly._raw(
        {m: qnorm(c * t ** fiber_degree(m)) for m, c in P.terms.items() if c * t ** fiber_degree(m)}
    )

"""Constructive inverse problem on polynomial data.

Potentials for ``d_H`` are found by exact linear algebra on finite
truncations of the bigraded algebra.  ``d_H`` is homogeneous for two
additive gradings of a term ``f * w``:

* fiber content: for each ``i``, the number of ``u^i_*`` factors in ``f``
  plus ``th^i_*`` factors in ``w``;
* weight: for each ``lam``, the number of ``x^lam`` and ``dx^lam`` factors
  minus the multiplicity of ``lam`` over all multi-indices.

So the linear system splits into one small block per grading class of the
target, and only basis elements in those classes are ever enumerated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, product
from typing import Dict, List, Optional, Tuple

from . import linalg
from .errors import (
    BidegreeError,
    HelmholtzFailed,
    InternalCheckFailed,
    InternalRoundTripFailed,
    NoPotential,
    NoSolution,
    NotClosed,
    NotTrivial,
)
from .forms import (
    DX,
    Bidegree,
    Form,
    _theta,
    canonical,
    dx,
    horizontal_d,
    volume_form,
    wedge_key,
)
from .jetalg import (
    BASE,
    Bundle,
    DiffPoly,
    base_var,
    fiber_degree,
    fiber_var,
    mi_enumerate,
    mono_key,
)
from .variational import SourceForm, euler_lagrange, helmholtz_check

Grading = Tuple[Tuple[int, ...], Tuple[int, ...]]


def term_grading(n: int, p: int, m, w) -> Grading:
    """``(fiber content, weight)`` of the term with monomial ``m`` and wedge ``w``."""
    content = [0] * p
    weight = [0] * n
    for v in m:
        if v.kind == BASE:
            weight[v.index - 1] += 1
        else:
            content[v.index - 1] += 1
            for lam in v.multi:
                weight[lam - 1] -= 1
    for c in w:
        if c.kind == DX:
            weight[c.index - 1] += 1
        else:
            content[c.index - 1] += 1
            for lam in c.multi:
                weight[lam - 1] -= 1
    return tuple(content), tuple(weight)


# -- graded bases -------------------------------------------------------------


@dataclass(frozen=True)
class GradedBasis:
    """Monomial basis of the (k, s)-forms with jet order and degree bounds.

    Each element is a pair ``(monomial, wedge)`` standing for the form
    ``monomial * wedge``.  Elements are sorted by wedge, then graded-lex
    monomial order.
    """

    bundle: Bundle
    bidegree: Bidegree
    max_jet_order: int
    max_poly_degree: int
    elements: Tuple = field(repr=False)

    def __len__(self):
        return len(self.elements)

    def form(self, j: int) -> Form:
        m, w = self.elements[j]
        return Form._raw(self.bundle, {w: DiffPoly._raw({m: 1})})

    def forms(self) -> List[Form]:
        return [self.form(j) for j in range(len(self))]


@lru_cache(maxsize=None)
def _wedges(n: int, p: int, k: int, s: int, r: int) -> Tuple:
    thetas = [_theta(i, multi) for i in range(1, p + 1) for multi in mi_enumerate(n, r)]
    out = []
    for th in combinations(thetas, k):
        for xs in combinations(range(1, n + 1), s):
            cw, _ = canonical(th + tuple(dx(lam) for lam in xs))
            out.append(cw)
    return tuple(sorted(out, key=wedge_key))


def _sorted_elements(elements) -> Tuple:
    return tuple(sorted(set(elements), key=lambda e: (wedge_key(e[1]), mono_key(e[0]))))


@lru_cache(maxsize=64)
def graded_basis(bundle: Bundle, bidegree: Tuple[int, int], max_jet_order: int, max_poly_degree: int) -> GradedBasis:
    """The full truncated basis; every coefficient monomial of degree <= bound
    in ``x^lam`` and ``u^i_Lam`` with ``|Lam| <= max_jet_order``."""
    n, p = bundle.base_dim, bundle.fiber_dim
    k, s = bidegree
    if not 0 <= s <= n or k < 0:
        raise BidegreeError(f"no forms of bidegree {bidegree} for n={n}")
    variables = [base_var(lam) for lam in range(1, n + 1)]
    variables += [fiber_var(i, multi) for i in range(1, p + 1) for multi in mi_enumerate(n, max_jet_order)]
    monos = [m for d in range(max_poly_degree + 1) for m in combinations_with_replacement(variables, d)]
    elements = [(m, w) for w in _wedges(n, p, k, s, max_jet_order) for m in monos]
    return GradedBasis(bundle, Bidegree(k, s), max_jet_order, max_poly_degree, _sorted_elements(elements))


@lru_cache(maxsize=4096)
def graded_class_basis(bundle: Bundle, bidegree: Tuple[int, int], max_jet_order: int,
                       max_poly_degree: int, grading: Grading) -> GradedBasis:
    """The elements of :func:`graded_basis` lying in one grading class,
    enumerated directly without building the full basis."""
    n, p = bundle.base_dim, bundle.fiber_dim
    k, s = bidegree
    content, weight = grading
    multis = mi_enumerate(n, max_jet_order)
    elements = []
    for w in _wedges(n, p, k, s, max_jet_order):
        wc, ww = term_grading(n, p, (), w)
        rest_c = [a - b for a, b in zip(content, wc)]
        if min(rest_c, default=0) < 0 or sum(rest_c) > max_poly_degree:
            continue
        rest_w = [a - b for a, b in zip(weight, ww)]
        choices = [combinations_with_replacement(multis, c) for c in rest_c]
        for pick in product(*choices):
            xcount = list(rest_w)
            fvars = []
            for i, group in enumerate(pick, start=1):
                for multi in group:
                    fvars.append(fiber_var(i, multi))
                    for lam in multi:
                        xcount[lam - 1] += 1
            if min(xcount) < 0 or sum(rest_c) + sum(xcount) > max_poly_degree:
                continue
            xs = [base_var(lam) for lam in range(1, n + 1) for _ in range(xcount[lam - 1])]
            elements.append((tuple(sorted(xs + fvars)), w))
    return GradedBasis(bundle, Bidegree(k, s), max_jet_order, max_poly_degree, _sorted_elements(elements))


@lru_cache(maxsize=1 << 16)
def _dh_column(bundle: Bundle, m, w) -> Tuple:
    image = horizontal_d(Form._raw(bundle, {w: DiffPoly._raw({m: 1})}))
    return tuple(((m2, w2), c) for w2, f in image.terms.items() for m2, c in f.terms.items())


# -- solving d_H xi = target --------------------------------------------------


@dataclass(frozen=True)
class SolveReport:
    solution: Optional[Form]
    basis_dims: Tuple[int, int]
    escalations: int = 0
    bounds: Tuple[int, int] = (0, 0)


def solve_graded_linear(target: Form, bounds: Tuple[int, int], op: str = "d_H") -> SolveReport:
    """Solve ``d_H xi = target`` with ``xi`` in the truncation ``bounds = (order, degree)``.

    Raises :class:`NoSolution` when the truncated system is inconsistent.
    The returned solution is checked by re-applying ``d_H``.
    """
    if op != "d_H":
        raise ValueError(f"unsupported operator {op!r}")
    bundle = target.bundle
    n, p = bundle.base_dim, bundle.fiber_dim
    order, degree = bounds
    if not target:
        return SolveReport(Form.zero(bundle), (0, 0), 0, bounds)
    b = target.bidegree()
    if b is None:
        raise BidegreeError("target must be homogeneous")
    if b.horizontal == 0:
        raise NoSolution("a form of horizontal degree 0 is never d_H-exact", SolveReport(None, (0, 0), 0, bounds))
    dom_bideg = (b.contact, b.horizontal - 1)

    classes: Dict[Grading, Dict] = {}
    for w, f in target.terms.items():
        for m, c in f.terms.items():
            classes.setdefault(term_grading(n, p, m, w), {})[(m, w)] = c

    solution: Dict = {}
    ndom = ncod = 0
    for grading in sorted(classes):
        rhs_terms = classes[grading]
        basis = graded_class_basis(bundle, dom_bideg, order, degree, grading)
        columns = [dict(_dh_column(bundle, m, w)) for m, w in basis.elements]
        rows = sorted({key for col in columns for key in col} | set(rhs_terms),
                      key=lambda e: (wedge_key(e[1]), mono_key(e[0])))
        ndom += len(columns)
        ncod += len(rows)
        if not columns:
            raise NoSolution(f"empty basis for grading class {grading}",
                             SolveReport(None, (ndom, ncod), 0, bounds))
        index = {key: r for r, key in enumerate(rows)}
        matrix = [[0] * len(columns) for _ in rows]
        for j, col in enumerate(columns):
            for key, c in col.items():
                matrix[index[key]][j] = c
        rhs = [rhs_terms.get(key, 0) for key in rows]
        x = linalg.solve_rational(matrix, rhs)
        if x is None:
            raise NoSolution(f"inconsistent at bounds (order={order}, degree={degree})",
                             SolveReport(None, (ndom, ncod), 0, bounds))
        for (m, w), c in zip(basis.elements, x):
            if c:
                solution.setdefault(w, {})[m] = c
    xi = Form(bundle, {w: DiffPoly(t) for w, t in solution.items()})
    if horizontal_d(xi) != target:
        raise InternalCheckFailed("d_H(solution) differs from the target")
    return SolveReport(xi, (ndom, ncod), 0, bounds)


def find_potential(phi: Form, initial_bounds: Optional[Tuple[int, int]] = None,
                   max_order: Optional[int] = None) -> SolveReport:
    """Search for ``xi`` with ``d_H xi = phi``, escalating the jet order bound.

    The search starts one jet order below ``phi`` and gives up after
    ``jet_order(phi) + 2`` (or ``max_order``).  The degree bound starts one
    above the coefficient degree of ``phi`` (integration in ``x`` raises it)
    and grows with the order bound.
    """
    bundle = phi.bundle
    n = bundle.base_dim
    if not phi:
        return SolveReport(Form.zero(bundle), (0, 0), 0, (0, 0))
    b = phi.bidegree()
    if b is None:
        raise BidegreeError("form must be homogeneous")
    if b.horizontal == 0:
        raise NoPotential("a nonzero form of horizontal degree 0 has no d_H-potential")
    if b.horizontal < n:
        closure = horizontal_d(phi)
        if closure:
            raise NotClosed("form is not d_H-closed", closure)
    jo = phi.jet_order()
    if initial_bounds is None:
        order, degree = max(jo - 1, 0), phi.coeff_degree() + 1
    else:
        order, degree = initial_bounds
    stop = jo + 2 if max_order is None else max_order
    order = min(order, stop)
    escalations = 0
    last = None
    while True:
        try:
            report = solve_graded_linear(phi, (order, degree))
            return SolveReport(report.solution, report.basis_dims, escalations, (order, degree))
        except NoSolution as exc:
            last = exc
        if order >= stop:
            break
        order += 1
        degree += 1
        escalations += 1
    raise NoPotential(f"no d_H-potential up to jet order {order}: {last}")


def dh_potential(phi: Form, initial_bounds: Optional[Tuple[int, int]] = None,
                 max_order: Optional[int] = None) -> Form:
    """``xi`` with ``d_H xi = phi`` exactly; see :func:`find_potential`."""
    return find_potential(phi, initial_bounds, max_order).solution


# -- Lagrangians --------------------------------------------------------------


def _volterra_coefficient(E: DiffPoly) -> DiffPoly:
    # int_0^1 E[t u] dt, monomial by monomial
    return DiffPoly({m: Fraction(c) / (fiber_degree(m) + 1) for m, c in E.terms.items()})


def volterra_lagrangian(eps: SourceForm) -> Form:
    """Lagrangian ``L = int_0^1 u^i E_i[t u] dt * vol`` of a Helmholtz source form."""
    check = helmholtz_check(eps)
    if not check.passes:
        raise HelmholtzFailed("source form violates the Helmholtz condition", check.obstruction)
    bundle = eps.bundle
    f = DiffPoly.const(0)
    for i, E in enumerate(eps.components, start=1):
        if E:
            f = f + DiffPoly.u(i) * _volterra_coefficient(E)
    L = volume_form(bundle) * f
    if euler_lagrange(L) != eps:
        raise InternalRoundTripFailed("Euler-Lagrange form of the reconstructed Lagrangian differs")
    return L


def triviality_decompose(L: Form, max_order: Optional[int] = None) -> Form:
    """``xi`` with ``L = d_H xi`` for a variationally trivial Lagrangian ``L``."""
    eps = euler_lagrange(L)
    if not eps.is_zero():
        raise NotTrivial("Lagrangian has a nonzero Euler-Lagrange form", eps)
    xi = dh_potential(L, max_order=max_order)
    if horizontal_d(xi) != L:
        raise InternalCheckFailed("L != d_H(xi)")
    return xi


__all__ = [
    "GradedBasis",
    "SolveReport",
    "dh_potential",
    "find_potential",
    "graded_basis",
    "graded_class_basis",
    "solve_graded_linear",
    "term_grading",
    "triviality_decompose",
    "volterra_lagrangian",
]

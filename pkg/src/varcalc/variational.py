"""Interior Euler operator, variational operator and the Euler-Lagrange map."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .errors import BidegreeError, InternalCheckFailed, NoPotential, PotentialNotFound
from .forms import (
    THETA,
    Form,
    _Acc,
    _prepend,
    _theta,
    bidegree_parts,
    contact_indices,
    contract_fiber,
    exterior_d,
    horizontal_d,
    total_derivative_form_multi,
    vertical_d,
    volume_wedge,
)
from .jetalg import EMPTY, FIBER, Bundle, DiffPoly, partial_derivative, total_derivative_multi


def _require(phi: Form, contact_min: int = 0, contact: int = None) -> int:
    """Check that ``phi`` is homogeneous of bidegree ``(k, n)``; return k."""
    n = phi.bundle.base_dim
    if not phi:
        return contact if contact is not None else contact_min
    b = phi.bidegree()
    if b is None:
        raise BidegreeError(f"expected a homogeneous form, got bidegrees {sorted(phi.bidegrees())}")
    if b.horizontal != n or b.contact < contact_min or (contact is not None and b.contact != contact):
        want = f"({contact}, {n})" if contact is not None else f"(k>={contact_min}, {n})"
        raise BidegreeError(f"expected bidegree {want}, got {tuple(b)}")
    return b.contact


def tau_bar(phi: Form) -> Form:
    """``sum (-1)^|Lam| th^i ^ d_Lam(contract(phi, i, Lam))`` on a (k, n)-form, k >= 1."""
    _require(phi, contact_min=1)
    acc = _Acc(phi.bundle)
    for i, multi in sorted(contact_indices(phi)):
        inner = total_derivative_form_multi(contract_fiber(phi, i, multi), multi)
        sign = -1 if len(multi) % 2 else 1
        head = _theta(i, EMPTY)
        for w, f in inner.terms.items():
            cw, s = _prepend(head, w)
            if cw is not None:
                acc.add(cw, f, sign * s)
    return acc.form()


def tau(phi: Form) -> Form:
    """Projector onto source forms: ``(1/k) tau_bar`` on every (k, n) part, k >= 1."""
    n = phi.bundle.base_dim
    out = Form.zero(phi.bundle)
    for b, part in bidegree_parts(phi).items():
        if b.horizontal == n and b.contact >= 1:
            out = out + tau_bar(part) * Fraction(1, b.contact)
    return out


def delta(phi: Form) -> Form:
    """Variational operator ``tau(d phi)`` on a (k, n)-form."""
    _require(phi)
    return tau(exterior_d(phi))


# -- source forms -------------------------------------------------------------


@dataclass(frozen=True)
class SourceForm:
    """``sum_i E_i th^i ^ vol``; ``components[i - 1]`` is ``E_i``."""

    bundle: Bundle
    components: Tuple[DiffPoly, ...]

    def __post_init__(self):
        comps = tuple(c if isinstance(c, DiffPoly) else DiffPoly.const(c) for c in self.components)
        if len(comps) != self.bundle.fiber_dim:
            raise ValueError(f"expected {self.bundle.fiber_dim} components, got {len(comps)}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_components(cls, bundle: Bundle, components: Dict[int, DiffPoly]) -> "SourceForm":
        return cls(bundle, tuple(components.get(i, DiffPoly.const(0)) for i in range(1, bundle.fiber_dim + 1)))

    def __getitem__(self, i: int) -> DiffPoly:
        self.bundle.check_fiber(i)
        return self.components[i - 1]

    def is_zero(self) -> bool:
        return not any(self.components)

    def to_form(self) -> Form:
        vol = volume_wedge(self.bundle.base_dim)
        return Form(self.bundle, {(_theta(i, EMPTY),) + vol: e for i, e in enumerate(self.components, start=1)})

    @classmethod
    def from_form(cls, phi: Form) -> "SourceForm":
        """Inverse of :meth:`to_form`; rejects forms not of that shape."""
        b = phi.bundle
        vol = volume_wedge(b.base_dim)
        comps: Dict[int, DiffPoly] = {}
        for w, f in phi.terms.items():
            head = w[0] if w else None
            if w[1:] != vol or head is None or head.kind != THETA or head.order != 0:
                raise BidegreeError("not a source form: every term must be E * th^i ^ vol")
            comps[head.index] = f
        return cls.from_components(b, comps)


def euler_lagrange(L: Form) -> SourceForm:
    """Euler-Lagrange form of the horizontal density ``L = f vol``.

    ``E_i = sum_Lam (-1)^|Lam| d_Lam(df/du^i_Lam)``, computed on the
    coefficient alone.
    """
    _require(L, contact=0)
    bundle = L.bundle
    f = L.terms.get(volume_wedge(bundle.base_dim), DiffPoly.const(0))
    comps: Dict[int, DiffPoly] = {}
    for v in sorted(f.variables()):
        if v.kind != FIBER:
            continue
        term = total_derivative_multi(partial_derivative(f, v), v.multi)
        if v.order % 2:
            term = -term
        comps[v.index] = comps.get(v.index, DiffPoly.const(0)) + term
    return SourceForm.from_components(bundle, comps)


@dataclass(frozen=True)
class HelmholtzResult:
    passes: bool
    obstruction: Form

    def __bool__(self):
        return self.passes


def helmholtz_check(eps: SourceForm) -> HelmholtzResult:
    """Helmholtz test ``delta(eps) = 0``; the obstruction is the (2, n)-form ``delta(eps)``."""
    obstruction = delta(eps.to_form())
    return HelmholtzResult(not obstruction, obstruction)


# -- decomposition of (k, n)-forms ------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    """``input = source_part + d_H(potential)``."""

    source_part: Form
    potential: Form


def decompose(rho: Form, max_order: Optional[int] = None) -> Decomposition:
    """Split a (k, n)-form, k >= 1, into its source part and a d_H-exact remainder."""
    from .inverse import dh_potential

    _require(rho, contact_min=1)
    source = tau(rho)
    rest = rho - source
    if not rest:
        return Decomposition(source, Form.zero(rho.bundle))
    try:
        potential = dh_potential(rest, max_order=max_order)
    except NoPotential as exc:
        raise PotentialNotFound(f"no d_H-potential for rho - tau(rho): {exc}") from exc
    if source + horizontal_d(potential) != rho:
        raise InternalCheckFailed("decomposition does not reassemble")
    return Decomposition(source, potential)


def first_variation(L: Form, max_order: Optional[int] = None) -> Tuple[SourceForm, Form]:
    """``dL = delta(L) + d_H(phi)``; returns ``(delta(L), phi)`` with phi a (1, n-1)-form."""
    _require(L, contact=0)
    eps = euler_lagrange(L)
    dV = vertical_d(L)
    if not dV:
        return eps, Form.zero(L.bundle)
    dec = decompose(dV, max_order=max_order)
    if dec.source_part != eps.to_form():
        raise InternalCheckFailed("tau(dL) disagrees with the Euler-Lagrange form")
    return eps, dec.potential


__all__ = [
    "Decomposition",
    "HelmholtzResult",
    "SourceForm",
    "decompose",
    "delta",
    "euler_lagrange",
    "first_variation",
    "helmholtz_check",
    "tau",
    "tau_bar",
]

"""Symbolic variational bicomplex on jet spaces of trivial bundles.

Differential polynomials live in :mod:`varcalc.jetalg`, forms in the contact
basis in :mod:`varcalc.forms`, the Euler operators in
:mod:`varcalc.variational` and the constructive inverse problem in
:mod:`varcalc.inverse`.  Text and JSON I/O is in :mod:`varcalc.exprio`.
"""

from .errors import (
    BidegreeError,
    HelmholtzFailed,
    InternalCheckFailed,
    NoPotential,
    NoSolution,
    NotClosed,
    NotTrivial,
    ParseError,
    VarCalcError,
    WireFormatError,
)
from .exprio import dumps_wire, from_wire, loads_wire, parse, parse_poly, print_canonical, to_wire
from .forms import Bidegree, Form, exterior_d, horizontal_d, vertical_d, volume_form, wedge
from .inverse import dh_potential, solve_graded_linear, triviality_decompose, volterra_lagrangian
from .jetalg import Bundle, DiffPoly, MultiIndex, partial_derivative, total_derivative
from .variational import (
    SourceForm,
    decompose,
    delta,
    euler_lagrange,
    first_variation,
    helmholtz_check,
    tau,
    tau_bar,
)

__version__ = "0.1.0"

__all__ = [
    "Bidegree",
    "BidegreeError",
    "Bundle",
    "DiffPoly",
    "Form",
    "HelmholtzFailed",
    "InternalCheckFailed",
    "MultiIndex",
    "NoPotential",
    "NoSolution",
    "NotClosed",
    "NotTrivial",
    "ParseError",
    "SourceForm",
    "VarCalcError",
    "WireFormatError",
    "decompose",
    "delta",
    "dh_potential",
    "dumps_wire",
    "euler_lagrange",
    "exterior_d",
    "first_variation",
    "from_wire",
    "helmholtz_check",
    "horizontal_d",
    "loads_wire",
    "parse",
    "parse_poly",
    "partial_derivative",
    "print_canonical",
    "solve_graded_linear",
    "tau",
    "tau_bar",
    "to_wire",
    "total_derivative",
    "triviality_decompose",
    "vertical_d",
    "volterra_lagrangian",
    "volume_form",
    "wedge",
]

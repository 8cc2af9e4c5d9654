from fractions import Fraction
from math import comb

import pytest
import sympy as sp
from conftest import B11, B12, B21, P, f, record_observation

from varcalc.errors import BidegreeError, HelmholtzFailed, NoPotential, NoSolution, NotClosed, NotTrivial
from varcalc.forms import Form, horizontal_d, volume_form
from varcalc.inverse import (
    dh_potential,
    find_potential,
    graded_basis,
    graded_class_basis,
    solve_graded_linear,
    term_grading,
    triviality_decompose,
    volterra_lagrangian,
)
from varcalc.jetalg import Bundle, DiffPoly, fiber_scale
from varcalc.samples import random_form, random_lagrangian
from varcalc.variational import SourceForm, delta, euler_lagrange


def _src(text, bundle=B11):
    return SourceForm(bundle, (f(text, bundle),))


class TestSolveGraded:
    def test_divergence_of_u(self):
        rep = solve_graded_linear(P("u1_x*dx1"), (1, 1))
        assert rep.solution == P("u1")
        assert rep.basis_dims[0] > 0

    def test_dx(self):
        assert solve_graded_linear(P("dx1"), (0, 1)).solution == P("x1")

    def test_source_form_inconsistent(self):
        with pytest.raises(NoSolution):
            solve_graded_linear(P("th1^dx1"), (3, 3))

    def test_too_small_bounds(self):
        # u_x u_xx dx needs u_x^2, which has degree 2
        with pytest.raises(NoSolution):
            solve_graded_linear(P("u1_x*u1_xx*dx1"), (1, 1))
        assert solve_graded_linear(P("u1_x*u1_xx*dx1"), (1, 2)).solution == P("1/2*u1_x*u1_x")

    def test_zero_target(self):
        assert solve_graded_linear(Form.zero(B11), (0, 0)).solution == 0

    def test_inhomogeneous_target(self):
        with pytest.raises(BidegreeError):
            solve_graded_linear(P("dx1 + th1^dx1"), (1, 1))

    def test_unknown_operator(self):
        with pytest.raises(ValueError):
            solve_graded_linear(P("dx1"), (0, 1), op="d_V")

    def test_solutions_verified(self, rng):
        for _ in range(50):
            b = Bundle(rng.randint(1, 2), rng.randint(1, 2))
            xi = random_form(rng, b, (rng.randint(0, 1), b.base_dim - 1), max_order=2)
            target = horizontal_d(xi)
            if not target:
                continue
            sol = solve_graded_linear(target, (2, xi.coeff_degree() + 1)).solution
            assert horizontal_d(sol) == target


class TestGradedBasis:
    def test_sizes(self):
        # functions of (x, u, u_x) up to degree 2: C(3+2, 2) monomials
        assert len(graded_basis(B11, (0, 0), 1, 2)) == comb(5, 2)
        # one wedge dx, same coefficients
        assert len(graded_basis(B11, (0, 1), 1, 2)) == comb(5, 2)
        # th, th_x wedged with dx
        assert len(graded_basis(B11, (1, 1), 1, 0)) == 2

    def test_no_duplicates_and_deterministic(self):
        a = graded_basis(B21, (1, 1), 1, 1)
        assert len(set(a.elements)) == len(a)
        assert a.elements == graded_basis(B21, (1, 1), 1, 1).elements

    def test_bad_bidegree(self):
        with pytest.raises(BidegreeError):
            graded_basis(B11, (0, 2), 1, 1)

    @pytest.mark.parametrize("bundle", [B11, B21, B12])
    @pytest.mark.parametrize("bideg", [(0, 0), (1, 0), (0, 1), (1, 1)])
    def test_class_basis_is_filtered_full_basis(self, bundle, bideg):
        n, p = bundle.base_dim, bundle.fiber_dim
        if bideg[1] > n:
            pytest.skip("no such forms")
        full = graded_basis(bundle, bideg, 2, 2)
        classes = {}
        for m, w in full.elements:
            classes.setdefault(term_grading(n, p, m, w), []).append((m, w))
        for grading, elems in classes.items():
            assert list(graded_class_basis(bundle, bideg, 2, 2, grading).elements) == elems
        assert sum(len(v) for v in classes.values()) == len(full)

    def test_forms(self):
        basis = graded_basis(B11, (1, 1), 1, 0)
        assert set(map(str, basis.forms())) == {str(P("th1^dx1")), str(P("th1_x^dx1"))}


class TestDhPotential:
    def test_examples(self):
        assert dh_potential(P("u1_x*dx1")) == P("u1")
        assert dh_potential(P("u1_x*u1_xx*dx1")) == P("1/2*u1_x*u1_x")
        assert dh_potential(P("dx1")) == P("x1")

    def test_negative_control(self):
        with pytest.raises(NoPotential):
            dh_potential(P("th1^dx1"))

    def test_not_closed(self):
        phi = P("u1*dx1", B21)
        with pytest.raises(NotClosed) as exc:
            dh_potential(phi)
        assert exc.value.differential == horizontal_d(phi)

    def test_horizontal_degree_zero(self):
        with pytest.raises(NoPotential):
            dh_potential(P("u1"))

    def test_contact_potential(self):
        phi = horizontal_d(P("u1*th1_x"))
        assert horizontal_d(dh_potential(phi)) == phi

    def test_two_dimensional_divergence(self):
        phi = P("(u1_x*u1_y + u1*u1_xy)*dx1^dx2", B21)
        xi = dh_potential(phi)
        assert horizontal_d(xi) == phi

    def test_max_order_caps_search(self):
        with pytest.raises(NoPotential):
            dh_potential(P("th1^dx1"), max_order=0)

    def test_escalation_reported(self):
        rep = find_potential(P("u1_x*dx1"), initial_bounds=(0, 0))
        assert rep.escalations >= 1
        assert horizontal_d(rep.solution) == P("u1_x*dx1")


def test_order_bound_observation(rng):
    hits = total = 0
    for _ in range(60):
        b = Bundle(rng.randint(1, 2), rng.randint(1, 2))
        xi = random_form(rng, b, (0, b.base_dim - 1), max_order=3, max_degree=2)
        L = horizontal_d(xi)
        if not L:
            continue
        k = L.jet_order()
        rep = find_potential(L)
        assert horizontal_d(rep.solution) == L
        total += 1
        hits += rep.solution.jet_order() <= max(k - 1, 0)
    record_observation(f"potential found at jet order <= k-1 for {hits}/{total} trivial Lagrangians")


class TestVolterra:
    def test_examples(self):
        assert volterra_lagrangian(_src("1")) == P("u1*dx1")
        assert volterra_lagrangian(_src("u1")) == P("1/2*u1*u1*dx1")
        L = volterra_lagrangian(_src("-1*u1_xx"))
        assert L == P("-1/2*u1*u1_xx*dx1")
        assert euler_lagrange(L) == _src("-1*u1_xx")

    def test_helmholtz_failure(self):
        with pytest.raises(HelmholtzFailed) as exc:
            volterra_lagrangian(_src("u1*u1_x"))
        assert exc.value.obstruction == P("u1*th1_x^th1^dx1")

    def test_round_trip(self, rng):
        for _ in range(60):
            b = Bundle(rng.randint(1, 2), rng.randint(1, 2))
            eps = euler_lagrange(random_lagrangian(rng, b))
            assert euler_lagrange(volterra_lagrangian(eps)) == eps

    def test_integral_matches_quadrature(self, rng):
        # int_0^1 u*E[t u] dt by sympy, from samples of t -> E[t u]
        t = sp.Symbol("t")
        for _ in range(40):
            b = Bundle(rng.randint(1, 2), 1)
            L = random_lagrangian(rng, b)
            E = euler_lagrange(L)[1]
            deg = E.degree() + 1
            samples = [fiber_scale(E, j) for j in range(deg + 1)]
            keys = set().union(*(s.terms for s in samples))
            expected = {}
            for m in keys:
                pts = [(j, sp.Rational(str(samples[j].terms.get(m, 0)))) for j in range(deg + 1)]
                val = sp.integrate(sp.interpolate(pts, t), (t, 0, 1))
                if val:
                    expected[m] = Fraction(int(val.p), int(val.q))
            L2 = volterra_lagrangian(SourceForm(b, (E,)))
            assert L2 == volume_form(b) * (DiffPoly.u(1) * DiffPoly(expected))


class TestTriviality:
    def test_examples(self):
        assert triviality_decompose(P("u1_x*dx1")) == P("u1")
        assert triviality_decompose(P("u1_x*u1_xx*dx1")) == P("1/2*u1_x*u1_x")

    def test_not_trivial(self):
        with pytest.raises(NotTrivial) as exc:
            triviality_decompose(P("1/2*u1_x*u1_x*dx1"))
        assert exc.value.euler_lagrange == _src("-1*u1_xx")

    def test_round_trip(self, rng):
        for _ in range(60):
            b = Bundle(rng.randint(1, 2), rng.randint(1, 2))
            xi = random_form(rng, b, (0, b.base_dim - 1), max_order=3, max_degree=2)
            L = horizontal_d(xi)
            assert delta(L) == 0
            assert horizontal_d(triviality_decompose(L)) == L

    def test_two_fields(self):
        L = horizontal_d(P("u1*u2_x", B12))
        assert horizontal_d(triviality_decompose(L)) == L

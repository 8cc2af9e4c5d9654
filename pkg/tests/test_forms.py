import random
import time

import pytest
from conftest import B11, B21, B22, P, f
from hypothesis import given, settings
from hypothesis import strategies as st

from varcalc.forms import (
    Bidegree,
    Form,
    bidegree_parts,
    contract_fiber,
    dx,
    exterior_d,
    h_contact,
    horizontal_d,
    theta,
    vertical_d,
    volume_form,
    wedge,
)
from varcalc.jetalg import Bundle, DiffPoly, MultiIndex
from varcalc.samples import random_form

X = MultiIndex([1])


class TestWedge:
    def test_repeated_factor_vanishes(self):
        assert wedge(P("dx1"), P("dx1")) == 0

    def test_sign_rule(self):
        assert wedge(P("th1"), P("dx1")) == -wedge(P("dx1"), P("th1"))
        assert wedge(P("th1"), P("dx1")) != wedge(P("dx1"), P("th1"))

    def test_coefficients_multiply(self):
        assert wedge(P("u1*th1"), P("u1_x*dx1")) == P("u1*u1_x*th1^dx1")

    def test_bundle_mismatch(self):
        with pytest.raises(ValueError):
            wedge(P("dx1", B11), P("dx1", B21))

    def test_associative(self, rng):
        for _ in range(100):
            b = Bundle(rng.randint(1, 2), rng.randint(1, 2))
            a, c, d = (random_form(rng, b, max_order=2, max_degree=1, max_form_degree=2) for _ in range(3))
            assert wedge(wedge(a, c), d) == wedge(a, wedge(c, d))


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_wedge_graded_commutative(seed):
    rng = random.Random(seed)
    b = Bundle(rng.randint(1, 2), rng.randint(1, 2))
    ka, sa = rng.randint(0, 2), rng.randint(0, b.base_dim)
    kb, sb = rng.randint(0, 2), rng.randint(0, b.base_dim)
    a = random_form(rng, b, (ka, sa), max_order=3, max_degree=2)
    c = random_form(rng, b, (kb, sb), max_order=3, max_degree=2)
    sign = -1 if ((ka + sa) * (kb + sb)) % 2 else 1
    assert wedge(a, c) == wedge(c, a) * sign


class TestDifferentials:
    def test_d_of_function(self):
        assert exterior_d(P("u1")) == P("th1 + u1_x*dx1")

    def test_d_of_contact_form(self):
        # d(th_x) = -du_xx ^ dx = dx ^ th_xx
        assert exterior_d(P("th1_x")) == P("dx1 ^ th1_xx")
        assert exterior_d(P("th1")) == P("dx1 ^ th1_x")

    def test_d_of_dx(self):
        assert exterior_d(P("dx1")) == 0

    def test_dh_examples(self):
        assert horizontal_d(P("u1")) == P("u1_x*dx1")
        assert horizontal_d(P("th1")) == P("dx1^th1_x")
        assert horizontal_d(P("dx1")) == 0

    def test_dv_examples(self):
        assert vertical_d(P("u1*u1_x")) == P("u1_x*th1 + u1*th1_x")
        assert vertical_d(P("x1")) == 0
        assert vertical_d(P("th1_xx")) == 0

    def test_dh_raises_horizontal_degree(self, rng):
        for _ in range(50):
            b = Bundle(2, rng.randint(1, 2))
            phi = random_form(rng, b, (1, 1))
            out = horizontal_d(phi)
            assert out.bidegrees() <= {Bidegree(1, 2)}

    def test_dh_kills_top_horizontal_degree(self, rng):
        for _ in range(100):
            b = Bundle(rng.randint(1, 2), rng.randint(1, 2))
            phi = random_form(rng, b, (rng.randint(0, 2), b.base_dim))
            assert horizontal_d(phi) == 0

    def test_two_dimensional(self):
        assert horizontal_d(P("u1", B21)) == P("u1_x*dx1 + u1_y*dx2", B21)
        assert exterior_d(P("th1", B21)) == P("dx1^th1_x + dx2^th1_y", B21)


def test_bicomplex_identities(rng):
    start = time.perf_counter()
    count = 0
    for _ in range(200):
        b = Bundle(rng.randint(1, 2), rng.randint(1, 2))
        phi = random_form(rng, b, max_order=3, max_degree=2)
        d, dh, dv = exterior_d(phi), horizontal_d(phi), vertical_d(phi)
        assert exterior_d(d) == 0
        assert horizontal_d(dh) == 0
        assert vertical_d(dv) == 0
        assert horizontal_d(dv) + vertical_d(dh) == 0
        assert d == dh + dv
        count += 1
    assert count == 200
    assert time.perf_counter() - start < 60


class TestBidegreeParts:
    def test_example(self):
        parts = bidegree_parts(P("u1*th1^dx1 + u1_x*dx1"))
        assert parts == {Bidegree(1, 1): P("u1*th1^dx1"), Bidegree(0, 1): P("u1_x*dx1")}

    def test_zero(self):
        assert bidegree_parts(Form.zero(B11)) == {}

    def test_two_contact(self):
        assert bidegree_parts(P("th1^th1_x")) == {Bidegree(2, 0): P("th1^th1_x")}

    def test_decomposition_of_identity(self, rng):
        for _ in range(200):
            b = Bundle(rng.randint(1, 2), rng.randint(1, 2))
            phi = random_form(rng, b)
            parts = bidegree_parts(phi)
            assert sum(parts.values(), Form.zero(b)) == phi
            for deg, part in parts.items():
                assert bidegree_parts(part) == {deg: part}
                assert h_contact(h_contact(phi, deg.contact), deg.contact) == h_contact(phi, deg.contact)


class TestContraction:
    def test_examples(self):
        assert contract_fiber(P("u1*th1_x^dx1"), 1, X) == P("u1*dx1")
        assert contract_fiber(P("dx1"), 1, ()) == 0
        assert contract_fiber(P("th1^th1_x"), 1, ()) == P("th1_x")

    def test_antiderivation(self, rng):
        for _ in range(200):
            b = Bundle(rng.randint(1, 2), rng.randint(1, 2))
            k, s = rng.randint(0, 2), rng.randint(0, b.base_dim)
            a = random_form(rng, b, (k, s), max_order=2)
            c = random_form(rng, b, max_order=2)
            i = rng.randint(1, b.fiber_dim)
            multi = rng.choice([(), (1,), (1, 1)])
            lhs = contract_fiber(wedge(a, c), i, multi)
            sign = -1 if (k + s) % 2 else 1
            rhs = wedge(contract_fiber(a, i, multi), c) + wedge(a, contract_fiber(c, i, multi)) * sign
            assert lhs == rhs

    def test_contraction_is_dual_to_theta(self, rng):
        for _ in range(50):
            b = Bundle(rng.randint(1, 2), rng.randint(1, 2))
            i, multi = rng.randint(1, b.fiber_dim), rng.choice([(), (1,), (1, 1)])
            g = Form.function(b, DiffPoly.u(1))
            assert contract_fiber(wedge(Form.theta(b, i, multi), g), i, multi) == g


class TestVolumeForm:
    def test_volume(self):
        assert volume_form(B11) == P("dx1")
        assert volume_form(B21) == P("dx1^dx2", B21)

    @pytest.mark.parametrize("b", [B11, B21, B22])
    def test_top_degree(self, b):
        for lam in range(1, b.base_dim + 1):
            assert wedge(volume_form(b), Form.dx(b, lam)) == 0


def test_form_rejects_out_of_bundle_covectors():
    with pytest.raises(IndexError):
        Form.dx(B11, 2)
    with pytest.raises(IndexError):
        Form.theta(B11, 2)
    with pytest.raises(IndexError):
        Form.theta(B11, 1, [2])


def test_jet_order_counts_contact_factors():
    assert P("u1*th1_xx").jet_order() == 2
    assert P("u1_xxx*dx1").jet_order() == 3


def test_coefficient_lookup_any_order():
    phi = P("u1*th1^dx1")
    assert phi.coefficient([theta(1), dx(1)]) == f("u1")
    assert phi.coefficient([dx(1), theta(1)]) == -f("u1")

"""Seeded random polynomials and forms for property checks and benchmarks."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Tuple

from .forms import Form, canonical, dx, theta
from .jetalg import Bundle, DiffPoly, base_var, fiber_var, mi_enumerate


def random_coefficient(rng: random.Random, fractions: bool = True):
    c = rng.choice([-3, -2, -1, 1, 1, 2, 3])
    if fractions and rng.random() < 0.2:
        return Fraction(c, rng.choice([2, 3]))
    return c


def random_poly(rng: random.Random, bundle: Bundle, max_order: int = 3, max_degree: int = 2,
                max_terms: int = 3, base_prob: float = 0.2, min_degree: int = 0) -> DiffPoly:
    """Sum of up to ``max_terms`` random monomials."""
    n, p = bundle.base_dim, bundle.fiber_dim
    multis = mi_enumerate(n, max_order)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        mono = []
        for _ in range(rng.randint(min_degree, max_degree)):
            if rng.random() < base_prob:
                mono.append(base_var(rng.randint(1, n)))
            else:
                mono.append(fiber_var(rng.randint(1, p), rng.choice(multis)))
        key = tuple(sorted(mono))
        terms[key] = terms.get(key, 0) + random_coefficient(rng)
    return DiffPoly(terms)


def random_wedge(rng: random.Random, bundle: Bundle, contact: int, horizontal: int, max_order: int = 3):
    n, p = bundle.base_dim, bundle.fiber_dim
    multis = mi_enumerate(n, max_order)
    pool = {theta(rng.randint(1, p), rng.choice(multis)) for _ in range(4 * contact)}
    while len(pool) < contact:
        pool.add(theta(rng.randint(1, p), rng.choice(multis)))
    ths = rng.sample(sorted(pool), contact)
    xs = rng.sample(range(1, n + 1), horizontal)
    return tuple(ths) + tuple(dx(lam) for lam in xs)


def random_form(rng: random.Random, bundle: Bundle, bidegree: Optional[Tuple[int, int]] = None,
                max_order: int = 3, max_degree: int = 2, max_terms: int = 3,
                max_form_degree: Optional[int] = None) -> Form:
    """Random form; homogeneous of ``bidegree`` when given, else mixed with
    total form degree at most ``max_form_degree`` (default ``n + 2``)."""
    n = bundle.base_dim
    top = n + 2 if max_form_degree is None else max_form_degree
    out = {}
    for _ in range(rng.randint(1, max_terms)):
        if bidegree is None:
            s = rng.randint(0, n)
            k = rng.randint(0, max(top - s, 0))
        else:
            k, s = bidegree
        w = random_wedge(rng, bundle, k, s, max_order)
        cw, sign = canonical(w)
        if cw is None:
            continue
        f = random_poly(rng, bundle, max_order, max_degree, max_terms=2)
        out[cw] = out.get(cw, DiffPoly.const(0)) + (f if sign > 0 else -f)
    return Form(bundle, out)


def random_bundle(rng: random.Random, max_n: int = 2, max_p: int = 2) -> Bundle:
    return Bundle(rng.randint(1, max_n), rng.randint(1, max_p))


def random_lagrangian(rng: random.Random, bundle: Bundle, max_order: int = 2, max_degree: int = 3) -> Form:
    from .forms import volume_form

    return volume_form(bundle) * random_poly(rng, bundle, max_order, max_degree, max_terms=3)

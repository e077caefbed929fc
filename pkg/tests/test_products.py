"""Product evaluation, derivatives, composition, and critical points.

Oracles: direct per-factor evaluation with plain Python complex arithmetic,
central finite differences for derivatives, and numpy.roots on the
explicitly expanded numerator of the derivative for critical points.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from blaschke import (
    FiniteBlaschkeProduct,
    PoleProximity,
    ZeroOutsideDisk,
    compose,
    critical_points,
)

from conftest import random_product


def direct_eval(zeros, factor, z):
    out = complex(factor)
    for a in zeros:
        out *= (a - z) / (1.0 - a.conjugate() * z)
    return out


def test_eval_matches_direct_formula():
    zeros = (0.3 + 0.1j, -0.2 - 0.4j, 0.0 + 0.0j, 0.55j)
    factor = cmath.exp(0.7j)
    prod = FiniteBlaschkeProduct(zeros=zeros, unimodular_factor=factor)
    rng = np.random.default_rng(7)
    for _ in range(200):
        z = complex(*rng.uniform(-0.7, 0.7, 2))
        assert abs(prod.eval(z) - direct_eval(zeros, factor, z)) < 1e-13


def test_eval_vectorized_agrees_with_scalar():
    prod = random_product(11, 5)
    rng = np.random.default_rng(3)
    zs = rng.uniform(-0.6, 0.6, 40) + 1j * rng.uniform(-0.6, 0.6, 40)
    vec = prod.eval(zs)
    for z, v in zip(zs, vec):
        assert abs(prod.eval(complex(z)) - v) < 1e-14


def test_boundary_modulus_one():
    prod = random_product(23, 6)
    for k in range(128):
        z = cmath.exp(2j * math.pi * k / 128)
        assert abs(abs(prod.eval(z)) - 1.0) < 1e-12


def test_derivative_matches_finite_differences():
    prod = random_product(5, 4)
    rng = np.random.default_rng(9)
    h = 1e-6
    for _ in range(50):
        z = complex(*rng.uniform(-0.6, 0.6, 2))
        fd = (prod.eval(z + h) - prod.eval(z - h)) / (2 * h)
        assert abs(prod.derivative_eval(z) - fd) < 1e-7 * max(1.0, abs(fd))


def test_zero_count_is_order():
    prod = random_product(2, 7)
    assert prod.order == 7
    for a in prod.zeros:
        assert abs(prod.eval(a)) < 1e-12


def test_critical_points_are_derivative_roots_inside_disk():
    prod = random_product(31, 5)
    crit = critical_points(prod)
    # The derivative numerator has n-1 roots inside the open disk.
    assert len(crit) == prod.order - 1
    for c in crit:
        assert abs(c) < 1.0
        assert abs(prod.derivative_eval(c)) < 1e-9


def test_critical_points_against_numpy_roots():
    prod = random_product(13, 4)
    num = np.array(prod.rational_form.numerator)
    den = np.array(prod.rational_form.denominator)
    # (num/den)' numerator = num' * den - num * den'; ascending coefficients.
    d_num = np.polynomial.polynomial.polyder(num)
    d_den = np.polynomial.polynomial.polyder(den)
    full = np.polynomial.polynomial.polysub(
        np.polynomial.polynomial.polymul(d_num, den),
        np.polynomial.polynomial.polymul(num, d_den),
    )
    roots = np.polynomial.polynomial.polyroots(full)
    inside = sorted(
        (complex(r) for r in roots if abs(r) < 1.0),
        key=lambda w: (round(w.real, 9), round(w.imag, 9)),
    )
    got = sorted(
        critical_points(prod), key=lambda w: (round(w.real, 9), round(w.imag, 9))
    )
    assert len(got) == len(inside)
    for a, b in zip(got, inside):
        assert abs(a - b) < 1e-8


def test_power_map_critical_points_collapse_to_origin():
    prod = FiniteBlaschkeProduct(zeros=(0.0,) * 6)
    crit = critical_points(prod)
    assert len(crit) == 5
    for c in crit:
        assert abs(c) < 1e-8


def test_compose_multiplies_orders_and_matches_pointwise():
    outer = random_product(41, 2, rmax=0.5)
    inner = random_product(42, 3, rmax=0.5)
    comp = compose(outer, inner)
    assert comp.order == 6
    rng = np.random.default_rng(1)
    for _ in range(60):
        z = complex(*rng.uniform(-0.6, 0.6, 2))
        assert abs(comp.eval(z) - outer.eval(inner.eval(z))) < 1e-11


def test_constructor_rejects_zero_outside_disk():
    with pytest.raises(ZeroOutsideDisk):
        FiniteBlaschkeProduct(zeros=(1.2 + 0j,))


def test_constructor_rejects_non_unimodular_factor():
    with pytest.raises(ValueError):
        FiniteBlaschkeProduct(zeros=(0.1 + 0j,), unimodular_factor=2.0)


def test_constructor_requires_a_zero():
    with pytest.raises(ValueError):
        FiniteBlaschkeProduct(zeros=())


def test_pole_proximity_raises():
    prod = FiniteBlaschkeProduct(zeros=(0.5 + 0j,))
    with pytest.raises(PoleProximity):
        prod.eval(2.0 + 0j)  # exactly the reflected pole 1/0.5

"""Certified root finding and fiber solving.

Oracle: numpy's companion-matrix root finder on random well-separated
polynomials, and the defining equation phi(z) = w for fibers.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from blaschke import FiniteBlaschkeProduct
from blaschke.polyroots import (
    MULTIPLE_CLUSTER_TOL,
    fiber,
    fiber_coefficients,
    linkage_clusters,
    poly_deflate,
    poly_roots,
    refine_root_cluster,
)

from conftest import random_product


def _sorted(points):
    return sorted(points, key=lambda w: (round(w.real, 8), round(w.imag, 8)))


def _poly_from_roots(roots):
    coeffs = np.array([1.0 + 0j])
    for r in roots:
        coeffs = np.convolve(coeffs, np.array([-r, 1.0]))
    return coeffs  # ascending


def test_poly_roots_matches_numpy_on_random_separated_roots():
    rng = np.random.default_rng(17)
    for _ in range(30):
        k = rng.integers(2, 9)
        roots = rng.uniform(-1, 1, k) + 1j * rng.uniform(-1, 1, k)
        # keep them separated so both methods are unambiguous
        if min(
            (abs(a - b) for i, a in enumerate(roots) for b in roots[i + 1 :]),
            default=1.0,
        ) < 1e-2:
            continue
        coeffs = _poly_from_roots(roots)
        got = _sorted(poly_roots(coeffs))
        want = _sorted(np.polynomial.polynomial.polyroots(coeffs))
        assert len(got) == len(want)
        for a, b in zip(got, want):
            assert abs(a - b) < 1e-8


def test_poly_roots_constant_and_linear():
    assert poly_roots(np.array([3.0 + 0j])) == ()
    (root,) = poly_roots(np.array([-0.6 + 0.2j, 1.0 + 0j]))
    assert abs(root - (0.6 - 0.2j)) < 1e-12


def test_multiple_root_cluster_refines_to_exact_point():
    # (z - a)^5 exercises the k-fold-root certificate.
    a = 0.31 - 0.22j
    coeffs = _poly_from_roots([a] * 5)
    roots = poly_roots(coeffs)
    assert len(roots) == 5
    clusters = linkage_clusters(list(roots), MULTIPLE_CLUSTER_TOL)
    assert len(clusters) == 1
    refined = refine_root_cluster(coeffs, clusters[0])
    assert refined is not None
    assert abs(refined - a) < 1e-10


def test_refine_root_cluster_rejects_a_fake_cluster():
    # Two genuinely simple roots 1e-3 apart are NOT one double root.
    coeffs = _poly_from_roots([0.2, 0.2 + 1e-3])
    refined = refine_root_cluster(coeffs, [0.2, 0.2 + 1e-3])
    assert refined is None


def test_linkage_clusters_chains_through_neighbors():
    pts = [0.0, 1e-5, 2e-5, 0.5, 0.5 + 1e-5]
    clusters = linkage_clusters([complex(p) for p in pts], 1.5e-5)
    sizes = sorted(len(c) for c in clusters)
    assert sizes == [2, 3]


def test_poly_deflate_removes_root():
    a, b, c = 0.4, -0.3 + 0.2j, 0.1 - 0.5j
    coeffs = _poly_from_roots([a, b, c])
    reduced = poly_deflate(coeffs, a)
    got = _sorted(poly_roots(reduced))
    want = _sorted([b, c])
    for x, y in zip(got, want):
        assert abs(x - y) < 1e-10


def test_fiber_solves_the_defining_equation():
    prod = random_product(71, 6)
    rng = np.random.default_rng(4)
    for _ in range(20):
        w = complex(*rng.uniform(-0.5, 0.5, 2))
        points = fiber(prod, w)
        assert len(points) == 6
        for z in points:
            assert abs(prod.eval(z) - w) < 1e-10
            assert abs(z) < 1.0
        # all distinct for a generic value
        assert min(
            abs(a - b) for i, a in enumerate(points) for b in points[i + 1 :]
        ) > 1e-6


def test_fiber_coefficients_encode_phi_minus_w():
    prod = random_product(72, 4)
    w = 0.2 - 0.1j
    coeffs = fiber_coefficients(prod, w)
    for z in (0.1 + 0.3j, -0.4j, 0.25):
        num = np.polynomial.polynomial.polyval(z, coeffs)
        den = np.polynomial.polynomial.polyval(
            z, np.array(prod.rational_form.denominator)
        )
        assert abs(num / den - (prod.eval(z) - w)) < 1e-12


def test_fiber_of_power_map_is_rotated_radicals():
    prod = FiniteBlaschkeProduct(zeros=(0.0,) * 5)
    w = 0.3 + 0.2j
    got = _sorted(fiber(prod, w))
    # phi(z) = -z^5 for five zeros at the origin (factor (-1)^5), so the
    # fiber over w consists of the fifth roots of -w.
    radius = abs(w) ** 0.2
    theta = cmath.phase(-w) / 5
    want = _sorted(
        radius * cmath.exp(1j * (theta + 2 * math.pi * k / 5)) for k in range(5)
    )
    for a, b in zip(got, want):
        assert abs(a - b) < 1e-10

"""Averaging operators over blocks of local inverses and their identities.

Oracles: 50-digit mpmath quadrature for the annulus norms, exact
root-of-unity sums for the eigenvalues, and the defining identities
themselves evaluated with independent arithmetic (explicit sums over
labeled fiber points rather than the operator plumbing).
"""

from __future__ import annotations

import cmath
import math

import mpmath
import numpy as np
import pytest

from blaschke import (
    ZnPartition,
    annulus_monomial_norm,
    apply_E,
    dual_partition,
    eigenvalue_matrix,
    root_of_unity_sum,
    subspace_report,
    verify_boundary_modulus,
    verify_commutativity,
    verify_composition_law,
    verify_eigenrelation,
    verify_power_identity,
)
from blaschke.operators import PhiContext, sample_points

from conftest import corpus_product


def _context(name):
    return PhiContext.build(corpus_product(name))


# ------------------------------------------------------------- annulus norms


def test_annulus_monomial_norm_matches_quadrature():
    mpmath.mp.dps = 30
    r = mpmath.mpf("0.37")
    for k in (-3, -2, -1, 0, 1, 2, 5):
        # ||z^k||^2 over the annulus r < |z| < 1 with area measure:
        # integral_r^1 integral_0^{2pi} s^{2k} s dtheta ds
        want = 2 * mpmath.pi * mpmath.quad(
            lambda s: s ** (2 * k + 1), [r, 1]
        )
        got = annulus_monomial_norm(k, float(r))
        assert abs(got - float(want)) < 1e-12


def test_annulus_norm_logarithmic_exception():
    r = 0.2
    want = 2 * math.pi * math.log(1 / r)
    assert annulus_monomial_norm(-1, r) == pytest.approx(want, rel=1e-12)


def test_annulus_cross_monomials_orthogonal():
    # sanity for the monomial basis: distinct powers integrate to zero
    # around the circle, so the norm formula is diagonal; verified by
    # direct quadrature of one cross term.
    mpmath.mp.dps = 30
    val = mpmath.quad(
        lambda t: mpmath.expjpi(2 * t) * mpmath.conj(mpmath.expjpi(4 * t)),
        [0, 1],
    )
    assert abs(val) < 1e-25


# ----------------------------------------------------------- E_G definition


def test_apply_E_is_the_weighted_block_sum():
    # E_G f = sum over k in G of f(rho_k(z)) rho_k'(z): the composition
    # transform weighted by the local-inverse derivative.
    ctx = _context("square_half")
    block = (1, 3)
    f = lambda w: w**2 + 0.5 * w
    h = 1e-6
    pts = sample_points(ctx, 8)
    for z in pts:
        fam = ctx.family(z)
        explicit = 0.0 + 0.0j
        for k in block:
            # independent derivative: finite differences on rho_k itself
            hi = ctx.family(z + h).points[k]
            lo = ctx.family(z - h).points[k]
            explicit += f(fam.points[k]) * (hi - lo) / (2 * h)
        assert abs(apply_E(ctx, block, f, z) - explicit) < 1e-5


def test_apply_E_identity_block_is_f():
    ctx = _context("square_half")
    f = lambda w: w**3 - 0.2
    for z in sample_points(ctx, 6):
        assert abs(apply_E(ctx, (0,), f, z) - f(z)) < 1e-12


def test_apply_E_linearity():
    ctx = _context("square_half")
    block = (1, 3)
    f = lambda w: w**2
    g = lambda w: 1.0 / (w - 2.0)
    for z in sample_points(ctx, 5):
        lhs = apply_E(ctx, block, lambda w: f(w) + 2.5 * g(w), z)
        rhs = apply_E(ctx, block, f, z) + 2.5 * apply_E(ctx, block, g, z)
        assert abs(lhs - rhs) < 1e-12


# --------------------------------------------------------------- identities


def test_composition_law_residual_small_on_corpus():
    for name in ("power8", "square_half"):
        res = verify_composition_law(_context(name), samples=25)
        assert res.passed, res
        assert res.max_residual < 1e-11


def test_commutativity_residual_small_on_corpus(corpus_analysis):
    result = corpus_analysis("square_quarter")
    res = verify_commutativity(
        result.context, result.partition, samples=25
    )
    assert res.passed
    assert res.max_residual < 1e-10


def test_eigenrelation_small_and_eigenvalues_exact(corpus_analysis):
    result = corpus_analysis("square_half")
    res = verify_eigenrelation(result.context, result.partition, samples=25)
    assert res.passed
    assert res.max_residual < 1e-10


def test_commutativity_holds_even_for_non_blocks():
    # The averaging operators commute for ANY index subsets (composition
    # law consequence); this pins that the verification suite cannot be
    # used as a partition detector, which is why the pipeline re-tracks
    # monodromy instead.
    ctx = _context("square_half")
    fake = ZnPartition.from_blocks(4, [[0, 2], [1, 3]])
    res = verify_commutativity(ctx, fake, samples=10)
    assert res.passed


def test_power_identity_and_boundary_modulus():
    for name in ("power8", "generic8"):
        prod = corpus_product(name)
        ctx = PhiContext.build(prod)
        res_pow = verify_power_identity(ctx.branch)
        assert res_pow.passed
        assert res_pow.max_residual < 1e-10
        res_mod = verify_boundary_modulus(ctx.branch)
        assert res_mod.passed
        assert res_mod.max_residual < 1e-10


# ------------------------------------------------------------ sample points


def test_sample_points_avoid_cuts_and_stay_on_frame():
    ctx = _context("generic8")
    pts = sample_points(ctx, 50)
    assert len(pts) == 50
    assert len(set(pts)) == 50
    for z in pts:
        assert abs(abs(z) - ctx.frame.radius) < 1e-12
        assert ctx.branch.cut_distance(z) > 1e-3


# --------------------------------------------------------- subspace reports


def test_subspace_report_structure():
    p = ZnPartition.from_blocks(8, [[0], [1, 3, 5, 7], [2], [4], [6]])
    rep = subspace_report(p)
    assert rep.q == p.q
    assert len(rep.entries) == dual_partition(p).q
    # exponent residues partition {0..n-1}
    residues = sorted(r for e in rep.entries for r in e.exponent_residues)
    assert residues == list(range(8))
    # exactly one distinguished entry, the one whose dual block contains 0
    distinguished = [e for e in rep.entries if e.distinguished]
    assert len(distinguished) == 1
    assert 0 in distinguished[0].dual_block
    assert distinguished[0].exponent_residues == (7,)


def test_subspace_eigenvalues_match_matrix():
    p = ZnPartition.from_blocks(4, [[0], [1, 3], [2]])
    dual = dual_partition(p)
    matrix = eigenvalue_matrix(p, dual)
    rep = subspace_report(p, dual, matrix)
    for j, entry in enumerate(rep.entries):
        assert entry.dual_block == dual.blocks[j]
        assert entry.eigenvalues == tuple(matrix[k][j] for k in range(p.q))


def test_distinguished_entry_on_generic8():
    p = ZnPartition.from_blocks(8, [[0], list(range(1, 8))])
    rep = subspace_report(p)
    marked = [e for e in rep.entries if e.distinguished]
    assert len(marked) == 1
    # the dual of the generic two-block partition is itself; 0 lies in the
    # singleton dual block, whose exponent residue class is {n-1}
    assert marked[0].dual_block == (0,)
    assert marked[0].exponent_residues == (7,)


def test_eigenvalue_of_block_sum_matches_definition(corpus_analysis):
    # The eigenrelation's exact eigenvalue for exponent i and block G is
    # sum_{j in G} zeta^{j (i+1)}; cross-check the verification suite's
    # bookkeeping against a direct exact computation.
    result = corpus_analysis("square_half")
    n = result.order
    for block in result.partition.blocks:
        for i in range(-2, 5):
            lam = root_of_unity_sum(block, (i + 1) % n, n)
            direct = sum(
                cmath.exp(2j * math.pi * j * ((i + 1) % n) / n) for j in block
            )
            assert abs(lam.complex_value() - direct) < 1e-12

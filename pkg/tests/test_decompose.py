"""Factorization tests: recovering phi = outer o inner from subgroup unions.

Oracle: the factorization contract is compositional, so every recovered
pair is checked by recomposing it on a fresh sample grid chosen here (not
the implementation's internal grid) and comparing against the original
product directly.
"""

from __future__ import annotations

import numpy as np
import pytest

from blaschke import (
    PhiContext,
    factor_from_subgroup,
    parse_expr,
    to_product,
    verify_blaschke,
)

from conftest import CORPUS, IRREDUCIBLE_4, corpus_product, random_product


def recomposition_gap(result, product, count: int = 120) -> float:
    """Sup of |outer(inner(z)) - phi(z)| over a fresh two-radius grid."""
    rng = np.random.default_rng(7)
    radii = rng.uniform(0.85, 0.98, count)
    angles = rng.uniform(0.0, 2.0 * np.pi, count)
    pts = radii * np.exp(1j * angles)
    return float(
        max(
            abs(result.outer.eval(result.inner.eval(z)) - product.eval(z))
            for z in pts
        )
    )


@pytest.fixture(scope="module")
def ctx_cache():
    cache: dict[str, PhiContext] = {}

    def get(name: str) -> PhiContext:
        if name not in cache:
            cache[name] = PhiContext.build(corpus_product(name))
        return cache[name]

    return get


class TestFactorFromSubgroup:
    @pytest.mark.parametrize(
        "name, subgroup",
        [
            ("square_quarter", (0, 4)),
            ("square_quarter", (0, 2, 4, 6)),
            ("square_half", (0, 2)),
            ("quartic_square", (0, 4)),
            ("power8", (0, 4)),
            ("power8", (0, 2, 4, 6)),
        ],
    )
    def test_recomposition_matches_original(self, ctx_cache, name, subgroup):
        ctx = ctx_cache(name)
        result = factor_from_subgroup(ctx, subgroup)
        assert result.subgroup == subgroup
        assert result.residual < 1e-8
        assert recomposition_gap(result, ctx.product) < 1e-7

    @pytest.mark.parametrize(
        "name, subgroup, inner_order, outer_order",
        [
            ("square_quarter", (0, 4), 2, 4),
            ("square_quarter", (0, 2, 4, 6), 4, 2),
            ("square_half", (0, 2), 2, 2),
            ("quartic_square", (0, 4), 2, 4),
        ],
    )
    def test_factor_orders(self, ctx_cache, name, subgroup, inner_order, outer_order):
        result = factor_from_subgroup(ctx_cache(name), subgroup)
        assert result.inner.order == inner_order
        assert result.outer.order == outer_order

    def test_inner_factor_carries_no_phase(self, ctx_cache):
        result = factor_from_subgroup(ctx_cache("square_quarter"), (0, 4))
        assert result.inner.unimodular_factor == 1.0

    def test_power_map_inner_factor_is_a_power_map(self, ctx_cache):
        # For z^8 the subgroup {0,2,4,6} must recover inner ~ z^4 exactly:
        # all four inner zeros at the origin.
        result = factor_from_subgroup(ctx_cache("power8"), (0, 2, 4, 6))
        assert result.inner.order == 4
        assert max(abs(a) for a in result.inner.zeros) < 1e-7

    def test_recovered_factors_are_blaschke_products(self, ctx_cache):
        result = factor_from_subgroup(ctx_cache("square_quarter"), (0, 2, 4, 6))
        for factor in (result.inner, result.outer):
            form = factor.rational_form
            assert verify_blaschke(form.numerator, form.denominator)

    def test_non_subgroup_rejected(self, ctx_cache):
        with pytest.raises(ValueError, match="subgroup"):
            factor_from_subgroup(ctx_cache("power8"), (0, 1))

    def test_trivial_subgroups_rejected(self, ctx_cache):
        ctx = ctx_cache("power8")
        with pytest.raises(ValueError):
            factor_from_subgroup(ctx, (0,))
        with pytest.raises(ValueError):
            factor_from_subgroup(ctx, tuple(range(8)))

    def test_members_reduced_mod_n(self, ctx_cache):
        ctx = ctx_cache("square_half")
        result = factor_from_subgroup(ctx, (0, 2, 4, 6))  # mod 4 -> {0, 2}
        assert result.subgroup == (0, 2)
        assert result.residual < 1e-8


class TestComposedRandomProducts:
    """Products built as explicit compositions must factor back apart."""

    @pytest.mark.parametrize("seed", [300, 301, 302])
    def test_square_of_random_order_two(self, seed):
        inner = random_product(seed, 2)
        outer = random_product(seed + 5000, 2)
        from blaschke import compose

        product = compose(outer, inner)
        ctx = PhiContext.build(product)
        result = factor_from_subgroup(ctx, (0, 2))
        assert result.residual < 1e-8
        assert recomposition_gap(result, product) < 1e-7


class TestVerifyBlaschke:
    @pytest.mark.parametrize("name", sorted(CORPUS))
    def test_corpus_products_verify(self, name):
        form = corpus_product(name).rational_form
        assert verify_blaschke(form.numerator, form.denominator)

    def test_non_unimodular_rational_rejected(self):
        # (0.5 - z) / (1 - 0.3 z) is not modulus-1 on the circle.
        assert not verify_blaschke([0.5, -1.0], [1.0, -0.3])

    def test_zero_outside_disk_rejected(self):
        # (2 - z)/(1 - 2z) has |.|=... modulus 1 nowhere near; more to the
        # point its zero z=2 lies outside the disk.
        assert not verify_blaschke([2.0, -1.0], [1.0, -2.0])

    def test_reciprocal_of_blaschke_rejected(self):
        # Swapping numerator and denominator puts the zero at 1/conj(a),
        # outside the disk.
        form = to_product(parse_expr("mobius(0.5)")).rational_form
        assert not verify_blaschke(form.denominator, form.numerator)

    def test_zero_numerator_rejected(self):
        assert not verify_blaschke([0.0, 0.0], [1.0, -0.5])

    def test_scaled_product_rejected(self):
        form = to_product(parse_expr("mobius(0.5) * mobius(-0.2)")).rational_form
        scaled = [0.5 * c for c in form.numerator]
        assert not verify_blaschke(scaled, form.denominator)

    def test_irreducible_compose_check(self):
        form = to_product(parse_expr(IRREDUCIBLE_4)).rational_form
        assert verify_blaschke(form.numerator, form.denominator)

"""Constructive factorization from a subgroup union of monodromy blocks.

When a union H of partition blocks forms a subgroup of Z_n, the product of
the local inverses over H,

    w(z) = prod over k in H of rho_k(z),

extends to a finite Blaschke product of order |H| (the inner factor), and
the original product factors through it: phi = outer o inner.  The inner
factor is recovered by fitting a rational function of known degree to
samples of w on the working circle; the outer factor is then fitted from
input/output pairs (inner(z), phi(z)).  The only contract on the result is
the composition residual — the pair is unique only up to conjugating a disk
automorphism between the factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import FitIllConditioned, ZeroOutsideDisk
from .operators import PhiContext, sample_points
from .polyroots import (
    MULTIPLE_CLUSTER_TOL,
    linkage_clusters,
    poly_roots,
    refine_root_cluster,
)
from .products import FiniteBlaschkeProduct

__all__ = [
    "FactorizationResult",
    "factor_from_subgroup",
    "verify_blaschke",
    "RESIDUAL_SUCCESS",
]

# A recovered factorization counts as verified when the recomposed product
# matches the original to this tolerance near the boundary.
RESIDUAL_SUCCESS = 1e-8

# Singular-value ratio below which the rational fit has no unique solution.
_CONDITION_FLOOR = 1e-10

# Relative size below which trailing fitted coefficients are treated as zero.
_TRIM_TOL = 1e-6


@dataclass(frozen=True)
class FactorizationResult:
    """A candidate factorization phi ~ outer o inner with its residual."""

    subgroup: tuple[int, ...]
    outer: FiniteBlaschkeProduct
    inner: FiniteBlaschkeProduct
    residual: float

    @property
    def success(self) -> bool:
        return self.residual < RESIDUAL_SUCCESS


def _is_subgroup(subgroup: Sequence[int], n: int) -> bool:
    members = sorted(set(k % n for k in subgroup))
    if 0 not in members:
        return False
    group = set(members)
    return all((a + b) % n in group for a in group for b in group)


def _fit_rational(
    inputs: np.ndarray, outputs: np.ndarray, degree: int, what: str
) -> tuple[np.ndarray, np.ndarray]:
    """Least-squares P, Q (ascending, Q(0) = 1) with outputs ~ P/Q on inputs.

    The normalization is at the constant denominator coefficient: the
    denominator of a finite Blaschke product is prod(1 - conj(b) z), which
    always has value 1 at the origin, whereas its leading coefficient
    vanishes whenever a zero sits at the origin — so a monic-in-leading
    normalization would exclude power maps.
    """
    m = degree
    columns = [inputs**l for l in range(m + 1)]
    columns += [-outputs * inputs**l for l in range(1, m + 1)]
    a = np.stack(columns, axis=1)
    x, _, _, sing = np.linalg.lstsq(a, outputs, rcond=None)
    if sing[0] == 0.0 or sing[-1] < _CONDITION_FLOOR * sing[0]:
        raise FitIllConditioned(
            f"{what}: rational fit is rank-deficient "
            f"(singular-value ratio {sing[-1] / max(sing[0], 1e-300):.2e})"
        )
    numerator = x[: m + 1]
    denominator = np.concatenate([[1.0 + 0.0j], x[m + 1 :]])
    return numerator, denominator


def _blaschke_from_fit(
    numerator: np.ndarray,
    inputs: np.ndarray,
    outputs: np.ndarray,
    degree: int,
    what: str,
) -> FiniteBlaschkeProduct:
    """Build the Blaschke factor with the fitted zeros; phase from samples."""
    scale = float(np.max(np.abs(numerator)))
    if scale == 0.0:
        raise FitIllConditioned(f"{what}: fitted numerator is identically zero")
    coeffs = np.array(numerator, dtype=complex)
    while len(coeffs) > 1 and abs(coeffs[-1]) < _TRIM_TOL * scale:
        coeffs = coeffs[:-1]
    if len(coeffs) - 1 != degree:
        raise FitIllConditioned(
            f"{what}: fitted numerator has degree {len(coeffs) - 1}, "
            f"expected {degree}"
        )
    # Composed factors routinely carry multiple zeros (an outer factor
    # z^k o mobius has a k-fold one); collapse root clusters through the
    # k-fold certificate, since cluster members individually carry only
    # noise^(1/k) accuracy.
    zeros: list[complex] = []
    for cluster in linkage_clusters(poly_roots(coeffs), MULTIPLE_CLUSTER_TOL):
        refined = refine_root_cluster(coeffs, cluster) if len(cluster) > 1 else None
        zeros.extend([refined] * len(cluster) if refined is not None else cluster)
    for zero in zeros:
        if abs(zero) >= 1.0 - 1e-3:
            raise ZeroOutsideDisk(
                f"{what}: recovered zero {zero} is not strictly inside the "
                f"unit disk; the sampled map is not a Blaschke product of "
                f"degree {degree}"
            )
    candidate = FiniteBlaschkeProduct(zeros=tuple(zeros))
    values = np.array([candidate.eval(z) for z in inputs])
    # Least-squares phase: gamma minimizing sum |gamma*values - outputs|^2.
    gamma = complex(np.vdot(values, outputs) / np.vdot(values, values))
    if abs(gamma) == 0.0:
        raise FitIllConditioned(f"{what}: vanishing unimodular factor")
    return FiniteBlaschkeProduct(
        zeros=tuple(zeros), unimodular_factor=gamma / abs(gamma)
    )


def factor_from_subgroup(
    ctx: PhiContext, subgroup: Sequence[int]
) -> FactorizationResult:
    """Recover phi ~ outer o inner from a subgroup union of blocks.

    ``subgroup`` must be a nontrivial proper subgroup of Z_n realized as a
    union of monodromy blocks (as reported by ``subgroup_unions``).  The
    inner factor is normalized to unimodular factor 1; all phase sits in
    the outer factor.  Success is judged solely by ``residual``, the sup of
    |outer(inner(z)) - phi(z)| over fresh samples between the working
    circle and the boundary.
    """
    product = ctx.product
    n = product.order
    members = tuple(sorted(set(k % n for k in subgroup)))
    m = len(members)
    if not _is_subgroup(members, n):
        raise ValueError(f"{members} is not a subgroup of Z_{n}")
    if m in (1, n) or n % m != 0:
        raise ValueError(f"subgroup of size {m} gives no nontrivial factor of {n}")

    # Inner factor: fit w(z) = prod of rho_k(z) over the subgroup.
    z_inner = np.array(sample_points(ctx, 4 * m + 8))
    w_values = np.array(
        [
            np.prod([ctx.family(z).points[k] for k in members])
            for z in z_inner
        ]
    )
    num_in, _ = _fit_rational(z_inner, w_values, m, "inner factor")
    inner = _blaschke_from_fit(num_in, z_inner, w_values, m, "inner factor")
    inner = FiniteBlaschkeProduct(zeros=inner.zeros)  # phase moves outward

    # Outer factor: fit pairs (inner(z), phi(z)).  The inner factor winds
    # m times around the circle, so uniformly spaced z would collapse onto
    # few distinct inputs (exactly so for power maps); golden-angle spacing
    # on two radii keeps the fitted inputs spread out.
    outer_degree = n // m
    count = 4 * outer_degree + 8
    golden = 0.6180339887498949
    angles = 2.0 * np.pi * ((np.arange(count) * golden + 0.271) % 1.0)
    radii = np.where(np.arange(count) % 2 == 0, ctx.frame.radius,
                     0.5 * (1.0 + ctx.frame.radius))
    z_outer = radii * np.exp(1j * angles)
    x_values = np.array([inner.eval(z) for z in z_outer])
    y_values = np.array([product.eval(z) for z in z_outer])
    num_out, _ = _fit_rational(x_values, y_values, outer_degree, "outer factor")
    outer = _blaschke_from_fit(
        num_out, x_values, y_values, outer_degree, "outer factor"
    )

    # Residual on fresh boundary-adjacent samples.
    r_check = 0.5 * (1.0 + ctx.frame.radius)
    z_check = r_check * np.exp(2j * np.pi * (np.arange(200) + 0.271) / 200)
    residual = float(
        max(
            abs(outer.eval(inner.eval(z)) - product.eval(z))
            for z in z_check
        )
    )
    return FactorizationResult(
        subgroup=members, outer=outer, inner=inner, residual=residual
    )


def verify_blaschke(
    numerator: Sequence[complex],
    denominator: Sequence[complex],
    *,
    boundary_points: int = 64,
    tol: float = 1e-8,
) -> bool:
    """True iff the rational function P/Q is a finite Blaschke product.

    Checks the two defining properties: every zero of P lies strictly
    inside the unit disk, and |P/Q| = 1 on the unit circle (within ``tol``
    at ``boundary_points`` samples).
    """
    num = np.array(numerator, dtype=complex)
    den = np.array(denominator, dtype=complex)
    if not len(num) or float(np.max(np.abs(num))) == 0.0:
        return False
    scale = float(np.max(np.abs(num)))
    while len(num) > 1 and abs(num[-1]) < 1e-14 * scale:
        num = num[:-1]
    if len(num) > 1:
        for zero in poly_roots(num):
            if abs(zero) >= 1.0:
                return False
    for s in range(boundary_points):
        z = np.exp(2j * np.pi * (s + 0.123) / boundary_points)
        den_val = np.polyval(den[::-1], z)
        if abs(den_val) < 1e-14:
            return False
        modulus = abs(np.polyval(num[::-1], z) / den_val)
        if abs(modulus - 1.0) > tol:
            return False
    return True

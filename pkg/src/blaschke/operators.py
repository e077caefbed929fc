"""Block transforms over the local-inverse family and their verification.

For a block G of residues mod n, the transform of a function f is

    (E_G f)(z) = sum over k in G of f(rho_k(z)) * rho_k'(z),

where rho_k is the k-th labeled local inverse.  On the working circle these
transforms commute pairwise when the blocks come from the monodromy
partition, they obey the mod-n composition law of the rho_k, and the
functions u^i * u' are joint eigenfunctions:

    E_G (u^i u') = (sum over k in G of zeta^(k*(i+1))) * u^i u'.

The eigenvalues are exact cyclotomic integers; the verification routines
compare floating evaluations against them.

Annulus normalization used by the tests: on A_r = {r < |z| < 1} the
monomials are orthogonal with

    <z^k, z^k> = pi * (1 - r^(2k+2)) / (k+1)   for integer k != -1,
    <z^-1, z^-1> = 2 * pi * ln(1/r),

which is what makes {u^i u'} an orthogonal family after the change of
variables w = u(z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (
    CutProximity,
    FrameNotFound,
    LabelingAmbiguity,
    NewtonDivergence,
    RootFindingFailure,
)
from .monodromy import BranchLocus, branch_locus
from .nthroot import (
    AnnulusFrame,
    NthRootBranch,
    build_branch,
    choose_frame,
    label_fiber,
    u_derivative,
    u_eval,
)
from .products import FiniteBlaschkeProduct
from .znarith import (
    ZnPartition,
    dual_partition,
    eigenvalue_matrix,
    root_of_unity_sum,
)

__all__ = [
    "FiberFamily",
    "PhiContext",
    "VerificationResult",
    "SubspaceEntry",
    "SubspaceReport",
    "apply_E",
    "sample_points",
    "verify_commutativity",
    "verify_composition_law",
    "verify_eigenrelation",
    "verify_power_identity",
    "verify_boundary_modulus",
    "subspace_report",
    "annulus_monomial_norm",
]

_FAMILY_ERRORS = (
    CutProximity,
    LabelingAmbiguity,
    NewtonDivergence,
    RootFindingFailure,
)


@dataclass(frozen=True)
class FiberFamily:
    """All n local-inverse values and derivatives at one point.

    ``points[k] = rho_k(z)``, ``rho_derivatives[k] = rho_k'(z)``,
    ``u_values[k] = u(rho_k(z))`` and ``u_derivatives[k] = u'(rho_k(z))``.
    """

    base: complex
    value: complex
    points: tuple[complex, ...]
    rho_derivatives: tuple[complex, ...]
    u_values: tuple[complex, ...]
    u_derivatives: tuple[complex, ...]


@dataclass(eq=False)
class PhiContext:
    """Product plus the branch/frame data every transform evaluation needs.

    Families are cached per point: one labeled-fiber solve serves all n
    local inverses, every block transform, and the nested evaluations of
    the commutativity check.
    """

    product: FiniteBlaschkeProduct
    branch: NthRootBranch
    frame: AnnulusFrame
    locus: BranchLocus | None = None
    _families: dict[complex, FiberFamily] = field(
        default_factory=dict, repr=False, compare=False
    )

    @classmethod
    def build(cls, product: FiniteBlaschkeProduct) -> "PhiContext":
        locus = branch_locus(product) if product.order >= 2 else None
        branch = build_branch(product)
        if locus is not None:
            hull = locus.hull_radius
        else:
            hull = max((abs(a) for a in product.zeros), default=0.0)
        frame = choose_frame(branch, hull)
        return cls(product=product, branch=branch, frame=frame, locus=locus)

    @property
    def order(self) -> int:
        return self.product.order

    def family(self, z: complex) -> FiberFamily:
        key = complex(z)
        hit = self._families.get(key)
        if hit is not None:
            return hit
        labeled = label_fiber(self.branch, key)
        u_values = tuple(complex(u_eval(self.branch, w)) for w in labeled.points)
        u_derivs = tuple(complex(u_derivative(self.branch, w)) for w in labeled.points)
        n = self.order
        zetas = np.exp(2j * np.pi * np.arange(n) / n)
        rho_derivs = tuple(
            complex(zetas[k] * u_derivs[0] / u_derivs[k]) for k in range(n)
        )
        fam = FiberFamily(
            base=key,
            value=labeled.value,
            points=labeled.points,
            rho_derivatives=rho_derivs,
            u_values=u_values,
            u_derivatives=u_derivs,
        )
        self._families[key] = fam
        return fam


@dataclass(frozen=True)
class VerificationResult:
    """Outcome of one residual check."""

    name: str
    max_residual: float
    tol: float
    passed: bool
    samples: int
    detail: str = ""

    def __str__(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"{self.name}: max residual {self.max_residual:.3e} "
            f"(tol {self.tol:.1e}, {self.samples} samples) {verdict}"
        )


def sample_points(
    ctx: PhiContext,
    count: int,
    *,
    offset: float = 0.2937,
    density: int = 4,
) -> tuple[complex, ...]:
    """Deterministic points on the working circle whose fibers label cleanly."""
    radius = ctx.frame.radius
    total = max(density * count, count)
    # Visit a uniform count-point grid first; the denser interleaved grids
    # only fill slots whose primary angle failed, so the collected points
    # stay spread over the whole circle instead of crowding one arc.
    order = sorted(range(total), key=lambda s: (s % density, s // density))
    points: list[complex] = []
    for s in order:
        z = complex(radius * np.exp(2j * np.pi * (s + offset) / total))
        try:
            ctx.family(z)
        except _FAMILY_ERRORS:
            continue
        points.append(z)
        if len(points) == count:
            return tuple(points)
    raise FrameNotFound(
        f"only {len(points)} of {count} requested sample points on the "
        f"working circle admit a cleanly labeled fiber"
    )


def apply_E(
    ctx: PhiContext,
    block: Iterable[int],
    f: Callable[[complex], complex],
    z: complex,
) -> complex:
    """Evaluate the block transform: sum of f(rho_k(z)) * rho_k'(z) over k."""
    fam = ctx.family(z)
    return sum(
        complex(f(fam.points[k % ctx.order])) * fam.rho_derivatives[k % ctx.order]
        for k in block
    )


def _nested_families(
    ctx: PhiContext, fam: FiberFamily
) -> list[FiberFamily | None]:
    """Families at every rho_k(z); None where the fiber point sits on a cut."""
    out: list[FiberFamily | None] = []
    for w in fam.points:
        try:
            out.append(ctx.family(w))
        except _FAMILY_ERRORS:
            out.append(None)
    return out


def verify_composition_law(
    ctx: PhiContext,
    *,
    samples: int = 50,
    tol: float = 1e-9,
) -> VerificationResult:
    """Max over k, k' and sample z of |rho_k(rho_k'(z)) - rho_(k+k')(z)|."""
    n = ctx.order
    worst = 0.0
    used = 0
    skipped = 0
    for z in sample_points(ctx, samples):
        fam = ctx.family(z)
        nested = _nested_families(ctx, fam)
        if any(inner is None for inner in nested):
            skipped += 1
            continue
        used += 1
        for kp in range(n):
            inner = nested[kp]
            for k in range(n):
                delta = abs(inner.points[k] - fam.points[(k + kp) % n])
                if delta > worst:
                    worst = delta
    detail = f"{skipped} points skipped near cuts" if skipped else ""
    return VerificationResult(
        name="composition-law",
        max_residual=worst,
        tol=tol,
        passed=used > 0 and worst < tol,
        samples=used,
        detail=detail,
    )


def verify_commutativity(
    ctx: PhiContext,
    partition: ZnPartition,
    *,
    samples: int = 50,
    tol: float = 1e-8,
    max_power: int = 6,
) -> VerificationResult:
    """Max residual of E_G E_H f - E_H E_G f over block pairs and monomials f."""
    n = ctx.order
    blocks = partition.blocks
    q = len(blocks)
    powers = range(max_power + 1)
    worst = 0.0
    used = 0
    skipped = 0
    for z in sample_points(ctx, samples):
        fam = ctx.family(z)
        nested = _nested_families(ctx, fam)
        if any(inner is None for inner in nested):
            skipped += 1
            continue
        used += 1
        # inner_values[a][m] = (E_{block b} applied after rho_a) building block:
        # value of sum_{b in H} f_m(rho_b(rho_a z)) rho_b'(rho_a z) for each H.
        transforms = np.empty((q, q, len(powers)), dtype=complex)
        for bi, outer_block in enumerate(blocks):
            for bj, inner_block in enumerate(blocks):
                for m in powers:
                    acc = 0.0 + 0.0j
                    for a in outer_block:
                        inner = nested[a]
                        inner_sum = sum(
                            inner.points[b] ** m * inner.rho_derivatives[b]
                            for b in inner_block
                        )
                        acc += inner_sum * fam.rho_derivatives[a]
                    transforms[bi, bj, m] = acc
        residual = float(
            np.max(np.abs(transforms - np.transpose(transforms, (1, 0, 2))))
        )
        if residual > worst:
            worst = residual
    detail = f"{skipped} points skipped near cuts" if skipped else ""
    return VerificationResult(
        name="commutativity",
        max_residual=worst,
        tol=tol,
        passed=used > 0 and worst < tol,
        samples=used,
        detail=detail,
    )


def verify_eigenrelation(
    ctx: PhiContext,
    partition: ZnPartition,
    *,
    samples: int = 50,
    tol: float = 1e-8,
    exponents: Sequence[int] = tuple(range(-3, 9)),
) -> VerificationResult:
    """Check E_G(u^i u') = (sum of zeta^(k(i+1)) over k in G) * u^i u'.

    The eigenvalue is evaluated exactly in the cyclotomic ring and compared
    against the floating transform pointwise.
    """
    n = ctx.order
    worst = 0.0
    pts = sample_points(ctx, samples)
    eigen = {
        (tuple(block), i): complex(
            root_of_unity_sum(block, (i + 1) % n, n).complex_value()
        )
        for block in partition.blocks
        for i in exponents
    }
    for z in pts:
        fam = ctx.family(z)
        for i in exponents:
            f_at = [
                fam.u_values[k] ** i * fam.u_derivatives[k] for k in range(n)
            ]
            f_base = f_at[0]
            for block in partition.blocks:
                applied = sum(f_at[k] * fam.rho_derivatives[k] for k in block)
                expected = eigen[(tuple(block), i)] * f_base
                residual = abs(applied - expected)
                if residual > worst:
                    worst = residual
    return VerificationResult(
        name="eigenrelation",
        max_residual=worst,
        tol=tol,
        passed=worst < tol,
        samples=len(pts),
    )


def verify_power_identity(
    branch: NthRootBranch,
    *,
    points: int = 200,
    tol: float = 1e-10,
) -> VerificationResult:
    """Check u(z)^n = phi(z) on a grid keeping distance > 1e-3 from the cuts."""
    n = branch.order
    product = branch.product
    collected = 0
    worst = 0.0
    rings = 8
    per_ring = 64
    for ri in range(rings):
        r = 0.12 + 0.85 * (ri + 0.5) / rings
        for s in range(per_ring):
            if collected >= points:
                break
            z = complex(r * np.exp(2j * np.pi * (s + 0.31) / per_ring))
            if branch.cut_distance(z) <= 1e-3:
                continue
            residual = abs(u_eval(branch, z) ** n - product.eval(z))
            collected += 1
            if residual > worst:
                worst = residual
    return VerificationResult(
        name="nth-root-power-identity",
        max_residual=worst,
        tol=tol,
        passed=collected > 0 and worst < tol,
        samples=collected,
    )


def verify_boundary_modulus(
    branch: NthRootBranch,
    *,
    points: int = 64,
    tol: float = 1e-10,
) -> VerificationResult:
    """Check | |u(z)| - 1 | on the unit circle."""
    worst = 0.0
    for s in range(points):
        z = complex(np.exp(2j * np.pi * (s + 0.17) / points))
        residual = abs(abs(u_eval(branch, z)) - 1.0)
        if residual > worst:
            worst = residual
    return VerificationResult(
        name="boundary-modulus",
        max_residual=worst,
        tol=tol,
        passed=worst < tol,
        samples=points,
    )


@dataclass(frozen=True)
class SubspaceEntry:
    """One minimal reducing subspace, described by its dual block.

    The subspace is the closure of the span of the functions u^i u' whose
    exponents i satisfy (i+1) mod n in ``dual_block``; ``exponent_residues``
    lists those residues.  ``eigenvalues[k]`` is the exact transform
    eigenvalue of the subspace under the block-k transform.  The entry whose
    dual block contains 0 carries the distinguished flag: its exponent class
    is n-1, it contains the derivative of the product (phi' = n u^(n-1) u'),
    and the multiplication operator restricted to it acts like coordinate
    multiplication on the disk's Bergman space.
    """

    dual_block: tuple[int, ...]
    exponent_residues: tuple[int, ...]
    eigenvalues: tuple
    distinguished: bool


@dataclass(frozen=True)
class SubspaceReport:
    """Structured description of the q minimal reducing subspaces."""

    n: int
    partition: ZnPartition
    dual: ZnPartition
    entries: tuple[SubspaceEntry, ...]

    @property
    def q(self) -> int:
        return len(self.entries)


def subspace_report(
    partition: ZnPartition,
    dual: ZnPartition | None = None,
    matrix: tuple[tuple, ...] | None = None,
) -> SubspaceReport:
    """Assemble the q-entry reducing-subspace report from the dual partition."""
    n = partition.n
    if dual is None:
        dual = dual_partition(partition)
    if matrix is None:
        matrix = eigenvalue_matrix(partition, dual)
    entries = []
    seen: set[int] = set()
    for j, dual_block in enumerate(dual.blocks):
        residues = tuple(sorted((l - 1) % n for l in dual_block))
        seen.update(residues)
        entries.append(
            SubspaceEntry(
                dual_block=dual_block,
                exponent_residues=residues,
                eigenvalues=tuple(matrix[k][j] for k in range(len(partition.blocks))),
                distinguished=0 in dual_block,
            )
        )
    if seen != set(range(n)):
        raise AssertionError("exponent residues do not cover Z_n")
    if sum(1 for e in entries if e.distinguished) != 1:
        raise AssertionError("exactly one subspace must be distinguished")
    return SubspaceReport(n=n, partition=partition, dual=dual, entries=tuple(entries))


def annulus_monomial_norm(k: int, r: float) -> float:
    """Squared Bergman norm of z^k on the annulus r < |z| < 1.

    Direct polar integration of |z^k|^2 gives pi (1 - r^(2k+2)) / (k+1)
    for k != -1 and 2 pi ln(1/r) for k = -1.
    """
    if not 0.0 < r < 1.0:
        raise ValueError(f"inner radius {r} outside (0, 1)")
    if k == -1:
        return 2.0 * math.pi * math.log(1.0 / r)
    return math.pi * (1.0 - r ** (2 * k + 2)) / (k + 1)

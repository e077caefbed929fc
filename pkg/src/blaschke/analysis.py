"""End-to-end analysis pipeline for one finite Blaschke product.

Orchestration order: branch locus -> single-valued n-th root -> certified
working frame -> loop generation -> fiber continuation around each locus
point -> orbit partition, followed by the exact Z_n annotations (dual
partition, admissibility conditions, eigenvalue table, subgroup unions),
numerical verification of the operator identities, and a factorization
attempt for every nontrivial subgroup union of blocks.

Status semantics:

* ``FAILED`` — a structural invariant is violated: the computed partition
  is not arithmetically admissible, or the dual block count disagrees with
  the block count.  These are theorems for genuine monodromy partitions, so
  a violation means the computation cannot be trusted at all.
* ``LOW_CONFIDENCE`` — the partition is internally consistent but an
  independent cross-check degraded: the full working-circle loop did not
  come back as the identity permutation, two branch-locus points fell
  within the merge window (their loops may have been conflated), a
  verification residual exceeded its tolerance, or a claimed factorization
  did not reach its residual target.
* ``PASS`` — everything above held.
"""

from __future__ import annotations

from dataclasses import dataclass

from .decompose import FactorizationResult, factor_from_subgroup
from .errors import BlaschkeError
from .monodromy import (
    MERGE_SEPARATION,
    BranchLocus,
    Loop,
    branch_locus,
    make_loops,
    monodromy_generator,
    orbit_partition,
)
from .nthroot import build_branch, choose_frame
from .operators import (
    PhiContext,
    SubspaceReport,
    VerificationResult,
    subspace_report,
    verify_boundary_modulus,
    verify_commutativity,
    verify_composition_law,
    verify_eigenrelation,
    verify_power_identity,
)
from .products import FiniteBlaschkeProduct, critical_points
from .znarith import (
    SubgroupUnion,
    ZnPartition,
    check_alpha0,
    check_alpha1,
    check_alpha2,
    check_alpha3,
    dual_partition,
    eigenvalue_matrix,
    is_reducible,
    singletons,
    subgroup_unions,
)

__all__ = [
    "AnalysisResult",
    "FactorizationAttempt",
    "analyze",
    "LOCUS_SEPARATION_FLOOR",
]

# Two locus points closer than this were merged into one joint loop by the
# loop planner, so a generator was replaced by a product of generators and
# the partition may come out finer than the truth; such runs are flagged.
LOCUS_SEPARATION_FLOOR = MERGE_SEPARATION


@dataclass(frozen=True)
class FactorizationAttempt:
    """Result (or failure) of factoring through one subgroup union."""

    subgroup: tuple[int, ...]
    result: FactorizationResult | None
    error_code: str | None = None
    error_message: str | None = None

    @property
    def success(self) -> bool:
        return self.result is not None and self.result.success


@dataclass(frozen=True)
class AnalysisResult:
    """Everything the pipeline established about one product."""

    product: FiniteBlaschkeProduct
    expression: str | None
    order: int
    status: str
    notes: tuple[str, ...]
    partition: ZnPartition
    dual: ZnPartition
    q: int
    alpha: dict[str, bool]
    admissible: bool
    generators: tuple[tuple[int, ...], ...]
    full_circle: tuple[int, ...] | None
    full_circle_identity: bool | None
    critical: tuple[complex, ...]
    locus: BranchLocus | None
    locus_min_separation: float | None
    loops: tuple[Loop, ...]
    context: PhiContext
    eigen_matrix: tuple[tuple, ...]
    subspaces: SubspaceReport
    unions: tuple[SubgroupUnion, ...]
    reducible: bool
    factorizations: tuple[FactorizationAttempt, ...]
    residuals: dict[str, VerificationResult]

    @property
    def passed(self) -> bool:
        return self.status == "PASS"


def _corrupted(perm: tuple[int, ...]) -> tuple[int, ...]:
    """Deliberately wrong permutation: swap the images 1 and 2."""
    return tuple(2 if v == 1 else 1 if v == 2 else v for v in perm)


def _min_pairwise(points: list[complex]) -> float | None:
    if len(points) < 2:
        return None
    return min(
        abs(points[i] - points[j])
        for i in range(len(points))
        for j in range(i + 1, len(points))
    )


def analyze(
    product: FiniteBlaschkeProduct,
    *,
    expression: str | None = None,
    samples: int = 50,
    tol: float = 1e-8,
    run_identities: bool = True,
    run_factorization: bool = True,
    corrupt_generator: bool = False,
) -> AnalysisResult:
    """Run the full pipeline on one product.

    ``samples`` controls the sample count of each verification identity;
    ``tol`` is the pass bar for the commutativity and eigenrelation
    residuals (the composition law is held to ``tol/10``).

    ``corrupt_generator`` deliberately corrupts the first monodromy
    generator after continuation (a negative control used by the
    verification command's test mode; requires order >= 3).
    """
    n = product.order
    if corrupt_generator and n < 3:
        raise ValueError(
            "generator corruption needs order >= 3 and a nonempty locus"
        )
    notes: list[str] = []

    if n >= 2:
        locus = branch_locus(product)
        branch = build_branch(product)
        frame = choose_frame(branch, locus.hull_radius)
        loops = tuple(make_loops(locus, frame))
        generators: list[tuple[int, ...]] = []
        full_circle: tuple[int, ...] | None = None
        for loop in loops:
            perm = monodromy_generator(product, frame, loop, locus.values)
            if loop.target_index is None:
                full_circle = perm
            else:
                generators.append(perm)
        if corrupt_generator:
            if n < 3 or not generators:
                raise ValueError(
                    "generator corruption needs order >= 3 and a nonempty locus"
                )
            generators[0] = _corrupted(generators[0])
        partition = orbit_partition(n, generators)
        critical = critical_points(product)
        locus_sep = _min_pairwise([lp.point for lp in locus.points])
    else:
        locus = None
        branch = build_branch(product)
        frame = choose_frame(branch, abs(product.zeros[0]))
        loops = ()
        generators = []
        full_circle = None
        partition = singletons(1)
        critical = ()
        locus_sep = None

    context = PhiContext(product=product, branch=branch, frame=frame, locus=locus)

    dual = dual_partition(partition)
    q = partition.q
    ok1, _ = check_alpha1(partition)
    ok2, _ = check_alpha2(partition)
    ok3, _ = check_alpha3(partition)
    alpha = {
        "alpha0": check_alpha0(partition),
        "alpha1": ok1,
        "alpha2": ok2,
        "alpha3": ok3,
    }
    admissible = all(alpha.values())
    matrix = eigenvalue_matrix(partition, dual)
    subspaces = subspace_report(partition, dual, matrix)
    unions = subgroup_unions(partition)
    reducible = is_reducible(partition)

    failed = False
    if not admissible:
        failed = True
        bad = ", ".join(k for k, v in alpha.items() if not v)
        notes.append(f"computed partition violates admissibility ({bad})")
    if dual.q != q:
        failed = True
        notes.append(
            f"dual partition has {dual.q} blocks but the partition has {q}"
        )
    if full_circle is not None and full_circle != tuple(range(n)):
        notes.append(
            "full working-circle monodromy is not the identity permutation"
        )
    if locus_sep is not None and locus_sep < LOCUS_SEPARATION_FLOOR:
        notes.append(
            f"two branch-locus points are within {locus_sep:.2e}; "
            f"they share a joint loop, so the computed partition may be "
            f"finer than the true one"
        )

    residuals: dict[str, VerificationResult] = {}
    if run_identities:
        residuals["power_identity"] = verify_power_identity(branch)
        residuals["boundary_modulus"] = verify_boundary_modulus(branch)
        residuals["composition_law"] = verify_composition_law(
            context, samples=samples, tol=tol / 10.0
        )
        residuals["commutativity"] = verify_commutativity(
            context, partition, samples=samples, tol=tol
        )
        residuals["eigenrelation"] = verify_eigenrelation(
            context, partition, samples=samples, tol=tol
        )
        for res in residuals.values():
            if not res.passed:
                notes.append(
                    f"{res.name} residual {res.max_residual:.2e} "
                    f"exceeds tolerance {res.tol:.1e}"
                )

    factorizations: list[FactorizationAttempt] = []
    if run_factorization:
        for union in unions:
            if union.trivial:
                continue
            try:
                result = factor_from_subgroup(context, union.elements)
                factorizations.append(
                    FactorizationAttempt(subgroup=union.elements, result=result)
                )
                if not result.success:
                    notes.append(
                        f"factorization through {union.elements} reached "
                        f"residual {result.residual:.2e} only"
                    )
            except BlaschkeError as exc:
                factorizations.append(
                    FactorizationAttempt(
                        subgroup=union.elements,
                        result=None,
                        error_code=exc.code,
                        error_message=str(exc),
                    )
                )
                notes.append(
                    f"factorization through {union.elements} failed: {exc.code}"
                )

    if failed:
        status = "FAILED"
    elif notes:
        status = "LOW_CONFIDENCE"
    else:
        status = "PASS"

    return AnalysisResult(
        product=product,
        expression=expression,
        order=n,
        status=status,
        notes=tuple(notes),
        partition=partition,
        dual=dual,
        q=q,
        alpha=alpha,
        admissible=admissible,
        generators=tuple(generators),
        full_circle=full_circle,
        full_circle_identity=(
            None if full_circle is None else full_circle == tuple(range(n))
        ),
        critical=critical,
        locus=locus,
        locus_min_separation=locus_sep,
        loops=loops,
        context=context,
        eigen_matrix=matrix,
        subspaces=subspaces,
        unions=unions,
        reducible=reducible,
        factorizations=tuple(factorizations),
        residuals=residuals,
    )

"""Monodromy, reducing-subspace counts, and factorization of finite
Blaschke products on the unit disk.

Layered API, bottom up:

* ``products``    — the finite Blaschke product itself: evaluation,
  derivative, rational form, critical points, composition.
* ``polyroots``   — certified simultaneous root finding, cluster
  detection/refinement, and fiber solving for phi(z) = w.
* ``nthroot``     — a single-valued branch u of the n-th root of phi on
  the complement of a radial cut system (u^n = phi), labeled fibers on a
  certified working circle, and the labeled local inverses of u.
* ``monodromy``   — branch locus, loop planning, fiber continuation, the
  permutation each loop induces, and the orbit partition of the labels.
* ``znarith``     — exact cyclotomic arithmetic on Z_n: root-of-unity
  block sums, the dual partition, the admissibility conditions, subgroup
  unions, reducibility, and the eigenvalue table.
* ``classify``    — enumeration of all admissible partitions of Z_n with
  structural scenario grouping.
* ``operators``   — the averaging operator over a block of local
  inverses, and numerical verification of the operator identities
  (commutativity, composition law, eigenrelations, power identity,
  boundary modulus).
* ``decompose``   — constructive factorization phi = outer ∘ inner from a
  subgroup union of partition blocks, via rational least squares.
* ``analysis``    — the end-to-end pipeline combining all of the above
  with status semantics (PASS / LOW_CONFIDENCE / FAILED).
* ``expressions`` — the product-expression grammar ("mobius(0.5)^2 @ z^4").
* ``report``      — JSON serialization of analysis results.
* ``svgplot``     — deterministic SVG rendering of the disk picture.
* ``cli``         — the ``blaschke`` command (analyze/classify/verify/plot).
"""

from .analysis import AnalysisResult, FactorizationAttempt, analyze
from .classify import classify_report, enumerate_admissible
from .decompose import (
    FactorizationResult,
    factor_from_subgroup,
    verify_blaschke,
)
from .errors import (
    BlaschkeError,
    ContinuationCollision,
    CutProximity,
    DegenerateProduct,
    ExpressionSyntaxError,
    FitIllConditioned,
    FrameNotFound,
    LabelingAmbiguity,
    LoopPlanningFailure,
    MatchingAmbiguity,
    NewtonDivergence,
    ParameterOutOfDisk,
    PoleProximity,
    RootFindingFailure,
    SizeLimit,
    StepUnderflow,
    ZeroOutsideDisk,
)
from .expressions import expr_text, expression_order, parse_expr, to_product
from .monodromy import (
    BranchLocus,
    Loop,
    branch_locus,
    make_loops,
    monodromy_generator,
    orbit_partition,
)
from .nthroot import (
    build_branch,
    choose_frame,
    label_fiber,
    local_inverse,
    local_inverse_derivative,
    u_eval,
)
from .operators import (
    PhiContext,
    SubspaceReport,
    VerificationResult,
    annulus_monomial_norm,
    apply_E,
    subspace_report,
    verify_boundary_modulus,
    verify_commutativity,
    verify_composition_law,
    verify_eigenrelation,
    verify_power_identity,
)
from .products import FiniteBlaschkeProduct, compose, critical_points
from .report import analysis_report, dumps
from .svgplot import cut_polyline, render_disk
from .znarith import (
    ZnPartition,
    check_alpha0,
    check_alpha1,
    check_alpha2,
    check_alpha3,
    dual_partition,
    eigenvalue_matrix,
    is_admissible,
    is_reducible,
    root_of_unity_sum,
    singletons,
    subgroup_unions,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisResult",
    "BlaschkeError",
    "BranchLocus",
    "ContinuationCollision",
    "CutProximity",
    "DegenerateProduct",
    "ExpressionSyntaxError",
    "FactorizationAttempt",
    "FactorizationResult",
    "FiniteBlaschkeProduct",
    "FitIllConditioned",
    "FrameNotFound",
    "LabelingAmbiguity",
    "Loop",
    "LoopPlanningFailure",
    "MatchingAmbiguity",
    "NewtonDivergence",
    "ParameterOutOfDisk",
    "PhiContext",
    "PoleProximity",
    "RootFindingFailure",
    "SizeLimit",
    "StepUnderflow",
    "SubspaceReport",
    "VerificationResult",
    "ZeroOutsideDisk",
    "ZnPartition",
    "analysis_report",
    "analyze",
    "annulus_monomial_norm",
    "apply_E",
    "branch_locus",
    "build_branch",
    "check_alpha0",
    "check_alpha1",
    "check_alpha2",
    "check_alpha3",
    "choose_frame",
    "classify_report",
    "compose",
    "critical_points",
    "cut_polyline",
    "dual_partition",
    "dumps",
    "eigenvalue_matrix",
    "enumerate_admissible",
    "expr_text",
    "expression_order",
    "factor_from_subgroup",
    "is_admissible",
    "is_reducible",
    "label_fiber",
    "local_inverse",
    "local_inverse_derivative",
    "make_loops",
    "monodromy_generator",
    "orbit_partition",
    "parse_expr",
    "render_disk",
    "root_of_unity_sum",
    "singletons",
    "subgroup_unions",
    "subspace_report",
    "to_product",
    "u_eval",
    "verify_blaschke",
    "verify_boundary_modulus",
    "verify_commutativity",
    "verify_composition_law",
    "verify_eigenrelation",
    "verify_power_identity",
]

"""JSON views of analysis results.

Serialization conventions: complex numbers become two-element arrays
``[re, im]``; exact cyclotomic integers become objects with their integer
coefficient array (in the power basis of the n-th cyclotomic field) plus a
floating rendering; partitions become sorted lists of sorted blocks.
"""

from __future__ import annotations

import json
from typing import Any

from .analysis import AnalysisResult, FactorizationAttempt
from .monodromy import BranchLocus
from .operators import SubspaceReport, VerificationResult
from .products import FiniteBlaschkeProduct
from .znarith import CyclotomicElement, ZnPartition

__all__ = [
    "complex_pair",
    "cyclotomic_view",
    "partition_view",
    "product_view",
    "verification_view",
    "analysis_report",
    "dumps",
]


def complex_pair(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def cyclotomic_view(value: CyclotomicElement) -> dict[str, Any]:
    return {
        "coeffs": [int(c) for c in value.coeffs],
        "value": complex_pair(value.complex_value()),
    }


def partition_view(p: ZnPartition) -> list[list[int]]:
    return [list(block) for block in p.blocks]


def product_view(product: FiniteBlaschkeProduct) -> dict[str, Any]:
    return {
        "order": product.order,
        "zeros": [complex_pair(a) for a in product.zeros],
        "unimodular_factor": complex_pair(product.unimodular_factor),
    }


def verification_view(res: VerificationResult) -> dict[str, Any]:
    view: dict[str, Any] = {
        "max_residual": float(res.max_residual),
        "tol": float(res.tol),
        "passed": bool(res.passed),
        "samples": int(res.samples),
    }
    if res.detail:
        view["detail"] = res.detail
    return view


def _locus_view(locus: BranchLocus, min_separation: float | None) -> dict[str, Any]:
    return {
        "points": [
            {
                "point": complex_pair(lp.point),
                "kind": lp.kind,
                "multiplicity": lp.multiplicity,
                "value_index": lp.value_index,
            }
            for lp in locus.points
        ],
        "critical_values": [complex_pair(v) for v in locus.values],
        "hull_radius": float(locus.hull_radius),
        "min_separation": (
            None if min_separation is None else float(min_separation)
        ),
    }


def _subspace_view(report: SubspaceReport) -> list[dict[str, Any]]:
    return [
        {
            "dual_block": list(entry.dual_block),
            "exponent_residues": list(entry.exponent_residues),
            "eigenvalues": [cyclotomic_view(v) for v in entry.eigenvalues],
            "distinguished": entry.distinguished,
        }
        for entry in report.entries
    ]


def _factorization_view(attempt: FactorizationAttempt) -> dict[str, Any]:
    view: dict[str, Any] = {"subgroup": list(attempt.subgroup)}
    if attempt.result is not None:
        view.update(
            {
                "success": attempt.result.success,
                "residual": float(attempt.result.residual),
                "inner": product_view(attempt.result.inner),
                "outer": product_view(attempt.result.outer),
            }
        )
    else:
        view.update(
            {
                "success": False,
                "error": attempt.error_code,
                "message": attempt.error_message,
            }
        )
    return view


def analysis_report(result: AnalysisResult) -> dict[str, Any]:
    """The full JSON-ready analysis report."""
    report: dict[str, Any] = {
        "kind": "analysis",
        "status": result.status,
        "expression": result.expression,
        "order": result.order,
        "zeros": [complex_pair(a) for a in result.product.zeros],
        "unimodular_factor": complex_pair(result.product.unimodular_factor),
        "critical_points": [complex_pair(c) for c in result.critical],
        "branch_locus": (
            None
            if result.locus is None
            else _locus_view(result.locus, result.locus_min_separation)
        ),
        "frame": {
            "radius": float(result.context.frame.radius),
            "base": complex_pair(result.context.frame.base),
        },
        "monodromy": {
            "generators": [list(g) for g in result.generators],
            "full_circle": (
                None if result.full_circle is None else list(result.full_circle)
            ),
            "full_circle_identity": result.full_circle_identity,
        },
        "partition": partition_view(result.partition),
        "dual_partition": partition_view(result.dual),
        "q": result.q,
        "alpha": dict(result.alpha),
        "admissible": result.admissible,
        "eigenvalue_table": [
            [cyclotomic_view(v) for v in row] for row in result.eigen_matrix
        ],
        "subspaces": _subspace_view(result.subspaces),
        "subgroup_unions": [
            {"elements": list(u.elements), "trivial": u.trivial}
            for u in result.unions
        ],
        "reducible": result.reducible,
        "factorizations": [
            _factorization_view(a) for a in result.factorizations
        ],
        "verification": {
            name: verification_view(res) for name, res in result.residuals.items()
        },
        "notes": list(result.notes),
    }
    return report


def dumps(obj: Any) -> str:
    """Canonical textual rendering of a report (stable across runs)."""
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"

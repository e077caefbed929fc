"""Shared fixtures: the canonical product corpus and cached analysis runs.

The corpus spans the structurally distinct behaviours at order 8 plus the
half-order composition at order 4: the pure power map, a squared Moebius
factor composed with a power, an irreducible quartic composed with the
squaring map, and a generic (irreducible) product of eight random zeros.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from blaschke import FiniteBlaschkeProduct, analyze, parse_expr, to_product

IRREDUCIBLE_4 = (
    "mobius(0.3) * mobius(-0.2+0.4i) * mobius(0.1-0.5i) * mobius(-0.4-0.1i)"
)

# name -> expression in the CLI grammar
CORPUS: dict[str, str] = {
    "power8": "z^8",
    "square_quarter": "mobius(0.5)^2 @ z^4",
    "square_half": "mobius(0.5)^2 @ z^2",
    "quartic_square": f"({IRREDUCIBLE_4}) @ z^2",
    "generic8": (
        "mobius(0.32+0.11i) * mobius(-0.45+0.2i) * mobius(0.05-0.38i) * "
        "mobius(-0.17-0.29i) * mobius(0.51) * mobius(0.12+0.44i) * "
        "mobius(-0.33-0.08i) * mobius(0.26-0.15i)"
    ),
}


def corpus_product(name: str) -> FiniteBlaschkeProduct:
    return to_product(parse_expr(CORPUS[name]))


def random_product(seed: int, order: int, rmax: float = 0.6) -> FiniteBlaschkeProduct:
    """Deterministic random product: zeros uniform in a centered annulus."""
    rng = np.random.default_rng(seed)
    radii = rng.uniform(0.05, rmax, order)
    angles = rng.uniform(0.0, 2.0 * math.pi, order)
    zeros = tuple(r * complex(math.cos(t), math.sin(t)) for r, t in zip(radii, angles))
    return FiniteBlaschkeProduct(zeros=zeros)


@pytest.fixture(scope="session")
def corpus_analysis():
    """Cached full-pipeline analysis per corpus member (shared across tests)."""
    cache: dict[str, object] = {}

    def get(name: str):
        if name not in cache:
            cache[name] = analyze(
                corpus_product(name), expression=CORPUS[name]
            )
        return cache[name]

    return get

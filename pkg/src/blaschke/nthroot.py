"""Single-valued n-th root branch of a finite Blaschke product.

For a product phi of order n with zeros a_1, ..., a_n and unimodular factor
g, anchor the branch at the smallest-modulus zero a_1 and set

    u(z) = kappa (z - a_1) prod_{i>1} pr((z - a_i)/(z - a_1))
                          / prod_i   pr(1 - conj(a_i) z),

where pr is the principal n-th root and kappa = pr(g (-1)^n).  Every factor
is an exact n-th root, so u(z)^n = phi(z) identically.  The ratio
(z - a_i)/(z - a_1) crosses the negative real axis exactly on the segment
[a_1, a_i] and 1 - conj(a_i) z stays in the right half plane on the disk,
so u is holomorphic on the disk minus the union of those segments (the
cuts).  Evaluation refuses points closer than CUT_TOL to a cut.

The fiber of phi over phi(z0) consists of n points w with u(w) an exact
n-th-root-of-unity multiple of u(z0); the exponent is the label of w.  The
k-th local inverse of the fiber correspondence near a base point z0 is
rho_k = u^{-1}(zeta^k u), which sends z0 to the point labeled k and obeys
rho_k o rho_j = rho_{k+j mod n} wherever the compositions are defined.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    CutProximity,
    FrameNotFound,
    LabelingAmbiguity,
    NewtonDivergence,
)
from .polyroots import fiber
from .products import FiniteBlaschkeProduct

CUT_TOL = 1e-6
LABEL_TOL = 1e-6
BASE_SNAP_TOL = 1e-9
FRAME_ANGLES = 128
FRAME_ATTEMPTS = 6


def roots_of_unity(n: int) -> np.ndarray:
    """zeta^0, ..., zeta^{n-1} for zeta = exp(2 pi i / n)."""
    return np.exp(2j * np.pi * np.arange(n) / n)


def segment_distance(z: complex, a: complex, b: complex) -> float:
    """Euclidean distance from z to the closed segment [a, b]."""
    ab = b - a
    denom = abs(ab) ** 2
    if denom == 0.0:
        return abs(z - a)
    t = ((z - a) * np.conj(ab)).real / denom
    t = min(1.0, max(0.0, t))
    return abs(z - (a + t * ab))


def _principal_root(w, n: int):
    return np.exp(np.log(w) / n)


@dataclass(frozen=True)
class NthRootBranch:
    """Holomorphic branch u with u^n = phi on the disk minus the cuts."""

    product: FiniteBlaschkeProduct
    anchor: complex
    kappa: complex

    @property
    def order(self) -> int:
        return self.product.order

    @cached_property
    def cuts(self) -> tuple[tuple[complex, complex], ...]:
        """Distinct positive-length segments [anchor, a_i]."""
        seen: list[complex] = []
        for a in self.product.zeros:
            if a != self.anchor and all(abs(a - s) > 0.0 for s in seen):
                seen.append(a)
        return tuple((self.anchor, a) for a in seen)

    def cut_distance(self, z: complex) -> float:
        if not self.cuts:
            return float("inf")
        return min(segment_distance(z, a, b) for a, b in self.cuts)


def build_branch(product: FiniteBlaschkeProduct) -> NthRootBranch:
    """Anchor at the smallest-modulus zero (first in canonical order)."""
    anchor = product.zeros[0]
    n = product.order
    kappa = complex(_principal_root(product.unimodular_factor * (-1.0) ** n, n))
    return NthRootBranch(product=product, anchor=anchor, kappa=kappa)


def u_eval(branch: NthRootBranch, z):
    """Evaluate u; raises CutProximity within CUT_TOL of a cut."""
    z_arr = np.asarray(z, dtype=complex)
    scalar = z_arr.ndim == 0
    pts = np.atleast_1d(z_arr)
    for p in pts:
        d = branch.cut_distance(complex(p))
        if d < CUT_TOL:
            raise CutProximity(f"point {complex(p)} is {d:.2e} from a branch cut")
    n = branch.order
    a1 = branch.anchor
    value = branch.kappa * (pts - a1)
    for a in branch.product.zeros[1:]:
        if a != a1:
            value = value * _principal_root((pts - a) / (pts - a1), n)
    for a in branch.product.zeros:
        value = value / _principal_root(1.0 - np.conj(a) * pts, n)
    return complex(value[0]) if scalar else value


def u_derivative(branch: NthRootBranch, z):
    """u' = u phi' / (n phi); z must not be a zero of the product."""
    z_arr = np.asarray(z, dtype=complex)
    phi = branch.product.eval(z_arr)
    if np.any(np.abs(phi) < 1e-300):
        raise ZeroDivisionError("root-branch derivative at a zero of the product")
    return u_eval(branch, z_arr) * branch.product.derivative_eval(z_arr) / (branch.order * phi)


def u_inverse(
    branch: NthRootBranch,
    target: complex,
    start: complex,
    *,
    tol: float = 1e-13,
    max_iter: int = 50,
    trust_radius: float = 0.5,
) -> complex:
    """Solve u(w) = target by Newton from start; stays within trust_radius."""
    w = complex(start)
    scale = max(1.0, abs(target))
    for _ in range(max_iter):
        f = u_eval(branch, w) - target
        if abs(f) < tol * scale:
            return w
        dw = u_derivative(branch, w)
        if dw == 0 or not np.isfinite(dw):
            raise NewtonDivergence("zero or non-finite branch derivative")
        w = w - f / dw
        if not np.isfinite(w) or abs(w - start) > trust_radius:
            raise NewtonDivergence("iterate left the trust basin")
    raise NewtonDivergence(f"no convergence to {tol} in {max_iter} iterations")


@dataclass(frozen=True)
class LabeledFiber:
    """Fiber over phi(base), ordered by root-of-unity label.

    points[k] is the unique fiber point with u(points[k]) = zeta^k u(base);
    points[0] is the base itself.
    """

    base: complex
    value: complex
    u_base: complex
    points: tuple[complex, ...]


def label_fiber(branch: NthRootBranch, base: complex) -> LabeledFiber:
    """Label the fiber over phi(base) by u-sector; certify the bijection."""
    product = branch.product
    n = product.order
    value = complex(product.eval(base))
    raw = list(fiber(product, value))
    nearest = min(range(n), key=lambda i: abs(raw[i] - base))
    if abs(raw[nearest] - base) > BASE_SNAP_TOL:
        raise LabelingAmbiguity(
            f"base point missing from its own fiber by {abs(raw[nearest] - base):.2e}"
        )
    raw[nearest] = complex(base)
    u_base = u_eval(branch, base)
    zetas = roots_of_unity(n)
    points: list[complex | None] = [None] * n
    for w in raw:
        ratio = u_eval(branch, w) / u_base
        k = int(np.argmin(np.abs(zetas - ratio)))
        if abs(zetas[k] - ratio) > LABEL_TOL:
            raise LabelingAmbiguity(
                f"fiber point {w} sits {abs(zetas[k] - ratio):.2e} off every sector"
            )
        if points[k] is not None:
            raise LabelingAmbiguity(f"two fiber points claim label {k}")
        points[k] = complex(w)
    if points[0] != complex(base):
        raise LabelingAmbiguity("base point did not receive label 0")
    return LabeledFiber(
        base=complex(base), value=value, u_base=complex(u_base), points=tuple(points)
    )


@dataclass(frozen=True)
class AnnulusFrame:
    """Working circle |z| = radius with a labeled base fiber on it."""

    radius: float
    labeled: LabeledFiber
    cut_clearance: float

    @property
    def base(self) -> complex:
        return self.labeled.base


def choose_frame(
    branch: NthRootBranch,
    hull_radius: float,
    *,
    angles: int = FRAME_ANGLES,
    attempts: int = FRAME_ATTEMPTS,
) -> AnnulusFrame:
    """Pick |z| = R outside the hull and a base angle whose fiber labels cleanly.

    Starts at R = (1 + hull_radius)/2 and bisects toward the boundary when no
    base angle gives every fiber point a certified distinct label; the level
    set |phi| = |phi(base)| moves out with R while the cuts stay inside the
    hull, so a clean frame always appears for R close enough to 1.
    """
    if not 0.0 <= hull_radius < 1.0:
        raise ValueError(f"hull radius {hull_radius} outside [0, 1)")
    radius = 0.5 * (1.0 + hull_radius)
    failures: list[str] = []
    for _ in range(attempts):
        grid = np.exp(2j * np.pi * (np.arange(angles) + 0.37) / angles) * radius
        order = sorted(
            range(angles), key=lambda i: -branch.cut_distance(complex(grid[i]))
        )
        for i in order:
            base = complex(grid[i])
            try:
                labeled = label_fiber(branch, base)
            except (CutProximity, LabelingAmbiguity) as exc:
                failures.append(str(exc))
                continue
            clearance = min(branch.cut_distance(w) for w in labeled.points)
            return AnnulusFrame(radius=radius, labeled=labeled, cut_clearance=clearance)
        radius = 0.5 * (1.0 + radius)
    raise FrameNotFound(
        f"no certifiable base fiber in {attempts} radius attempts; "
        f"last failure: {failures[-1] if failures else 'none recorded'}"
    )


def local_inverse(
    branch: NthRootBranch,
    labeled: LabeledFiber,
    k: int,
    z: complex,
) -> complex:
    """Value at z of the k-th local inverse rho_k = u^{-1}(zeta^k u).

    z must be close enough to the base for the fiber over phi(z) to match
    the labeled fiber sheet by sheet; the result is polished by Newton on u,
    so the identity u(rho_k(z)) = zeta^k u(z) is genuinely enforced rather
    than assumed.
    """
    n = branch.order
    k = k % n
    target = np.exp(2j * np.pi * k / n) * u_eval(branch, z)
    value = complex(branch.product.eval(z))
    candidates = fiber(branch.product, value)
    best = min(candidates, key=lambda w: abs(u_eval(branch, w) - target))
    if abs(u_eval(branch, best) - target) > 1e-3 * max(1e-12, abs(target)):
        raise LabelingAmbiguity(f"no fiber point over {z} matches sector {k}")
    return u_inverse(branch, complex(target), best)


def local_inverse_derivative(
    branch: NthRootBranch,
    k: int,
    z: complex,
    rho_z: complex,
) -> complex:
    """rho_k'(z) = zeta^k u'(z) / u'(rho_k(z)), given rho_z = rho_k(z)."""
    zeta_k = np.exp(2j * np.pi * (k % branch.order) / branch.order)
    return complex(zeta_k * u_derivative(branch, z) / u_derivative(branch, rho_z))

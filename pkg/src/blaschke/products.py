"""Finite Blaschke products on the unit disk.

A product is determined by its zeros (inside the disk, with multiplicity) and
a unimodular factor:

    phi(z) = factor * prod_i (a_i - z) / (1 - conj(a_i) z)

Evaluation uses the factored form (stable inside the closed disk); coefficient
work (fiber equations, critical points) goes through the rational form P/Q
with ascending coefficient vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import PoleProximity, RootFindingFailure, ZeroOutsideDisk

EPS_DISK_DEFAULT = 1e-3
_POLE_TOL = 1e-12


def _canon_zeros(zeros) -> tuple[complex, ...]:
    return tuple(sorted((complex(a) for a in zeros), key=lambda a: (abs(a), a.real, a.imag)))


@dataclass(frozen=True)
class RationalForm:
    """phi = P/Q with ascending complex coefficient tuples."""

    numerator: tuple[complex, ...]
    denominator: tuple[complex, ...]


@dataclass(frozen=True)
class FiniteBlaschkeProduct:
    zeros: tuple[complex, ...]
    unimodular_factor: complex = 1.0 + 0j
    eps_disk: float = field(default=EPS_DISK_DEFAULT, compare=False)

    def __post_init__(self):
        zeros = _canon_zeros(self.zeros)
        if not zeros:
            raise ValueError("a Blaschke product needs at least one zero")
        factor = complex(self.unimodular_factor)
        mod = abs(factor)
        if abs(mod - 1.0) > 1e-9:
            raise ValueError(f"unimodular factor has |c| = {mod!r}")
        for a in zeros:
            if abs(a) > 1.0 - self.eps_disk:
                raise ZeroOutsideDisk(
                    f"zero {a} violates the disk margin eps={self.eps_disk}"
                )
        object.__setattr__(self, "zeros", zeros)
        object.__setattr__(self, "unimodular_factor", factor / mod)

    @property
    def order(self) -> int:
        return len(self.zeros)

    def eval(self, z):
        """phi(z); z may be a complex scalar or ndarray."""
        z_arr = np.asarray(z, dtype=complex)
        a = np.array(self.zeros, dtype=complex)
        den = 1.0 - np.conj(a) * z_arr[..., None]
        if np.min(np.abs(den)) < _POLE_TOL:
            raise PoleProximity("evaluation point within 1e-12 of a reflected pole")
        vals = self.unimodular_factor * np.prod((a - z_arr[..., None]) / den, axis=-1)
        return complex(vals) if np.isscalar(z) or np.asarray(z).ndim == 0 else vals

    @cached_property
    def rational_form(self) -> RationalForm:
        num = np.array([self.unimodular_factor], dtype=complex)
        den = np.array([1.0 + 0j])
        for a in self.zeros:
            num = np.convolve(num, np.array([a, -1.0], dtype=complex))
            den = np.convolve(den, np.array([1.0, -np.conj(a)], dtype=complex))
        return RationalForm(tuple(num), tuple(den))

    @cached_property
    def _derivative_numerator(self) -> np.ndarray:
        # numerator of phi' = (P'Q - PQ')/Q^2, ascending coefficients
        p = np.array(self.rational_form.numerator)
        q = np.array(self.rational_form.denominator)
        dp = np.polynomial.polynomial.polyder(p)
        dq = np.polynomial.polynomial.polyder(q)
        a = np.convolve(dp, q)
        b = np.convolve(p, dq)
        width = max(len(a), len(b))
        return np.pad(a, (0, width - len(a))) - np.pad(b, (0, width - len(b)))

    def derivative_eval(self, z):
        """phi'(z) via the rational form; same shapes as eval."""
        z_arr = np.asarray(z, dtype=complex)
        q = np.polynomial.polynomial.polyval(
            z_arr, np.array(self.rational_form.denominator)
        )
        if np.min(np.abs(q)) < _POLE_TOL:
            raise PoleProximity("derivative evaluation too close to a pole")
        num = np.polynomial.polynomial.polyval(z_arr, self._derivative_numerator)
        vals = num / q**2
        return complex(vals) if np.isscalar(z) or np.asarray(z).ndim == 0 else vals

    def __str__(self) -> str:
        return f"BlaschkeProduct(order={self.order})"


def compose(outer: FiniteBlaschkeProduct, inner: FiniteBlaschkeProduct) -> FiniteBlaschkeProduct:
    """outer(inner(z)) as a finite Blaschke product of order n_outer * n_inner."""
    from .polyroots import fiber  # local import: polyroots depends on this module

    zeros: list[complex] = []
    for b in outer.zeros:
        zeros.extend(fiber(inner, b))
    margin = 1.0 - max(abs(w) for w in zeros)
    if margin <= 0:
        raise ZeroOutsideDisk("composition produced a zero outside the disk")
    candidate = FiniteBlaschkeProduct(
        tuple(zeros), 1.0, eps_disk=min(EPS_DISK_DEFAULT, margin / 2)
    )
    # Fix the unimodular factor by matching one regular evaluation.
    for z0 in (0.37 + 0.13j, -0.21 + 0.41j, 0.52 - 0.33j, 0.11 + 0.61j):
        ref = candidate.eval(z0)
        if abs(ref) > 1e-6:
            gamma = outer.eval(inner.eval(z0)) / ref
            break
    else:  # pragma: no cover - would need zeros at every probe
        raise RootFindingFailure("no regular probe point for composition factor")
    if abs(abs(gamma) - 1.0) > 1e-6:
        raise RootFindingFailure(f"composition factor has modulus {abs(gamma)!r}")
    return FiniteBlaschkeProduct(
        tuple(zeros), gamma / abs(gamma), eps_disk=candidate.eps_disk
    )


def _grouped_zeros(zeros, tol: float = 1e-7):
    groups: list[list[complex]] = []
    for a in zeros:
        for g in groups:
            if abs(a - g[0]) <= tol:
                g.append(complex(a))
                break
        else:
            groups.append([complex(a)])
    return [(sum(g) / len(g), len(g)) for g in groups]


def critical_points(product: FiniteBlaschkeProduct) -> tuple[complex, ...]:
    """Zeros of phi' inside the disk, with multiplicity; always order - 1 points.

    Multiple critical points get exact treatment: a zero of the product with
    multiplicity mu is a critical point of multiplicity exactly mu - 1 at an
    exactly known location, so those factors are divided out before the
    numeric stage.  Any remaining root cluster of the derivative numerator is
    tested against the k-fold-root hypothesis (Newton on the (k-1)-th
    derivative plus a division-remainder certificate) so that, for example,
    a conjugated power hiding a high-multiplicity point away from the origin
    is still resolved to one point with the right multiplicity.
    """
    from .polyroots import (
        MULTIPLE_CLUSTER_TOL,
        linkage_clusters,
        poly_deflate,
        poly_roots,
        refine_root_cluster,
    )

    n = product.order
    if n < 2:
        raise ValueError("critical points need order >= 2")
    w = np.asarray(product._derivative_numerator, dtype=complex)
    found: list[complex] = []
    for a, mu in _grouped_zeros(product.zeros):
        if mu > 1:
            w = poly_deflate(w, a, mu - 1)
            found.extend([a] * (mu - 1))
    roots = poly_roots(w) if len(w) > 1 else ()
    for cluster in linkage_clusters(list(roots), MULTIPLE_CLUSTER_TOL):
        if len(cluster) == 1:
            found.append(cluster[0])
            continue
        refined = refine_root_cluster(w, cluster)
        if refined is None:
            found.extend(cluster)
        else:
            found.extend([refined] * len(cluster))
    inside = tuple(r for r in found if abs(r) < 1.0)
    if len(inside) != n - 1:
        raise RootFindingFailure(
            f"expected {n - 1} interior critical points, found {len(inside)}"
        )
    bad = [r for r in inside if abs(product.derivative_eval(r)) >= 1e-9]
    if bad:
        raise RootFindingFailure(f"critical point residual too large at {bad[0]}")
    return inside

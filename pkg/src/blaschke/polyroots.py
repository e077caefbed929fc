"""Polynomial root finding and fiber equations.

Roots come from the LAPACK companion-matrix solver, polished by
Aberth-Ehrlich simultaneous iteration and a final Newton pass, then certified
by relative backward error (|p(r)| / sum_j |c_j||r|^j < 1e-10 for every
root, so distant roots are not penalized for the growth of |p| itself) and
cluster-merged at 1e-7 for repeated roots.  Restarts fall back to circle
initializations.  Exact zero roots are stripped from the low-order
coefficients first, which keeps the common z^k factors of power-like
products exact.

Coefficient vectors are ascending, matching numpy.polynomial.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import NewtonDivergence, RootFindingFailure
from .products import FiniteBlaschkeProduct

RESIDUAL_CERT = 1e-10
CLUSTER_TOL = 1e-7
MULTIPLE_CLUSTER_TOL = 5e-4
MULTIPLE_ROOT_CERT = 3e-8
_TRIM_REL = 1e-14


def _trimmed(coeffs) -> np.ndarray:
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 1 or len(c) == 0:
        raise ValueError("coefficient vector must be 1-d and nonempty")
    scale = np.max(np.abs(c))
    if scale == 0.0:
        raise ValueError("zero polynomial has no well-defined roots")
    keep = np.nonzero(np.abs(c) > _TRIM_REL * scale)[0]
    return c[: keep[-1] + 1]


def _backward_errors(coeffs, z):
    # Relative backward error of each candidate root: |p(z)| over the
    # evaluation-magnitude sum |c_j||z|^j.  Below ~1e-13 the candidate is an
    # exact root of a coefficientwise relatively perturbed polynomial.
    mags = npoly.polyval(np.abs(z), np.abs(np.asarray(coeffs)))
    return np.abs(npoly.polyval(z, coeffs)) / np.maximum(mags, 1e-300)


def _aberth_sweeps(coeffs, guesses, max_sweeps):
    d = len(coeffs) - 1
    dcoeffs = npoly.polyder(coeffs)
    z = guesses.copy()
    for _ in range(max_sweeps):
        if np.max(_backward_errors(coeffs, z)) < RESIDUAL_CERT * 0.01:
            break
        pv = npoly.polyval(z, coeffs)
        dv = npoly.polyval(z, dcoeffs)
        dv = np.where(np.abs(dv) < 1e-300, 1e-300, dv)
        w = pv / dv
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        diff = np.where(np.abs(diff) < 1e-300, 1e-300, diff)
        s = np.sum(np.where(np.eye(d, dtype=bool), 0.0, 1.0 / diff), axis=1)
        denom = 1.0 - w * s
        denom = np.where(np.abs(denom) < 1e-300, 1e-300, denom)
        step = w / denom
        z = z - step
        if np.max(np.abs(step) / (1.0 + np.abs(z))) < 1e-16:
            break
    return z


def _newton_polish(coeffs, roots, iters=3):
    dcoeffs = npoly.polyder(coeffs)
    z = roots.copy()
    for _ in range(iters):
        dv = npoly.polyval(z, dcoeffs)
        mask = np.abs(dv) > 1e-300
        step = np.where(mask, npoly.polyval(z, coeffs) / np.where(mask, dv, 1.0), 0.0)
        keep = np.abs(step) < 0.1 * (1.0 + np.abs(z))  # reject wild steps near multiples
        z = np.where(keep, z - step, z)
    return z


def linkage_clusters(points, tol) -> list[list[complex]]:
    """Single-linkage clusters of a point list at the given merge distance."""
    m = len(points)
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(m):
        for j in range(i + 1, m):
            if abs(points[i] - points[j]) <= tol:
                parent[find(i)] = find(j)
    groups: dict[int, list[complex]] = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(complex(points[i]))
    return list(groups.values())


def _merge_clusters(roots, tol):
    # Each cluster is replaced by its centroid, repeated with the cluster
    # size.  The centroid of the near-regular polygon that simultaneous
    # iteration leaves around an m-fold root is far more accurate than any
    # member.
    out = []
    for members in linkage_clusters(roots, tol):
        c = sum(members) / len(members)
        out.extend([c] * len(members))
    return np.array(sorted(out, key=lambda r: (r.real, r.imag)), dtype=complex)


def refine_root_cluster(coeffs, members) -> complex | None:
    """Refine a suspected k-fold root from its k-member numeric cluster.

    A k-fold root of p is a simple root of the (k-1)-th derivative, so
    Newton there converges from the cluster centroid at full precision.
    The hypothesis is then certified by k rounds of synthetic division:
    every division remainder, normalized by the evaluation-magnitude sum,
    must vanish to coefficient-noise level.  Returns None when the
    certificate rejects (the cluster is genuinely separate simple roots).
    """
    k = len(members)
    c = np.asarray(coeffs, dtype=complex)
    if k < 2 or len(c) - 1 < k:
        return None
    g = c
    for _ in range(k - 1):
        g = npoly.polyder(g)
    gd = npoly.polyder(g)
    center = sum(members) / k
    spread = max(abs(m - center) for m in members)
    z = complex(center)
    for _ in range(60):
        dv = npoly.polyval(z, gd)
        if abs(dv) < 1e-300 or abs(z - center) > 10.0 * spread + 1e-3:
            return None  # ran off toward some other derivative root
        step = npoly.polyval(z, g) / dv
        z -= step
        if abs(step) <= 1e-14 * (1.0 + abs(z)):
            break
    # Near the noise floor the step criterion may never fire; the division
    # certificate below is the actual arbiter of the k-fold hypothesis.
    cur = c
    for _ in range(k):
        mags = float(npoly.polyval(abs(z), np.abs(cur)))
        if abs(npoly.polyval(z, cur)) > MULTIPLE_ROOT_CERT * max(mags, 1e-300):
            return None
        cur = poly_deflate(cur, z, 1)
    return z


def poly_roots(
    coeffs,
    *,
    max_sweeps: int = 1000,
    restarts: int = 3,
    cluster_tol: float = CLUSTER_TOL,
    seed: int = 0,
) -> tuple[complex, ...]:
    """All complex roots, with multiplicity, certified by residual."""
    c = _trimmed(coeffs)
    scale = float(np.max(np.abs(c)))
    zero_mult = 0
    while len(c) > 1 and abs(c[0]) <= _TRIM_REL * scale:
        c = c[1:]
        zero_mult += 1
    d = len(c) - 1
    zero_roots = [0j] * zero_mult
    if d == 0:
        return tuple(zero_roots)
    if d == 1:
        roots = np.array([-c[0] / c[1]])
    else:
        rng = np.random.default_rng(seed)
        r0 = max(1e-6, float(abs(c[0] / c[-1]) ** (1.0 / d)))
        best = None
        for attempt in range(restarts + 1):
            if attempt == 0:
                try:
                    guesses = np.roots(c[::-1]).astype(complex)
                except np.linalg.LinAlgError:
                    continue
            else:
                ang = 2.0 * np.pi * (np.arange(d) + 0.5) / d + 0.4
                if attempt > 1:
                    ang = ang + rng.uniform(-0.5, 0.5, d)
                    radii = r0 * (1.0 + rng.uniform(-0.3, 0.3, d))
                else:
                    radii = np.full(d, r0 * 1.05)
                guesses = radii * np.exp(1j * ang) - c[-2] / (d * c[-1])
            z = _aberth_sweeps(c, guesses, max_sweeps)
            z = _newton_polish(c, z)
            err = float(np.max(_backward_errors(c, z)))
            if best is None or err < best[0]:
                best = (err, z)
            if err < RESIDUAL_CERT:
                break
        if best is None:
            raise RootFindingFailure("no initialization produced candidates")
        err, roots = best
        if err >= RESIDUAL_CERT:
            raise RootFindingFailure(
                f"backward error {err:.3e} above certificate {RESIDUAL_CERT:.3e}"
            )
    # The stripped zero roots are certified by the trim itself (their
    # coefficients sit below the relative noise floor); certify the rest
    # against the polynomial that was actually solved.
    merged = _merge_clusters(list(roots), cluster_tol)
    if len(merged):
        err = float(np.max(_backward_errors(c, np.asarray(merged))))
        if err >= RESIDUAL_CERT:
            raise RootFindingFailure(
                f"post-merge backward error {err:.3e} fails the certificate"
            )
    final = list(zero_roots) + list(merged)
    return tuple(sorted(final, key=lambda r: (r.real, r.imag)))


def poly_deflate(coeffs, root: complex, multiplicity: int = 1) -> np.ndarray:
    """Synthetic division by (x - root)^multiplicity; remainder discarded."""
    c = np.asarray(coeffs, dtype=complex)
    for _ in range(multiplicity):
        out = np.zeros(len(c) - 1, dtype=complex)
        acc = 0j
        for i in range(len(c) - 1, 0, -1):
            acc = c[i] + root * acc
            out[i - 1] = acc
        c = out
    return c


def fiber_coefficients(product: FiniteBlaschkeProduct, value: complex) -> np.ndarray:
    """Ascending coefficients of P(w) - value * Q(w); degree is always the order."""
    p = np.array(product.rational_form.numerator)
    q = np.array(product.rational_form.denominator)
    width = max(len(p), len(q))
    return np.pad(p, (0, width - len(p))) - value * np.pad(q, (0, width - len(q)))


def newton_refine(
    product: FiniteBlaschkeProduct,
    value: complex,
    start: complex,
    *,
    tol: float = 1e-13,
    max_iter: int = 40,
    step_bound: float | None = None,
) -> complex:
    """Solve phi(w) = value by Newton from start; stays within step_bound of start."""
    w = complex(start)
    for _ in range(max_iter):
        f = product.eval(w) - value
        if abs(f) < tol:
            return w
        df = product.derivative_eval(w)
        if df == 0 or not np.isfinite(df):
            raise NewtonDivergence("zero or non-finite derivative")
        w = w - f / df
        if not np.isfinite(w):
            raise NewtonDivergence("iterate left the finite plane")
        if step_bound is not None and abs(w - start) > step_bound:
            raise NewtonDivergence("iterate left the trust basin")
    raise NewtonDivergence(f"no convergence to {tol} in {max_iter} iterations")


def refine_fiber(product: FiniteBlaschkeProduct, value: complex, starts, *,
                 tol: float = 1e-13, max_iter: int = 30):
    """Vectorized Newton toward phi(w) = value for every start; returns (points, ok)."""
    w = np.array(starts, dtype=complex)
    for _ in range(max_iter):
        f = product.eval(w) - value
        done = np.abs(f) < tol
        if np.all(done):
            break
        df = product.derivative_eval(w)
        safe = np.abs(df) > 1e-300
        step = np.where(~done & safe, f / np.where(safe, df, 1.0), 0.0)
        w = w - step
    ok = (np.abs(product.eval(w) - value) < tol) & np.isfinite(w)
    return w, ok


def fiber(product: FiniteBlaschkeProduct, value: complex) -> tuple[complex, ...]:
    """All order-many solutions of phi(w) = value, with multiplicity."""
    roots = poly_roots(fiber_coefficients(product, complex(value)))
    out = []
    for r in roots:
        try:
            out.append(newton_refine(product, complex(value), r, step_bound=1e-4))
        except NewtonDivergence:
            out.append(r)  # multiple point: Aberth centroid already certified
    bad = [w for w in out if abs(product.eval(w) - value) >= 1e-10]
    if bad:
        raise RootFindingFailure(f"fiber residual too large at {bad[0]}")
    return tuple(sorted(out, key=lambda r: (r.real, r.imag)))

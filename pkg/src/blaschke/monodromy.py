"""Branch locus and monodromy of the fiber correspondence.

The n local inverses of the correspondence z -> phi^{-1}(phi(z)) extend
analytically along any path that avoids the branch locus E', the full
preimage of the critical values.  E' splits into the critical points
themselves and the regular preimages of critical values.  A loop from the
base point around a locus point permutes the n sheets; tracking the whole
fiber along each loop and reading the permutation off the labeled base
fiber yields generators of the monodromy group, whose orbits on the labels
form the monodromy partition.

Fibers over critical values contain multiple roots, which iterative root
finders resolve poorly.  The locus therefore deflates the known critical
points (multiplicity m + 1 for an m-fold critical point) out of the fiber
polynomial and solves only the well-conditioned regular part, polishing
each regular preimage by Newton on phi itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ContinuationCollision,
    LoopPlanningFailure,
    MatchingAmbiguity,
    RootFindingFailure,
    StepUnderflow,
)
from .nthroot import AnnulusFrame
from .polyroots import (
    fiber_coefficients,
    newton_refine,
    poly_deflate,
    poly_roots,
    refine_fiber,
)
from .products import FiniteBlaschkeProduct, critical_points
from .znarith import ZnPartition

TRACK_SEPARATION = 1e-5
MATCH_TOL = 1e-6
MAX_HALVINGS = 20
CIRCLE_VERTICES = 48
FULL_CIRCLE_VERTICES = 256
_COINCIDENCE_TOL = 1e-9
# Locus points closer than this share one joint loop (see make_loops).
MERGE_SEPARATION = 1e-4
# Sample offsets bounding max |phi'| over one step's z-chord, and the slack
# allowed between slot 0 and the path point when sheet 0 tracks the
# identity inverse (see continue_fiber).
_CHORD_SAMPLES = np.linspace(0.0, 1.0, 5)
_ANCHOR_TOL = 1e-8


@dataclass(frozen=True)
class LocusPoint:
    """One point of E'; multiplicity is the local fiber multiplicity."""

    point: complex
    kind: str  # "critical" or "regular"
    multiplicity: int
    value_index: int


@dataclass(frozen=True)
class BranchLocus:
    points: tuple[LocusPoint, ...]
    values: tuple[complex, ...]
    hull_radius: float

    @property
    def critical(self) -> tuple[LocusPoint, ...]:
        return tuple(p for p in self.points if p.kind == "critical")

    @property
    def regular(self) -> tuple[LocusPoint, ...]:
        return tuple(p for p in self.points if p.kind == "regular")


def branch_locus(product: FiniteBlaschkeProduct) -> BranchLocus:
    """All points of E' = phi^{-1}(phi(critical points)), classified."""
    n = product.order
    cps = critical_points(product)
    clusters: list[list[complex]] = []
    for c in cps:
        for cl in clusters:
            if abs(c - cl[0]) < _COINCIDENCE_TOL:
                cl.append(c)
                break
        else:
            clusters.append([c])
    distinct = [(sum(cl) / len(cl), len(cl)) for cl in clusters]

    values: list[complex] = []
    value_of: list[int] = []
    for c, _ in distinct:
        v = complex(product.eval(c))
        for j, known in enumerate(values):
            if abs(v - known) < _COINCIDENCE_TOL:
                value_of.append(j)
                break
        else:
            values.append(v)
            value_of.append(len(values) - 1)

    points: list[LocusPoint] = [
        LocusPoint(point=complex(c), kind="critical", multiplicity=m + 1, value_index=j)
        for (c, m), j in zip(distinct, value_of)
    ]
    for j, v in enumerate(values):
        coeffs = fiber_coefficients(product, v)
        removed = 0
        crit_here = [(c, m) for (c, m), jj in zip(distinct, value_of) if jj == j]
        for c, m in crit_here:
            coeffs = poly_deflate(coeffs, c, m + 1)
            removed += m + 1
        regular: list[complex] = []
        if n - removed > 0:
            for r in poly_roots(coeffs):
                w = newton_refine(product, v, complex(r), tol=1e-13, max_iter=60)
                regular.append(w)
        if len(regular) != n - removed:
            raise RootFindingFailure(
                f"fiber over critical value {v} yielded {len(regular)} regular "
                f"points, expected {n - removed}"
            )
        for w in regular:
            if abs(w) >= 1.0:
                raise RootFindingFailure(f"fiber point {w} escaped the open disk")
            if any(abs(w - c) < 1e-6 for c, _ in distinct):
                raise RootFindingFailure(
                    f"regular preimage {w} collides with a critical point"
                )
        for a in range(len(regular)):
            for b in range(a + 1, len(regular)):
                if abs(regular[a] - regular[b]) < 1e-6:
                    raise RootFindingFailure(
                        "two regular preimages of a critical value coincide"
                    )
        points.extend(
            LocusPoint(point=complex(w), kind="regular", multiplicity=1, value_index=j)
            for w in regular
        )

    moduli = [abs(a) for a in product.zeros] + [abs(p.point) for p in points]
    return BranchLocus(
        points=tuple(points), values=tuple(values), hull_radius=max(moduli, default=0.0)
    )


@dataclass(frozen=True)
class Loop:
    """Closed polyline from the base around one locus cluster (or the circle).

    ``target_index`` is the lowest member index; ``member_indices`` lists
    every locus point the loop encircles (more than one only when points
    within MERGE_SEPARATION were merged into a joint loop).
    """

    vertices: tuple[complex, ...]
    target_index: int | None
    radius: float
    member_indices: tuple[int, ...] = ()


def _segment_point_distance(a: complex, b: complex, p: complex) -> float:
    ab = b - a
    denom = abs(ab) ** 2
    if denom == 0.0:
        return abs(p - a)
    t = ((p - a) * np.conj(ab)).real / denom
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * ab))


def _route(start: complex, end: complex, avoid: list[tuple[complex, float]]):
    """Polyline start->end keeping clear of each (point, guard) obstacle.

    Violated straight runs get a waypoint pushed out on the left of the
    travel direction; a few rounds settle all practical configurations.
    """
    waypoints: list[complex] = [start, end]
    for _ in range(12):
        worst: tuple[float, int, complex, float] | None = None
        for i in range(len(waypoints) - 1):
            a, b = waypoints[i], waypoints[i + 1]
            for p, g in avoid:
                d = _segment_point_distance(a, b, p)
                if d < g and (worst is None or d - g < worst[0]):
                    direction = (b - a) / abs(b - a)
                    worst = (d - g, i, p + 1.8j * g * direction, g)
        if worst is None:
            break
        _, i, w, _ = worst
        waypoints.insert(i + 1, w)
    else:
        raise LoopPlanningFailure("path routing did not settle in 12 rounds")
    for i in range(len(waypoints) - 1):
        for p, g in avoid:
            if _segment_point_distance(waypoints[i], waypoints[i + 1], p) < 0.5 * g:
                raise LoopPlanningFailure(
                    f"no route from {start} to {end} clears the locus point {p}"
                )
    return waypoints


def _index_clusters(pts: list[complex], tol: float) -> list[list[int]]:
    """Single-linkage clusters of point indices at the given tolerance."""
    parent = list(range(len(pts)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            if abs(pts[a] - pts[b]) <= tol:
                parent[find(a)] = find(b)
    groups: dict[int, list[int]] = {}
    for i in range(len(pts)):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def make_loops(locus: BranchLocus, frame: AnnulusFrame) -> list[Loop]:
    """One loop per locus cluster plus the full working circle.

    Loops are spokes from the base with a small counterclockwise circle
    around the target; spokes leave the base at distinct angles and detour
    around intervening locus points, giving a standard generating system
    for the fundamental group of the punctured disk.

    Locus points within MERGE_SEPARATION of each other cannot be encircled
    separately (continuation cannot thread the gap), so they share one
    joint loop around their centroid; the joint permutation is the product
    of the individual generators, so the computed orbit partition can come
    out finer than the true one.  Callers compare the locus separation
    against MERGE_SEPARATION to detect this and degrade their confidence.
    """
    z0 = frame.base
    radius = frame.radius
    pts = [lp.point for lp in locus.points]
    if not pts:
        return [_full_circle_loop(frame)]

    # Cluster at the base merge tolerance; if some cluster still cannot get
    # a loop radius covering its members with margin (near-threshold chains
    # of locus points), coarsen the tolerance and merge further.
    tol = MERGE_SEPARATION
    while True:
        clusters = _index_clusters(pts, tol)
        centers = [sum(pts[i] for i in cl) / len(cl) for cl in clusters]
        spreads = [
            max(abs(pts[i] - c) for i in cl)
            for cl, c in zip(clusters, centers)
        ]
        guards = []
        for a, c in enumerate(centers):
            gap = min(
                (
                    abs(c - centers[b]) - spreads[b]
                    for b in range(len(centers))
                    if b != a
                ),
                default=float("inf"),
            )
            guards.append(
                min(0.04, 0.3 * gap, 0.3 * (radius - abs(c)), 0.25 * abs(c - z0))
            )
        if all(
            r >= 1e-6 and r >= 2.0 * spread
            for r, spread in zip(guards, spreads)
        ):
            break
        tol *= 2.0
        if tol > 0.1:
            raise LoopPlanningFailure(
                "locus points too crowded for certified loops"
            )

    order = sorted(
        range(len(centers)),
        key=lambda i: (np.angle(centers[i] - z0), abs(centers[i] - z0)),
    )
    loops: list[Loop] = []
    for i in order:
        e = centers[i]
        r = guards[i]
        entry = e + r * (z0 - e) / abs(z0 - e)
        avoid = [(centers[j], guards[j]) for j in range(len(centers)) if j != i]
        spoke = _route(z0, entry, avoid)
        theta0 = np.angle(entry - e)
        circle = [
            e + r * np.exp(1j * (theta0 + 2.0 * np.pi * t / CIRCLE_VERTICES))
            for t in range(1, CIRCLE_VERTICES + 1)
        ]
        vertices = spoke + circle[:-1] + [entry] + spoke[-2::-1]
        loops.append(
            Loop(
                vertices=tuple(vertices),
                target_index=clusters[i][0],
                radius=r,
                member_indices=tuple(clusters[i]),
            )
        )
    loops.append(_full_circle_loop(frame))
    return loops


def _full_circle_loop(frame: AnnulusFrame) -> Loop:
    z0 = frame.base
    theta0 = np.angle(z0)
    ring = [
        frame.radius * np.exp(1j * (theta0 + 2.0 * np.pi * t / FULL_CIRCLE_VERTICES))
        for t in range(1, FULL_CIRCLE_VERTICES)
    ]
    return Loop(vertices=tuple([z0] + ring + [z0]), target_index=None, radius=frame.radius)


def _min_separation(w: np.ndarray) -> float:
    if len(w) < 2:
        return float("inf")
    diff = np.abs(w[:, None] - w[None, :])
    np.fill_diagonal(diff, np.inf)
    return float(np.min(diff))


def continue_fiber(
    product: FiniteBlaschkeProduct,
    vertices,
    starts,
    *,
    critical_values=(),
    tol: float = 1e-12,
    min_separation: float = TRACK_SEPARATION,
    max_halvings: int = MAX_HALVINGS,
) -> np.ndarray:
    """Track the whole fiber along a polyline; index i follows sheet i.

    Predictor is the previous fiber; the corrector is a vectorized Newton
    solve of phi(w) = phi(path point).  Correct label transport needs the
    value path phi(z(t)) of each accepted step to stay inside a disk that
    excludes every critical value: then it is homotopic to the straight
    value chord the warm-started corrector implicitly follows.  The
    endpoint motion |v - v_here| cannot certify that — the value path of a
    long z-step can wind around a critical value and return next to its
    start, silently permuting the sheets.  Each step is therefore cut until
    a sampled bound on the value path LENGTH is small against the distance
    of the endpoints to every critical value, and the same length bound
    divided by the slowest sheet speed |phi'(w_i)| is small against the
    current sheet separation (so the true transport, not just the
    corrector's answer, moves every sheet by a fraction of the separation).
    The usual corrector guards (all sheets converged, sheets separated, no
    sheet moved by more than a fraction of the previous separation) stay.

    When sheet 0 starts on the first path point (every monodromy loop and
    the operator transport do this), slot 0 tracks the identity local
    inverse, whose continuation along ANY path is the path point itself;
    an accepted step whose slot 0 strays from the path point proves a
    mislabeling, so it is rejected like any other guard failure.
    """
    w = np.array(starts, dtype=complex)
    if _min_separation(w) < min_separation:
        raise ContinuationCollision("initial fiber points are not separated")
    vcrit = np.asarray(critical_values, dtype=complex)
    anchored = abs(w[0] - vertices[0]) <= 1e-9
    for a, b in zip(vertices, vertices[1:]):
        t = 0.0
        step = 1.0
        halvings = 0
        v_here = complex(product.eval(a))
        while t < 1.0:
            t2 = min(1.0, t + step)
            z_here = a + (b - a) * t
            z = a + (b - a) * t2
            v = complex(product.eval(z))
            sep_before = _min_separation(w)
            if len(vcrit):
                crit_dist = float(
                    min(np.min(np.abs(v - vcrit)), np.min(np.abs(v_here - vcrit)))
                )
            else:
                crit_dist = float("inf")
            chord = z_here + (z - z_here) * _CHORD_SAMPLES
            path_speed = float(np.max(np.abs(product.derivative_eval(chord))))
            value_span = 1.3 * path_speed * abs(z - z_here)
            speed = np.abs(product.derivative_eval(w))
            predicted = value_span / max(1e-12, float(np.min(speed)))
            sep_after = sep_before
            accepted = False
            if value_span <= 0.3 * crit_dist and predicted <= 0.3 * sep_before:
                cand, ok = refine_fiber(product, v, w, tol=tol)
                sep_after = _min_separation(cand)
                moved = float(np.max(np.abs(cand - w)))
                accepted = (
                    bool(np.all(ok))
                    and sep_after >= min_separation
                    and moved <= 0.45 * sep_before
                    and (not anchored or abs(cand[0] - z) <= _ANCHOR_TOL)
                )
            if accepted:
                w = cand
                v_here = v
                t = t2
                step = min(1.0, step * 1.7)
                halvings = 0
            else:
                step *= 0.5
                halvings += 1
                if halvings > max_halvings:
                    if sep_after < min_separation:
                        raise ContinuationCollision(
                            f"sheets collided near path point {z}"
                        )
                    raise StepUnderflow(f"step underflow near path point {z}")
    return w


def match_to_labels(final, labeled_points) -> tuple[int, ...]:
    """Permutation sending each start label to the label of its endpoint."""
    ref = np.asarray(labeled_points, dtype=complex)
    perm: list[int] = []
    for i, w in enumerate(np.asarray(final, dtype=complex)):
        d = np.abs(ref - w)
        j = int(np.argmin(d))
        if d[j] > MATCH_TOL:
            raise MatchingAmbiguity(
                f"sheet {i} ended {d[j]:.2e} away from every labeled point"
            )
        perm.append(j)
    if len(set(perm)) != len(perm):
        raise MatchingAmbiguity("two sheets ended on the same labeled point")
    return tuple(perm)


def monodromy_generator(
    product: FiniteBlaschkeProduct,
    frame: AnnulusFrame,
    loop: Loop,
    critical_values=(),
) -> tuple[int, ...]:
    if loop.target_index is not None and len(critical_values):
        # At a fiber point of multiplicity m+1 the loop's value circle has
        # radius ~ loop.radius**(m+1), which must stay above the floating
        # point noise floor of the ambient values or continuation cannot
        # resolve the winding at all.
        vals = np.array([product.eval(z) for z in loop.vertices[1:-1]])
        gap = float(np.min(np.abs(vals[:, None] - np.asarray(critical_values))))
        if gap < 1e-13:
            raise LoopPlanningFailure(
                f"loop around locus point {loop.target_index} passes within "
                f"{gap:.1e} of a branch value; not numerically resolvable"
            )
    final = continue_fiber(
        product, loop.vertices, frame.labeled.points, critical_values=critical_values
    )
    return match_to_labels(final, frame.labeled.points)


def orbit_partition(n: int, perms) -> ZnPartition:
    """Orbits of the subgroup of S(Z_n) generated by the permutations."""
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        parent[find(i)] = find(j)

    for perm in perms:
        for k, image in enumerate(perm):
            union(k, image)
    groups: dict[int, list[int]] = {}
    for k in range(n):
        groups.setdefault(find(k), []).append(k)
    return ZnPartition.from_blocks(n, groups.values())

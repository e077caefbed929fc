"""Exact cyclotomic arithmetic on Z_n partitions.

Oracles, written independently of the implementation:

* 50-digit mpmath evaluation of root-of-unity sums (the implementation is
  exact integer arithmetic in the cyclotomic field; the oracle is pure
  floating point at high precision).
* a brute-force dual construction that groups residues by numeric
  signature vectors at 50-digit precision.
* a from-scratch admissibility filter built directly from the block
  conditions ({0} is a block; sumset multiplicity uniformity; negation
  closure; dual block count equals block count).
"""

from __future__ import annotations

import itertools
from math import gcd

import mpmath
import pytest

from blaschke import (
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
from blaschke.znarith import CyclotomicElement, cyclotomic_polynomial, euler_phi

mpmath.mp.dps = 50


# ---------------------------------------------------------------- oracles


def mp_root_sum(block, j, n):
    """Oracle: sum of exp(2 pi i k j / n) over k in block, 50 digits."""
    return mpmath.fsum(
        (mpmath.expjpi(mpmath.mpf(2 * ((k * j) % n)) / n) for k in block),
        absolute=False,
    )


def mp_signature(p, j):
    return tuple(mp_root_sum(b, j, p.n) for b in p.blocks)


def brute_force_dual(p):
    """Oracle: group residues by 50-digit numeric signature vectors."""
    reps: list[tuple] = []
    groups: list[list[int]] = []
    for j in range(p.n):
        sig = mp_signature(p, j)
        for idx, rep in enumerate(reps):
            if all(abs(a - b) < mpmath.mpf("1e-30") for a, b in zip(sig, rep)):
                groups[idx].append(j)
                break
        else:
            reps.append(sig)
            groups.append([j])
    return ZnPartition.from_blocks(p.n, groups)


def brute_force_admissible(p):
    """Oracle: the four block conditions, written directly from scratch."""
    n = p.n
    blocks = [set(b) for b in p.blocks]
    # {0} must be its own block
    if {0} not in blocks:
        return False
    # sumsets meet each block with uniform multiplicity
    for bi in blocks:
        for bj in blocks:
            counts = {}
            for a in bi:
                for b in bj:
                    t = (a + b) % n
                    counts[t] = counts.get(t, 0) + 1
            for bk in blocks:
                mults = {counts.get(t, 0) for t in bk}
                if len(mults) > 1:
                    return False
    # negation permutes the blocks
    for b in blocks:
        if {(-x) % n for x in b} not in blocks:
            return False
    # the dual has exactly as many classes as there are blocks
    return brute_force_dual(p).q == p.q


def all_partitions(n):
    """Every set partition of {0..n-1} (restricted growth strings)."""

    def rec(k, labels, maxl):
        if k == n:
            out = {}
            for idx, lab in enumerate(labels):
                out.setdefault(lab, []).append(idx)
            yield ZnPartition.from_blocks(n, out.values())
            return
        for lab in range(maxl + 1):
            yield from rec(k + 1, labels + [lab], max(maxl, lab + 1))

    yield from rec(1, [0], 1)


# ------------------------------------------------------------------ tests


def test_root_of_unity_sum_matches_mpmath_oracle():
    import random

    rnd = random.Random(424242)
    for _ in range(400):
        n = rnd.randint(1, 24)
        size = rnd.randint(1, n)
        block = rnd.sample(range(n), size)
        j = rnd.randint(0, 3 * n)
        exact = root_of_unity_sum(block, j, n)
        val = exact.complex_value()
        want = mp_root_sum(block, j, n)
        assert abs(complex(val) - complex(want)) < 1e-9


def test_cyclotomic_equality_is_exact_not_floating():
    # 1 + zeta + ... + zeta^(n-1) = 0 exactly, for composite and prime n
    for n in (2, 3, 4, 6, 8, 12, 17):
        total = root_of_unity_sum(range(n), 1, n)
        assert total.is_zero()
    # subgroup character sums: sum over H of zeta^{kj} is |H| when j
    # annihilates H and 0 otherwise
    assert root_of_unity_sum([0, 2, 4, 6], 1, 8).is_zero()
    assert root_of_unity_sum([0, 2, 4, 6], 2, 8).is_zero()
    four = root_of_unity_sum([0, 2, 4, 6], 4, 8)
    assert not four.is_zero()
    assert abs(four.complex_value() - 4.0) < 1e-12
    assert root_of_unity_sum([1, 3, 5, 7], 1, 8).is_zero()


def test_cyclotomic_polynomial_degrees_and_values():
    for n in range(1, 25):
        phi = cyclotomic_polynomial(n)
        assert len(phi) - 1 == euler_phi(n)
        # every primitive n-th root is a root of Phi_n (check numerically)
        for k in range(1, n + 1):
            if gcd(k, n) == 1:
                z = complex(mpmath.expjpi(mpmath.mpf(2 * k) / n))
                val = sum(c * z**i for i, c in enumerate(phi))
                assert abs(val) < 1e-8


def test_from_exponents_reduces_consistently():
    # zeta^k for k >= n wraps around; sums reduce mod Phi_n
    a = CyclotomicElement.from_exponents(8, [9])
    b = CyclotomicElement.from_exponents(8, [1])
    assert a == b
    c = CyclotomicElement.from_exponents(12, [4, 8, 0])  # 1 + w + w^2, w = zeta^4
    assert c.is_zero()


def test_dual_partition_matches_brute_force_oracle():
    cases = [
        ZnPartition.from_blocks(8, [[0], [2], [4], [6], [1, 3, 5, 7]]),
        ZnPartition.from_blocks(8, [[0], [2], [4], [6], [1, 5], [3, 7]]),
        ZnPartition.from_blocks(8, [[0], [1, 2, 3, 4, 5, 6, 7]]),
        ZnPartition.from_blocks(8, [[0], [4], [1, 3, 5, 7], [2, 6]]),
        ZnPartition.from_blocks(6, [[0], [3], [1, 5], [2, 4]]),
        ZnPartition.from_blocks(4, [[0], [1, 3], [2]]),
        singletons(5),
        ZnPartition.from_blocks(12, [[0], [6], [1, 5, 7, 11], [2, 10], [3, 9], [4, 8]]),
    ]
    for p in cases:
        assert dual_partition(p).blocks == brute_force_dual(p).blocks


def test_dual_on_random_partitions_matches_oracle():
    import random

    rnd = random.Random(7)
    for _ in range(40):
        n = rnd.randint(2, 10)
        labels = [0] + [rnd.randint(0, n - 1) for _ in range(n - 1)]
        groups: dict[int, list[int]] = {}
        for idx, lab in enumerate(labels):
            groups.setdefault(lab, []).append(idx)
        p = ZnPartition.from_blocks(n, groups.values())
        assert dual_partition(p).blocks == brute_force_dual(p).blocks


def test_dual_of_singletons_is_singletons():
    for n in (1, 2, 3, 5, 8, 12):
        assert dual_partition(singletons(n)).blocks == singletons(n).blocks


def test_dual_of_two_block_generic_is_two_block():
    p = ZnPartition.from_blocks(8, [[0], list(range(1, 8))])
    d = dual_partition(p)
    assert d.blocks == p.blocks


def test_dual_exactness_on_the_subtle_five_block_case():
    # The five-block partition with one fat block: its dual splits {2,6}
    # off from the singletons because the fat-block signature coincides at
    # 2 and 6 but not at 0 and 4.  A floating filter at coarse precision
    # would be tempted to merge more.
    p = ZnPartition.from_blocks(8, [[0], [2], [4], [6], [1, 3, 5, 7]])
    d = dual_partition(p)
    assert d.blocks == ((0,), (1, 5), (2, 6), (3, 7), (4,))
    assert d.q == p.q  # 5 = 5: this partition satisfies the dual-count test


def test_alpha_conditions_on_known_cases():
    good = ZnPartition.from_blocks(4, [[0], [1, 3], [2]])
    assert check_alpha0(good)
    assert check_alpha1(good)[0]
    assert check_alpha2(good)[0]
    assert check_alpha3(good)[0]
    assert is_admissible(good)

    no_zero = ZnPartition.from_blocks(4, [[0, 1], [2], [3]])
    assert not check_alpha0(no_zero)

    not_negation_closed = ZnPartition.from_blocks(5, [[0], [1], [2, 3, 4]])
    ok2, witness = check_alpha2(not_negation_closed)
    assert not ok2
    assert witness is not None

    ok1, witness1 = check_alpha1(
        ZnPartition.from_blocks(4, [[0], [1], [2, 3]])
    )
    assert not ok1
    assert witness1 is not None


def test_admissibility_matches_brute_force_filter_up_to_n7():
    for n in range(2, 8):
        for p in all_partitions(n):
            assert is_admissible(p) == brute_force_admissible(p), p


def test_subgroup_unions_and_reducibility():
    p = ZnPartition.from_blocks(8, [[0], [1, 3, 5, 7], [2], [4], [6]])
    unions = subgroup_unions(p)
    elements = [u.elements for u in unions]
    assert (0,) in elements
    assert tuple(range(8)) in elements
    assert (0, 4) in elements
    assert (0, 2, 4, 6) in elements
    trivial_flags = {u.elements: u.trivial for u in unions}
    assert trivial_flags[(0,)] and trivial_flags[tuple(range(8))]
    assert not trivial_flags[(0, 4)]
    assert is_reducible(p)

    generic = ZnPartition.from_blocks(8, [[0], list(range(1, 8))])
    assert not is_reducible(generic)
    assert all(u.trivial for u in subgroup_unions(generic))


def test_eigenvalue_matrix_is_constant_on_dual_blocks():
    p = ZnPartition.from_blocks(8, [[0], [2], [4], [6], [1, 3, 5, 7]])
    dual = dual_partition(p)
    matrix = eigenvalue_matrix(p, dual)
    assert len(matrix) == p.q
    assert all(len(row) == dual.q for row in matrix)
    # entry (k, j) must equal the block-k sum at EVERY l in dual block j
    for k, block in enumerate(p.blocks):
        for j, dblock in enumerate(dual.blocks):
            for l in dblock:
                assert matrix[k][j] == root_of_unity_sum(block, l, 8)


def test_eigenvalue_matrix_floats_match_oracle():
    p = ZnPartition.from_blocks(6, [[0], [3], [1, 5], [2, 4]])
    dual = dual_partition(p)
    matrix = eigenvalue_matrix(p, dual)
    for k, block in enumerate(p.blocks):
        for j, dblock in enumerate(dual.blocks):
            val = matrix[k][j].complex_value()
            want = mp_root_sum(block, dblock[0], 6)
            assert abs(complex(val) - complex(want)) < 1e-12


def test_partition_canonicalization_and_validation():
    p = ZnPartition.from_blocks(4, [[3, 1], [2], [0]])
    assert p.blocks == ((0,), (1, 3), (2,))
    assert p.q == 3
    assert p.block_of(3) == (1, 3)
    with pytest.raises(ValueError):
        ZnPartition.from_blocks(4, [[0], [1]])
    with pytest.raises(ValueError):
        ZnPartition.from_blocks(4, [[0, 1], [1, 2, 3]])
    assert str(p) == "{{0}, {1,3}, {2}}"

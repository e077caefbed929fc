"""Exact arithmetic on partitions of Z_n and sums of n-th roots of unity.

Everything here is integer arithmetic.  A sum of roots of unity is represented
by its residue in Z[x]/Phi_n(x) (Phi_n the n-th cyclotomic polynomial), stored
as an integer coefficient vector of length deg Phi_n.  Equality of such sums is
decided exactly; floating point appears only in the optional complex rendering
used by reports.

The partition conditions checked here:

* alpha0 -- {0} is a block.
* alpha1 -- for every pair of blocks, the sumset multiset G_i + G_j (mod n)
  has uniform multiplicity on every block it meets.
* alpha2 -- negation mod n maps blocks to blocks.
* alpha3 -- the dual partition has exactly as many blocks as the partition.

The dual groups residues j by the exact signature vector
(sum_{k in G_i} zeta^{k j})_i over all blocks.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence


@dataclass(frozen=True)
class ZnPartition:
    """A set partition of Z_n = {0, ..., n-1} in canonical form.

    Blocks are ascending tuples, ordered by smallest element.
    """

    n: int
    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "ZnPartition":
        if n < 1:
            raise ValueError(f"modulus must be positive, got {n}")
        canon = tuple(sorted((tuple(sorted(set(b))) for b in blocks), key=lambda b: b[0]))
        seen = [x for b in canon for x in b]
        if sorted(seen) != list(range(n)):
            raise ValueError(f"blocks do not partition Z_{n}: {canon}")
        return cls(n, canon)

    @property
    def q(self) -> int:
        """Number of blocks."""
        return len(self.blocks)

    def block_of(self, k: int) -> tuple[int, ...]:
        k %= self.n
        for b in self.blocks:
            if k in b:
                return b
        raise KeyError(k)  # unreachable on a valid partition

    def __str__(self) -> str:
        return "{" + ", ".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


def singletons(n: int) -> ZnPartition:
    return ZnPartition.from_blocks(n, [[k] for k in range(n)])


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def _polydiv_exact(num: list[int], den: list[int]) -> list[int]:
    # Exact division of integer polynomials, ascending coefficients.
    # den is monic up to sign at its top coefficient (+-1 for cyclotomics).
    num = list(num)
    dden = len(den) - 1
    lead = den[-1]
    out = [0] * (len(num) - dden)
    for i in range(len(num) - 1, dden - 1, -1):
        c = num[i]
        if c % lead:
            raise ArithmeticError("inexact cyclotomic division")
        q = c // lead
        out[i - dden] = q
        for j, d in enumerate(den):
            num[i - dden + j] -= q * d
    if any(num[:dden]):
        raise ArithmeticError("nonzero remainder in cyclotomic division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, ascending order."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n == 1:
        return (-1, 1)
    poly = [0] * (n + 1)
    poly[0], poly[n] = -1, 1  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _polydiv_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def _reduce_mod_cyclotomic(coeffs: Sequence[int], n: int) -> tuple[int, ...]:
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    work = list(coeffs)
    if len(work) < deg:
        work += [0] * (deg - len(work))
    for i in range(len(work) - 1, deg - 1, -1):
        c = work[i]
        if c:
            work[i] = 0
            for j in range(deg):
                # phi is monic: x^i == -sum_{j<deg} phi[j] x^(i-deg+j)
                work[i - deg + j] -= c * phi[j]
    return tuple(work[:deg])


@dataclass(frozen=True)
class CyclotomicElement:
    """Residue in Z[x]/Phi_n(x); represents an integer combination of n-th roots of unity."""

    n: int
    coeffs: tuple[int, ...]

    @classmethod
    def from_exponents(cls, n: int, exponents: Iterable[int]) -> "CyclotomicElement":
        """Exact value of sum zeta^e over the (multi)set of exponents."""
        vec = [0] * n
        for e in exponents:
            vec[e % n] += 1
        return cls(n, _reduce_mod_cyclotomic(vec, n))

    @classmethod
    def zero(cls, n: int) -> "CyclotomicElement":
        return cls(n, tuple([0] * euler_phi(n)))

    def __add__(self, other: "CyclotomicElement") -> "CyclotomicElement":
        if self.n != other.n:
            raise ValueError("mixed moduli")
        return CyclotomicElement(self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def complex_value(self) -> complex:
        """Float rendering at zeta = exp(2 pi i / n); never used for equality."""
        zeta = cmath.exp(2j * cmath.pi / self.n)
        return sum(c * zeta**k for k, c in enumerate(self.coeffs)) + 0j

    def is_zero(self) -> bool:
        return not any(self.coeffs)


def root_of_unity_sum(block: Sequence[int], j: int, n: int) -> CyclotomicElement:
    """Exact sum_{k in block} zeta^{k j} with zeta = exp(2 pi i / n)."""
    return CyclotomicElement.from_exponents(n, ((k * j) % n for k in block))


def _signature(p: ZnPartition, j: int) -> tuple[tuple[int, ...], ...]:
    return tuple(root_of_unity_sum(b, j, p.n).coeffs for b in p.blocks)


def dual_partition(p: ZnPartition) -> ZnPartition:
    """Group residues j by the exact vector of block sums (sum_{k in G_i} zeta^{k j})_i."""
    groups: dict[tuple, list[int]] = {}
    for j in range(p.n):
        groups.setdefault(_signature(p, j), []).append(j)
    return ZnPartition.from_blocks(p.n, groups.values())


def check_alpha0(p: ZnPartition) -> bool:
    return (0,) in p.blocks


def check_alpha1(p: ZnPartition):
    """Sumset uniformity.  Returns (True, None) or (False, witness).

    The witness is (block_i, block_j, block_k) where the multiset G_i + G_j
    meets G_k with non-uniform multiplicity.
    """
    n = p.n
    for gi in p.blocks:
        for gj in p.blocks:
            counts = [0] * n
            for a in gi:
                for b in gj:
                    counts[(a + b) % n] += 1
            for gk in p.blocks:
                hits = {counts[t] for t in gk}
                if len(hits) > 1:
                    return False, (gi, gj, gk)
    return True, None


def check_alpha2(p: ZnPartition):
    """Negation closure.  Returns (True, None) or (False, offending_block)."""
    have = set(p.blocks)
    for b in p.blocks:
        neg = tuple(sorted((-x) % p.n for x in b))
        if neg not in have:
            return False, b
    return True, None


def check_alpha3(p: ZnPartition):
    """Dual block count equals block count.  Returns (ok, dual)."""
    d = dual_partition(p)
    return d.q == p.q, d


def is_admissible(p: ZnPartition) -> bool:
    return (
        check_alpha0(p)
        and check_alpha1(p)[0]
        and check_alpha2(p)[0]
        and check_alpha3(p)[0]
    )


@dataclass(frozen=True)
class SubgroupUnion:
    elements: tuple[int, ...]
    trivial: bool


def subgroup_unions(p: ZnPartition) -> tuple[SubgroupUnion, ...]:
    """Subgroups of Z_n that are unions of blocks, smallest first.

    The trivial subgroup {0} and the full group are always present (alpha0
    makes {0} a union) and are flagged ``trivial``.
    """
    n = p.n
    out = []
    for d in sorted(range(1, n + 1), key=lambda d: n // d):
        if n % d:
            continue
        sub = frozenset(range(0, n, d))
        covered = [b for b in p.blocks if set(b) <= sub]
        if sum(len(b) for b in covered) == len(sub):
            out.append(SubgroupUnion(tuple(sorted(sub)), trivial=len(sub) in (1, n)))
    return tuple(out)


def is_reducible(p: ZnPartition) -> bool:
    """True iff some union of blocks is a nontrivial proper subgroup of Z_n."""
    return any(not s.trivial for s in subgroup_unions(p))


def eigenvalue_matrix(
    p: ZnPartition, dual: ZnPartition | None = None
) -> tuple[tuple[CyclotomicElement, ...], ...]:
    """Matrix c'_{kj} = sum_{i in G_k} zeta^{i l} for any representative l of dual block j.

    Rows follow p.blocks, columns follow dual.blocks.  Representative
    independence is what defines the dual, so it is asserted, not assumed.
    """
    dual = dual if dual is not None else dual_partition(p)
    rows = []
    for gk in p.blocks:
        row = []
        for gj in dual.blocks:
            vals = {root_of_unity_sum(gk, l, p.n) for l in gj}
            if len(vals) != 1:
                raise AssertionError(
                    f"dual block {gj} gives representative-dependent sums on {gk}"
                )
            row.append(vals.pop())
        rows.append(tuple(row))
    # Columns must be pairwise distinct: that is exactly dual-block separation.
    cols = list(zip(*rows))
    if len(set(cols)) != len(cols):
        raise AssertionError("eigenvalue matrix has repeated columns")
    return tuple(rows)

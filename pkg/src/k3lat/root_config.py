"""Chain configurations of (-2)-classes and exact p-divisibility searches.

A configuration is c pairwise orthogonal chains of p-1 classes, each chain
pairing as an A_{p-1} block.  The divisibility search asks which weighted
sums of whole chains are p times a lattice class.  It runs over the mod-p
reduction of the class coordinates (a kernel computation), then lifts and
re-verifies every candidate integrally.

For Enriques models the class group carries an order-2 torsion part that no
choice of basis splits off canonically; vectors may therefore carry extra
mod-2 coordinates beyond the free rank, with the canonical-class
representative supplied alongside (``torsion_class``).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Literal, Optional, Sequence

from .lattice_core import (
    AbelianInvariants,
    GramLattice,
    bareiss_det,
    lattice_row_basis,
    right_kernel_mod_p,
    smith_normal_form,
    transpose,
)


class SearchSpaceError(RuntimeError):
    """The divisibility search would enumerate more candidates than allowed."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class ChainConfiguration:
    """c chains of p-1 classes embedded in a class lattice.

    ``chains[i][k]`` is the coordinate vector of the k-th class of chain i
    (k = 0 .. p-2).  When ``torsion_class`` is given, vectors have
    ``ambient.rank + t`` entries whose trailing t coordinates are torsion
    bits; the Gram pairing only sees the first ``ambient.rank`` entries.
    """

    ambient: GramLattice
    p: int
    chains: tuple[tuple[tuple[int, ...], ...], ...]
    torsion_class: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        object.__setattr__(
            self,
            "chains",
            tuple(tuple(tuple(int(x) for x in v) for v in chain) for chain in self.chains),
        )
        if self.torsion_class is not None:
            object.__setattr__(self, "torsion_class", tuple(int(x) % 2 for x in self.torsion_class))
        n = self.vector_length
        if self.torsion_class is not None and len(self.torsion_class) != n:
            raise ValueError("torsion_class length must match the chain vectors")
        if n < self.ambient.rank:
            raise ValueError("chain vectors shorter than the ambient rank")
        for chain in self.chains:
            if len(chain) != self.p - 1:
                raise ValueError(f"each chain must have p-1 = {self.p - 1} classes")
            for v in chain:
                if len(v) != n:
                    raise ValueError("inconsistent vector lengths")
        self._check_gram()

    @property
    def vector_length(self) -> int:
        if not self.chains or not self.chains[0]:
            return self.ambient.rank
        return len(self.chains[0][0])

    def _check_gram(self):
        dot = self.ambient.dot
        for ci, chain in enumerate(self.chains):
            for a in range(len(chain)):
                for b in range(a, len(chain)):
                    want = -2 if a == b else (1 if b == a + 1 else 0)
                    got = dot(chain[a], chain[b])
                    if got != want:
                        raise ValueError(
                            f"chain {ci} is not an A_{self.p - 1} block: "
                            f"classes {a},{b} pair to {got}, expected {want}"
                        )
        for ci in range(len(self.chains)):
            for cj in range(ci + 1, len(self.chains)):
                for a, va in enumerate(self.chains[ci]):
                    for b, vb in enumerate(self.chains[cj]):
                        got = dot(va, vb)
                        if got != 0:
                            raise ValueError(
                                f"chains {ci} and {cj} are not orthogonal "
                                f"(classes {a},{b} pair to {got})"
                            )

    @property
    def count(self) -> int:
        return len(self.chains)


@dataclass(frozen=True)
class DivisibleSubsetWitness:
    """A p-divisible weighted subset: p * quotient_class = sum d_i (sum_k k chain_i[k])."""

    subset: tuple[int, ...]
    coefficients: tuple[int, ...]
    quotient_class: tuple[int, ...]


def weighted_chain_class(chain: Sequence[Sequence[int]], d: int) -> list[int]:
    """d * sum_k k * chain[k-1], the weighted class attached to one chain."""
    if not chain:
        raise ValueError("empty chain")
    n = len(chain[0])
    if any(len(v) != n for v in chain):
        raise ValueError("mismatched vector lengths")
    if not 1 <= d <= len(chain):
        raise ValueError("weight d must satisfy 1 <= d <= p-1")
    out = [0] * n
    for k, v in enumerate(chain, start=1):
        for i in range(n):
            out[i] += d * k * v[i]
    return out


def find_p_divisible_subsets(
    cfg: ChainConfiguration,
    max_candidates: int = 10**9,
    threads: int = 1,
) -> list[DivisibleSubsetWitness]:
    """All p-divisible weighted chain subsets, one witness per projective class.

    Coefficient vectors related by a global unit scaling mod p are the same
    divisibility datum; the representative returned has first coefficient 1.
    The search enumerates the kernel of the mod-p coefficient map, which is
    tiny in every real configuration; ``max_candidates`` guards the kernel
    enumeration and ``SearchSpaceError`` is raised if it would be exceeded.
    """
    p = cfg.p
    c = cfg.count
    if c == 0:
        return []
    n = cfg.vector_length
    if c * (p - 1) > cfg.ambient.rank:
        raise ValueError("configuration rank exceeds the ambient rank")

    rows = [weighted_chain_class(chain, 1) for chain in cfg.chains]
    kernel = right_kernel_mod_p(transpose(rows), p)
    k = len(kernel)
    if p**k - 1 > max_candidates:
        raise SearchSpaceError(
            f"kernel enumeration needs {p**k - 1} candidates (> {max_candidates})"
        )

    def normalise(combo) -> Optional[tuple[int, ...]]:
        d = [sum(combo[i] * kernel[i][j] for i in range(k)) % p for j in range(c)]
        support = [i for i in range(c) if d[i] != 0]
        if not support:
            return None
        unit = pow(d[support[0]], -1, p)  # first nonzero coefficient becomes 1
        return tuple((x * unit) % p for x in d)

    def scan(combos) -> set:
        out = set()
        for combo in combos:
            key = normalise(combo)
            if key is not None:
                out.add(key)
        return out

    all_combos = [cmb for cmb in product(range(p), repeat=k) if any(cmb)]
    if threads > 1 and len(all_combos) > 64:
        from concurrent.futures import ThreadPoolExecutor

        chunk = (len(all_combos) + threads - 1) // threads
        parts = [all_combos[i : i + chunk] for i in range(0, len(all_combos), chunk)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            keys = set().union(*pool.map(scan, parts))
    else:
        keys = scan(all_combos)

    witnesses = []
    for d in sorted(keys):
        support = tuple(i for i in range(c) if d[i] != 0)
        total = [0] * n
        for i in support:
            w = weighted_chain_class(cfg.chains[i], d[i])
            for j in range(n):
                total[j] += w[j]
        if any(x % p != 0 for x in total):
            continue  # mod-p solution failed the integral check
        quotient = tuple(total[j] // p for j in range(cfg.ambient.rank))
        witnesses.append(
            DivisibleSubsetWitness(
                subset=support,
                coefficients=tuple(d[i] for i in support),
                quotient_class=quotient,
            )
        )
    witnesses.sort(key=lambda w: (len(w.subset), w.subset, w.coefficients))
    return witnesses


def is_primitive_configuration(cfg: ChainConfiguration, max_candidates: int = 10**9) -> bool:
    """True when no nonempty weighted chain subset is p-divisible."""
    return not find_p_divisible_subsets(cfg, max_candidates=max_candidates)


def chain_span_glue(cfg: ChainConfiguration) -> AbelianInvariants:
    """Invariant factors of (primitive closure / span) for the full chain span."""
    rows = [list(v[: cfg.ambient.rank]) for chain in cfg.chains for v in chain]
    if not rows:
        return AbelianInvariants()
    D, _P, _Q = smith_normal_form(rows)
    r = min(len(D), len(D[0]))
    return AbelianInvariants(tuple(D[i][i] for i in range(r) if D[i][i] > 1))


# ---------------------------------------------------------------------------
# Enriques-specific criteria


def odd_p_divisibility_by_finite_index(
    D: Sequence[int],
    N_basis: Sequence[Sequence[int]],
    ambient: GramLattice,
    p: int,
) -> Literal["divisible", "inconclusive"]:
    """Finite-index divisibility criterion for a divisor class, p odd.

    If N has finite index in the ambient unimodular lattice, the index is
    coprime to p, and D pairs to a multiple of p with every generator of N,
    then D is p times a class (for odd p, the order-2 torsion of an
    Enriques class group cannot obstruct this).  The criterion is
    one-directional: a failed hypothesis yields "inconclusive", never a
    claim of indivisibility.
    """
    if p == 2 or not _is_prime(p):
        raise ValueError("p must be an odd prime")
    if ambient.rank != 10 or not ambient.is_unimodular() or not ambient.is_even():
        raise ValueError("ambient must be an even unimodular lattice of rank 10")
    if len(D) != ambient.rank:
        raise ValueError("divisor length must equal the ambient rank")
    rows = [list(v) for v in N_basis]
    if any(len(r) != ambient.rank for r in rows):
        raise ValueError("sublattice vectors must have the ambient rank")
    Dg, _P, _Q = smith_normal_form(rows)
    diag = [Dg[i][i] for i in range(min(len(Dg), len(Dg[0])))]
    if len([d for d in diag if d != 0]) < ambient.rank:
        raise ValueError("sublattice does not have finite index in the ambient lattice")
    index = 1
    for d in diag:
        index *= d
    if index % p == 0:
        return "inconclusive"
    if all(ambient.dot(D, n) % p == 0 for n in N_basis):
        return "divisible"
    return "inconclusive"


def sublattice_index(N_basis: Sequence[Sequence[int]], ambient: GramLattice) -> int:
    """Index of the full-rank sublattice spanned by N_basis inside Z^rank."""
    basis = lattice_row_basis([list(v) for v in N_basis])
    if len(basis) != ambient.rank:
        raise ValueError("sublattice does not have finite index in the ambient lattice")
    return abs(bareiss_det(basis))


def enriques_mod2_divisibility(
    classes: Sequence[Sequence[int]],
    torsion_class: Sequence[int],
) -> Literal["divisible_as_0", "divisible_as_KW", "not_divisible"]:
    """Reduce a sum of classes mod 2 and compare with 0 and the canonical class.

    Classes and the canonical-class representative live in the same
    coordinate model (free coordinates plus any trailing torsion bits).
    """
    if not classes:
        raise ValueError("empty class list")
    n = len(torsion_class)
    if any(len(v) != n for v in classes):
        raise ValueError("classes and torsion_class must share one coordinate length")
    total = [sum(v[i] for v in classes) % 2 for i in range(n)]
    kw = [x % 2 for x in torsion_class]
    if all(x == 0 for x in total):
        return "divisible_as_0"
    if total == kw:
        return "divisible_as_KW"
    return "not_divisible"


def symmetric_difference(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Symmetric difference of two index subsets, as a sorted tuple."""
    return tuple(sorted(set(a) ^ set(b)))

"""Finite groups as explicit multiplication tables.

Groups are built from presentations by plain coset enumeration over the
trivial subgroup, with a hard coset bound; element 0 is the identity and the
numbering is breadth-first word order, so tables are reproducible.  Words
use one lowercase letter per generator, a capital letter for its inverse,
and a trailing integer for a power ("a4" = aaaa, "acBA3C" = a c b' a'a'a' c').

Subgroup enumeration is exhaustive closure of element subsets; everything
here targets orders <= 36, where brute force is exact and immediate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence

from .lattice_core import AbelianInvariants


class EnumerationBound(RuntimeError):
    """Coset enumeration exceeded its bound: possibly infinite or bound too small."""


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[str, ...]
    relators: tuple[str, ...]

    def __post_init__(self):
        for g in self.generators:
            if len(g) != 1 or not g.islower():
                raise ValueError("generator names must be single lowercase letters")
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator names")


def parse_word(word: str, generators: Sequence[str]) -> list[int]:
    """Translate a word string into signed generator letters.

    Returns letter indices into [g0, g1, ..., g0^-1, g1^-1, ...].
    """
    k = len(generators)
    pos = {g: i for i, g in enumerate(generators)}
    letters: list[int] = []
    i = 0
    while i < len(word):
        ch = word[i]
        if ch.lower() not in pos:
            raise ValueError(f"unknown generator letter {ch!r} in word {word!r}")
        letter = pos[ch.lower()] + (k if ch.isupper() else 0)
        i += 1
        count = 0
        while i < len(word) and word[i].isdigit():
            count = 10 * count + int(word[i])
            i += 1
        letters.extend([letter] * max(count, 1))
    return letters


# ---------------------------------------------------------------------------
# coset enumeration


class _CosetGraph:
    def __init__(self, nletters: int):
        self.nletters = nletters
        self.labels: list[int] = []
        self.neighbors: list[list[int]] = []

    def new_coset(self) -> int:
        c = len(self.labels)
        self.labels.append(c)
        self.neighbors.append([-1] * self.nletters)
        return c

    def find(self, c: int) -> int:
        root = c
        while self.labels[root] != root:
            root = self.labels[root]
        while self.labels[c] != root:
            self.labels[c], c = root, self.labels[c]
        return root

    def unify(self, c1: int, c2: int):
        queue = [(c1, c2)]
        while queue:
            a, b = queue.pop()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            a, b = min(a, b), max(a, b)
            self.labels[b] = a
            for d in range(self.nletters):
                n1 = self.neighbors[a][d]
                n2 = self.neighbors[b][d]
                if n1 == -1:
                    self.neighbors[a][d] = n2
                elif n2 != -1:
                    queue.append((n1, n2))

    def step(self, c: int, letter: int) -> int:
        c = self.find(c)
        if self.neighbors[c][letter] == -1:
            self.neighbors[c][letter] = self.new_coset()
        return self.find(self.neighbors[c][letter])

    def follow(self, c: int, word: Sequence[int]) -> int:
        for letter in word:
            c = self.step(c, letter)
        return c


def _enumerate_cosets(pres: GroupPresentation, bound: int) -> tuple[_CosetGraph, list[int]]:
    k = len(pres.generators)
    graph = _CosetGraph(2 * k)
    relators = [parse_word(w, pres.generators) for w in pres.relators]
    # edge-consistency relators g g^-1 and g^-1 g
    for g in range(k):
        relators.append([g, g + k])
        relators.append([g + k, g])
    graph.new_coset()
    to_visit = 0
    while to_visit < len(graph.labels):
        if len(graph.labels) > bound:
            raise EnumerationBound("possibly infinite or bound too small")
        c = graph.find(to_visit)
        if c == to_visit:
            for rel in relators:
                graph.unify(graph.follow(c, rel), c)
        to_visit += 1
    live = sorted({graph.find(c) for c in range(len(graph.labels))})
    return graph, live


# ---------------------------------------------------------------------------
# multiplication tables


@dataclass(frozen=True)
class FiniteGroupTable:
    """A finite group: element 0 is the identity, table[i][j] = i * j."""

    table: tuple[tuple[int, ...], ...]
    generator_images: dict = field(default_factory=dict)
    name: Optional[str] = None

    def __post_init__(self):
        n = self.order
        object.__setattr__(self, "table", tuple(tuple(row) for row in self.table))
        for row in self.table:
            if len(row) != n or any(not 0 <= x < n for x in row):
                raise ValueError("malformed multiplication table")
        for i in range(n):
            if self.table[0][i] != i or self.table[i][0] != i:
                raise ValueError("element 0 is not an identity")
        for i in range(n):
            if not any(self.table[i][j] == 0 for j in range(n)):
                raise ValueError(f"element {i} has no inverse")
        for a in range(n):
            for b in range(n):
                ab = self.table[a][b]
                for c in range(n):
                    if self.table[ab][c] != self.table[a][self.table[b][c]]:
                        raise ValueError("multiplication table is not associative")

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        for b in range(self.order):
            if self.table[a][b] == 0:
                return b
        raise AssertionError

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def is_abelian(self) -> bool:
        n = self.order
        return all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(n))

    def order_profile(self) -> tuple[int, ...]:
        return tuple(sorted(self.element_order(a) for a in range(self.order)))


def group_from_presentation(pres: GroupPresentation, bound: int = 10_000) -> FiniteGroupTable:
    """Coset enumeration over the trivial subgroup, returning the full table."""
    graph, live = _enumerate_cosets(pres, bound)
    k = len(pres.generators)

    # breadth-first word order from the identity, generators before inverses
    order_letters = list(range(2 * k))
    start = graph.find(0)
    words: dict[int, list[int]] = {start: []}
    bfs = [start]
    while bfs:
        nxt = []
        for c in bfs:
            for letter in order_letters:
                d = graph.step(c, letter)
                if d not in words:
                    words[d] = words[c] + [letter]
                    nxt.append(d)
        bfs = nxt
    ordering = sorted(words, key=lambda c: (len(words[c]), words[c]))
    assert ordering[0] == start
    renum = {c: i for i, c in enumerate(ordering)}

    n = len(live)
    table = [[0] * n for _ in range(n)]
    for c in ordering:
        for d in ordering:
            table[renum[c]][renum[d]] = renum[graph.follow(c, words[d])]
    images = {g: renum[graph.step(start, i)] for i, g in enumerate(pres.generators)}
    return FiniteGroupTable(tuple(map(tuple, table)), generator_images=images)


def abelian_group_table(invariants: AbelianInvariants) -> FiniteGroupTable:
    """Direct-product table of cyclic groups, independent of coset enumeration."""
    factors = invariants.factors or (1,)
    elems = list(product(*(range(f) for f in factors)))
    elems.sort(key=lambda t: (sum(t), t))  # identity first
    idx = {e: i for i, e in enumerate(elems)}
    n = len(elems)
    table = [
        [idx[tuple((a + b) % f for a, b, f in zip(x, y, factors))] for y in elems] for x in elems
    ]
    return FiniteGroupTable(tuple(map(tuple, table)), name=str(invariants))


# ---------------------------------------------------------------------------
# subgroup machinery


def _close(G: FiniteGroupTable, seed: frozenset, memo: dict) -> frozenset:
    if seed in memo:
        return memo[seed]
    elems = set(seed) | {0}
    frontier = list(elems)
    while frontier:
        new = []
        for a in list(elems):
            for b in frontier:
                for x in (G.table[a][b], G.table[b][a]):
                    if x not in elems:
                        elems.add(x)
                        new.append(x)
        frontier = new
    out = frozenset(elems)
    memo[seed] = out
    return out


_subgroup_cache: dict[tuple, list[frozenset]] = {}


def all_subgroups(G: FiniteGroupTable) -> list[frozenset]:
    if G.table in _subgroup_cache:
        return _subgroup_cache[G.table]
    memo: dict = {}
    trivial = frozenset({0})
    found = {trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for H in frontier:
            for g in range(1, G.order):
                if g in H:
                    continue
                K = _close(G, H | {g}, memo)
                if K not in found:
                    found.add(K)
                    nxt.append(K)
        frontier = nxt
    out = sorted(found, key=lambda s: (len(s), sorted(s)))
    _subgroup_cache[G.table] = out
    return out


def is_normal(G: FiniteGroupTable, H: frozenset) -> bool:
    for g in range(G.order):
        gi = G.inv(g)
        for h in H:
            if G.table[G.table[g][h]][gi] not in H:
                return False
    return True


def count_normal_subgroups(G: FiniteGroupTable, index: int) -> int:
    if index < 1 or G.order % index != 0:
        return 0
    target = G.order // index
    return sum(1 for H in all_subgroups(G) if len(H) == target and is_normal(G, H))


def subgroup_table(G: FiniteGroupTable, H: frozenset) -> FiniteGroupTable:
    elems = sorted(H)
    assert elems[0] == 0
    idx = {e: i for i, e in enumerate(elems)}
    table = [[idx[G.table[a][b]] for b in elems] for a in elems]
    return FiniteGroupTable(tuple(map(tuple, table)))


def _generating_set(G: FiniteGroupTable) -> list[int]:
    gens: list[int] = []
    memo: dict = {}
    span = frozenset({0})
    while len(span) < G.order:
        g = next(x for x in range(G.order) if x not in span)
        gens.append(g)
        span = _close(G, span | {g}, memo)
    return gens


def is_isomorphic(G: FiniteGroupTable, H: FiniteGroupTable) -> bool:
    """Generator-image backtracking search for an isomorphism."""
    if G.order != H.order:
        return False
    if G.order_profile() != H.order_profile():
        return False
    gens = _generating_set(G)
    gen_orders = [G.element_order(g) for g in gens]
    candidates = [
        [h for h in range(H.order) if H.element_order(h) == o] for o in gen_orders
    ]

    def build(images) -> bool:
        mapping = {0: 0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g, img in zip(gens, images):
                    y = G.table[x][g]
                    iy = H.table[mapping[x]][img]
                    if y in mapping:
                        if mapping[y] != iy:
                            return False
                    else:
                        mapping[y] = iy
                        nxt.append(y)
            frontier = nxt
        if len(mapping) != G.order or len(set(mapping.values())) != G.order:
            return False
        return all(
            mapping[G.table[a][b]] == H.table[mapping[a]][mapping[b]]
            for a in range(G.order)
            for b in range(G.order)
        )

    for images in product(*candidates):
        if build(images):
            return True
    return False


def count_normal_subgroups_isomorphic_to(
    G: FiniteGroupTable, pattern: FiniteGroupTable
) -> int:
    count = 0
    for H in all_subgroups(G):
        if len(H) != pattern.order or not is_normal(G, H):
            continue
        if is_isomorphic(subgroup_table(G, H), pattern):
            count += 1
    return count


def quotient_table(G: FiniteGroupTable, K: frozenset) -> FiniteGroupTable:
    """G/K for a normal subgroup K, cosets renumbered with the identity first."""
    coset_of: dict[int, int] = {}
    reps: list[int] = []
    for g in range(G.order):
        if g in coset_of:
            continue
        idx = len(reps)
        reps.append(g)
        for k in K:
            coset_of[G.table[g][k]] = idx
    ident = coset_of[0]
    order = [ident] + [i for i in range(len(reps)) if i != ident]
    renum = {old: new for new, old in enumerate(order)}
    table = [
        [renum[coset_of[G.table[reps[a]][reps[b]]]] for b in order] for a in order
    ]
    return FiniteGroupTable(tuple(map(tuple, table)))


def abelianization_invariants(G: FiniteGroupTable) -> AbelianInvariants:
    """Invariant factors of G/[G,G]."""
    memo: dict = {}
    comms = frozenset(
        G.table[G.table[a][b]][G.table[G.inv(a)][G.inv(b)]]
        for a in range(G.order)
        for b in range(G.order)
    )
    Q = quotient_table(G, _close(G, comms, memo))
    if Q.order == 1:
        return AbelianInvariants()

    def chains(n: int, minimum: int = 2):
        if n == 1:
            yield ()
            return
        for d in range(minimum, n + 1):
            if n % d == 0:
                for rest in chains(n // d, d):
                    # factors listed largest-last: d divides everything in rest
                    if all(r % d == 0 for r in rest):
                        yield (d,) + rest

    for chain in chains(Q.order):
        if is_isomorphic(Q, abelian_group_table(AbelianInvariants(chain))):
            return AbelianInvariants(chain)
    raise AssertionError("no abelian invariant chain matched")


# ---------------------------------------------------------------------------
# catalog


_CATALOG_PRESENTATIONS: dict[str, GroupPresentation] = {}


def _cp(name: str, gens: str, *rels: str):
    _CATALOG_PRESENTATIONS[name] = GroupPresentation(tuple(gens), tuple(rels))


_cp("1", "a", "a")
for _n in range(2, 11):
    _cp(f"Z/{_n}", "a", f"a{_n}")
_cp("(Z/2)^2", "ab", "a2", "b2", "abAB")
_cp("(Z/2)^3", "abc", "a2", "b2", "c2", "abAB", "acAC", "bcBC")
_cp("(Z/2)^4", "abcd", "a2", "b2", "c2", "d2", "abAB", "acAC", "adAD", "bcBC", "bdBD", "cdCD")
_cp("Z/4xZ/2", "ab", "a4", "b2", "abAB")
_cp("Z/4x(Z/2)^2", "abc", "a4", "b2", "c2", "abAB", "acAC", "bcBC")
_cp("(Z/3)^2", "ab", "a3", "b3", "abAB")
_cp("Z/6xZ/3", "ab", "a6", "b3", "abAB")
_cp("S3", "ab", "a3", "b2", "abab")
_cp("D8", "ab", "a4", "b2", "abab")
_cp("D10", "ab", "a5", "b2", "abab")
_cp("S3xZ/3", "abc", "a3", "b2", "abab", "c3", "acAC", "bcBC")
_cp("D8xZ/2", "abc", "a4", "b2", "abab", "c2", "acAC", "bcBC")
_cp("Gamma2c1", "abc", "a4", "b2", "c2", "abAB", "acBA3C", "bcBC")
_cp("G18/5", "abc", "a3", "b3", "c2", "abAB", "acaC", "bcbC")

CATALOG_ORDER = list(_CATALOG_PRESENTATIONS)

_catalog_cache: dict[str, FiniteGroupTable] = {}


def catalog_presentation(name: str) -> GroupPresentation:
    if name not in _CATALOG_PRESENTATIONS:
        raise ValueError(f"unknown catalog group {name!r}")
    return _CATALOG_PRESENTATIONS[name]


def catalog_group(name: str) -> FiniteGroupTable:
    if name == "(Z/4xZ/2):Z/2":  # the split-extension name used by the tables
        name = "Gamma2c1"
    if name not in _catalog_cache:
        pres = catalog_presentation(name)
        table = group_from_presentation(pres)
        _catalog_cache[name] = FiniteGroupTable(
            table.table, generator_images=table.generator_images, name=name
        )
    return _catalog_cache[name]


def semidirect_z4xz2_by_z2() -> FiniteGroupTable:
    """The split extension of Z/4 x Z/2 by an involution sending x to x^-1 y.

    Written with its own presentation so identifying it with the catalog
    group of order 16 is a genuine check rather than a tautology.
    """
    pres = GroupPresentation(tuple("xyz"), ("x4", "y2", "z2", "xyXY", "zxzYx", "zyzY"))
    return group_from_presentation(pres)


# ---------------------------------------------------------------------------
# extension filtering


@dataclass(frozen=True)
class ExtensionConstraint:
    """An extension problem: abelian kernel, quotient order, and observed facts."""

    kernel_invariants: AbelianInvariants
    quotient_order: int
    facts: tuple = ()


def _check_fact(candidate: FiniteGroupTable, fact: dict) -> bool:
    kind = fact["kind"]
    if kind == "normal_count":
        count = count_normal_subgroups(candidate, fact["index"])
    elif kind == "normal_iso_count":
        count = count_normal_subgroups_isomorphic_to(candidate, catalog_group(fact["pattern"]))
    elif kind == "not_isomorphic":
        return not is_isomorphic(candidate, catalog_group(fact["pattern"]))
    else:
        raise ValueError(f"unknown fact kind {kind!r}")
    op = fact.get("op", "eq")
    if op == "eq":
        return count == fact["value"]
    if op == "ge":
        return count >= fact["value"]
    if op == "odd":
        return count % 2 == 1
    raise ValueError(f"unknown fact op {op!r}")


def filter_extensions(
    constraint: ExtensionConstraint, candidates: Sequence[FiniteGroupTable]
) -> list[FiniteGroupTable]:
    """Keep candidates that extend the abelian kernel by the stated quotient
    and satisfy every recorded fact; input order (catalog order) is kept."""
    kernel_order = constraint.kernel_invariants.order
    pattern = abelian_group_table(constraint.kernel_invariants)
    out = []
    for cand in candidates:
        if cand.order != kernel_order * constraint.quotient_order:
            continue
        if kernel_order > 1:
            has_kernel = any(
                len(H) == kernel_order
                and is_normal(cand, H)
                and is_isomorphic(subgroup_table(cand, H), pattern)
                for H in all_subgroups(cand)
            )
            if not has_kernel:
                continue
        if all(_check_fact(cand, f) for f in constraint.facts):
            out.append(cand)
    return out

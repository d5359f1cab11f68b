"""Decision procedures over the bundled classification tables.

The two tables (18 rows for the K3 case, 26 for the Enriques case) ship as
JSON; the classifiers take the divisibility facts as *inputs* - computed
upstream when lattice data is available - and pick the unique matching row.
The Enriques classifier additionally re-derives its answer: it classifies
the double cover, then runs the group-extension filter with the row's
recorded facts and checks that exactly the stored group survives.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .data import load_json
from .groups import ExtensionConstraint, catalog_group, filter_extensions
from .lattice_core import AbelianInvariants


class FactsError(ValueError):
    """The supplied facts are inconsistent with, or insufficient for, the tables."""


_K3_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19)

_KERNEL_INVARIANTS = {
    "1": (),
    "Z/2": (2,),
    "(Z/2)^2": (2, 2),
    "(Z/2)^3": (2, 2, 2),
    "Z/3": (3,),
    "(Z/3)^2": (3, 3),
    "Z/5": (5,),
}

_W_TEXT = {
    "primitive": "the configuration on the quotient surface is primitive",
    "nonprimitive": "the configuration on the quotient surface is not primitive",
    "one_K": "the quotient configuration contains exactly one 2-divisible 4-point set",
    "two_K": "the quotient configuration is a union of two 2-divisible 4-point sets",
    "two_K_plus_A1": "the quotient configuration is a union of two 2-divisible "
    "4-point sets and one extra curve",
    "three_K": "the quotient configuration is a union of three 2-divisible 4-point sets",
    "one_T": "the quotient configuration contains exactly one 3-divisible chain triple",
}

_COVER_TEXT = {
    "primitive": "the doubled configuration on the cover is primitive",
    "nonprimitive": "the doubled configuration on the cover is not primitive",
    "one_H": "the cover carries exactly one 2-divisible 8-point subset",
    "two_H": "the cover configuration is a union of two 2-divisible 8-point subsets",
    "three_H": "the cover configuration is a union of three 2-divisible 8-point subsets",
    "one_R": "the cover carries exactly one 3-divisible 6-point subset",
    "two_R": "the cover configuration is a union of two 3-divisible 6-point subsets",
}


@dataclass(frozen=True)
class Pi1Descriptor:
    """A fundamental group: a catalog finite group or a symbolic infinite extension."""

    kind: str  # "finite" | "infinite_extension"
    name: Optional[str] = None
    kernel_printed: Optional[str] = None
    kernel_covering: Optional[str] = None
    quotient: Optional[str] = None

    @staticmethod
    def from_json(obj: dict) -> "Pi1Descriptor":
        return Pi1Descriptor(
            kind=obj["kind"],
            name=obj.get("name"),
            kernel_printed=obj.get("kernel_printed"),
            kernel_covering=obj.get("kernel_covering"),
            quotient=obj.get("quotient"),
        )

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def order(self):
        if self.is_finite:
            return catalog_group(self.name).order
        return "infinite"

    def display(self) -> str:
        if self.is_finite:
            return self.name
        return f"extension of {self.quotient} by {self.kernel_printed}"


@dataclass(frozen=True)
class TableRow:
    table: int
    number: int
    p: int
    c: int
    condition_text: str
    pi1: Pi1Descriptor
    sing_y: Optional[str]
    realizable: object  # True or "unknown"


@dataclass(frozen=True)
class K3Input:
    p: int
    c: int
    facts: Optional[str] = None  # primitive | nonprimitive | one_H | two_H | one_R | two_R


@dataclass(frozen=True)
class EnriquesInput:
    p: int
    c: int
    w: Optional[str] = None
    cover: Optional[str] = None


@lru_cache(maxsize=None)
def _table_from(table_id: int, source: str) -> tuple[dict, ...]:
    data = load_json(f"table{table_id}.json")
    return tuple(data["rows"])


def _table(table_id: int) -> tuple[dict, ...]:
    from .data import data_dir

    return _table_from(table_id, str(data_dir()))


# ---------------------------------------------------------------------------
# cover arithmetic


def cover_euler_solutions() -> list[tuple[int, int, str]]:
    """All (p, c) admitting a degree-p cyclic cover branched at every point.

    With c points of type A_{p-1} on a K3, the cover Z satisfies
    e(Z) - c = p (24 - c p) and a canonical-trivial smooth surface has
    e(Z) = 0 (abelian) or 24 (K3); the search space is bounded by the rank
    constraint c (p - 1) <= 19.
    """
    out = []
    for p in _K3_PRIMES:
        for c in range(1, 20):
            if c * (p - 1) > 19:
                break
            euler = p * (24 - c * p) + c
            if euler == 0:
                out.append((p, c, "abelian"))
            elif euler == 24:
                out.append((p, c, "K3"))
    return sorted(out)


def admissible_pairs(surface: str) -> list[tuple[int, int]]:
    """(p, largest admissible c) for each prime, per surface kind."""
    if surface == "K3":
        return [(2, 16), (3, 9), (5, 4), (7, 3), (11, 1), (13, 1), (17, 1), (19, 1)]
    if surface == "Enriques":
        return [(2, 8), (3, 4), (5, 2), (7, 1)]
    raise ValueError("surface must be 'K3' or 'Enriques'")


def _max_c(surface: str, p: int) -> Optional[int]:
    for q, cmax in admissible_pairs(surface):
        if q == p:
            return cmax
    return None


def transport_singularities(count: int, ramified: int, p: int) -> int:
    """Point count downstairs -> upstairs along a degree-p cover branched at
    `ramified` of the points: branch points smooth out, the rest lift p-fold."""
    if not 0 <= ramified <= count:
        raise ValueError("ramification set is not a subset of the singular set")
    return (count - ramified) * p


def _render_sing_y(row: dict, p: int, c: int) -> str:
    kind = row["sing_y"]["kind"]
    if kind == "same_as_x":
        return f"{c}A{p - 1} (Y = X)"
    if kind == "plane":
        return "Y = C^2"
    count = c
    for ram in row["tower"]:
        count = transport_singularities(count, ram, p)
    return "smooth" if count == 0 else f"{count}A{p - 1}"


# ---------------------------------------------------------------------------
# the K3 classifier


def _k3_effective_facts(p: int, c: int, facts: Optional[str]) -> str:
    if facts in ("one_H", "two_H") and (p, c) != (2, 12):
        raise FactsError(f"{facts} applies only to twelve points with p = 2")
    if facts in ("one_R", "two_R") and (p, c) != (3, 8):
        raise FactsError(f"{facts} applies only to eight points with p = 3")

    min_div = {2: 8, 3: 6, 5: 4, 7: 3}.get(p)  # smallest divisible subset
    always_div = {2: 12, 3: 8}.get(p)  # from here the span is never primitive

    if facts == "nonprimitive" and min_div is not None and c < min_div:
        raise FactsError(
            f"a p-divisible subset needs at least {min_div} points when p = {p}; "
            f"with c = {c} the span is always primitive"
        )
    if p > 7 and facts == "nonprimitive":
        raise FactsError("for p > 7 the span is always primitive")
    if facts == "primitive" and always_div is not None and c >= always_div:
        raise FactsError(
            f"with p = {p} and c = {c} a divisible subset always exists; "
            "the span cannot be primitive"
        )

    if facts is not None:
        if (p, c) == (2, 12) and facts == "nonprimitive":
            raise FactsError("at twelve points specify one_H or two_H")
        if (p, c) == (3, 8) and facts == "nonprimitive":
            raise FactsError("at eight points specify one_R or two_R")
        return facts

    # inference where the tables leave no choice
    if p == 2:
        if c <= 7:
            return "primitive"
        if 13 <= c <= 16:
            return "nonprimitive"
    elif p == 3:
        if c <= 5:
            return "primitive"
        if c == 9:
            return "nonprimitive"
    elif p == 5 and c <= 3:
        return "primitive"
    elif p == 7 and c <= 2:
        return "primitive"
    elif p > 7:
        return "primitive"
    raise FactsError(
        f"p = {p}, c = {c} is ambiguous: supply a divisibility fact "
        "(primitive / nonprimitive / one_H / two_H / one_R / two_R)"
    )


def _row_matches_p(row: dict, p: int) -> bool:
    return row["p"] == p or (row["p"] == "gt7" and p > 7)


def k3_classify(inp: K3Input) -> TableRow:
    p, c = inp.p, inp.c
    if p not in _K3_PRIMES:
        raise FactsError(f"p = {p} is not an admissible prime (needs p <= 19, prime)")
    cmax = _max_c("K3", p)
    if not 1 <= c <= cmax:
        raise FactsError(f"for p = {p} the point count must satisfy 1 <= c <= {cmax}")
    effective = _k3_effective_facts(p, c, inp.facts)
    matches = [
        r
        for r in _table(1)
        if _row_matches_p(r, p) and r["c_min"] <= c <= r["c_max"] and r["condition"] == effective
    ]
    if not matches:
        raise FactsError(f"no table row matches p = {p}, c = {c}, facts = {effective}")
    if len(matches) > 1:
        raise FactsError("facts underdetermine row")
    row = matches[0]
    return TableRow(
        table=1,
        number=row["no"],
        p=p,
        c=c,
        condition_text=row["condition_text"],
        pi1=Pi1Descriptor.from_json(row["pi1"]),
        sing_y=_render_sing_y(row, p, c),
        realizable=row["realizable"] if row["realizable"] is True else "unknown",
    )


# ---------------------------------------------------------------------------
# the Enriques classifier


def _enriques_condition_text(row: dict) -> str:
    parts = []
    if row.get("w"):
        parts.append(_W_TEXT[row["w"]])
    if row.get("cover"):
        parts.append(_COVER_TEXT[row["cover"]])
    return "; ".join(parts)


def _derive_enriques_group(row: dict, p: int, c: int) -> None:
    """Re-derive the stored group from the double cover plus extension facts."""
    kernel_name = row["kernel"]
    if kernel_name == "infinite":
        k3row = k3_classify(K3Input(p, 2 * c, row["k3_facts"]))
        if k3row.pi1.is_finite:
            raise FactsError("internal: expected an infinite cover group")
        return
    k3row = k3_classify(K3Input(p, 2 * c, row["k3_facts"]))
    if not k3row.pi1.is_finite or k3row.pi1.name != kernel_name:
        raise FactsError(
            f"internal: cover classification gave {k3row.pi1.display()}, "
            f"table stores kernel {kernel_name}"
        )
    kernel = AbelianInvariants(_KERNEL_INVARIANTS[kernel_name])
    from .groups import CATALOG_ORDER

    candidates = [
        catalog_group(name)
        for name in CATALOG_ORDER
        if catalog_group(name).order == 2 * kernel.order
    ]
    constraint = ExtensionConstraint(kernel, 2, tuple(row["ext_facts"]))
    survivors = filter_extensions(constraint, candidates)
    expected = catalog_group(row["pi1"]["name"]).name
    if [g.name for g in survivors] != [expected]:
        raise FactsError(
            f"facts underdetermine row: extension filter left "
            f"{[g.name for g in survivors]} instead of [{expected}]"
        )


def enriques_classify(inp: EnriquesInput) -> TableRow:
    p, c = inp.p, inp.c
    cmax = _max_c("Enriques", p)
    if cmax is None or not 1 <= c <= cmax:
        raise FactsError(f"no Enriques case has p = {p}, c = {c}")
    matches = []
    for row in _table(2):
        if row["p"] != p or not row["c_min"] <= c <= row["c_max"]:
            continue
        if row.get("w") and inp.w != row["w"]:
            continue
        if row.get("cover") and inp.cover != row["cover"]:
            continue
        matches.append(row)
    if len(matches) != 1:
        raise FactsError(
            f"facts underdetermine row: {len(matches)} rows match "
            f"p = {p}, c = {c}, w = {inp.w}, cover = {inp.cover}"
        )
    row = matches[0]
    _derive_enriques_group(row, p, c)
    return TableRow(
        table=2,
        number=row["no"],
        p=p,
        c=c,
        condition_text=_enriques_condition_text(row),
        pi1=Pi1Descriptor.from_json(row["pi1"]),
        sing_y=None,
        realizable=row["realizable"] if row["realizable"] is True else "unknown",
    )


# ---------------------------------------------------------------------------
# table lookup


def table_lookup(
    table_id: int,
    row: Optional[int] = None,
    p: Optional[int] = None,
    c: Optional[int] = None,
    finite: Optional[bool] = None,
    realizable: Optional[object] = None,
) -> list[dict]:
    """Pure data query over the bundled tables; rows come back as stored."""
    if table_id not in (1, 2):
        raise ValueError("table must be 1 or 2")
    out = []
    for r in _table(table_id):
        if row is not None and r["no"] != row:
            continue
        if p is not None and not _row_matches_p(r, p):
            continue
        if c is not None and not r["c_min"] <= c <= r["c_max"]:
            continue
        if finite is not None and (r["pi1"]["kind"] == "finite") != finite:
            continue
        if realizable is not None:
            stored = r["realizable"] if r["realizable"] is True else "unknown"
            if stored != realizable:
                continue
        out.append(dict(r))
    return out

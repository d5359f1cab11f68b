"""Elliptic fibration models on K3 surfaces: fibre component graphs, the
height pairing on sections, and exact verification of divisibility relations.

Heights and relation checks both run over exact rationals.  A divisibility
relation ``lhs = p * rhs`` between formal combinations of the zero section,
listed sections, a general fibre F and fibre components is verified in the
formal-radical model: the formal module surjects onto the class group, the
pairing descends, and the class pairing is nondegenerate, so ``lhs - p*rhs``
maps to zero exactly when it pairs to zero with every generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

FIBRE_SYMBOL = "F"

# multiplicities and bonds of the additive fibre graphs; components are kept
# in label order, the zero section meets component 0
_ADDITIVE = {
    "I0*": {"mults": (1, 1, 1, 1, 2), "bonds": ((0, 4), (1, 4), (2, 4), (3, 4)), "euler": 6},
    "IV*": {
        "mults": (1, 2, 1, 2, 1, 2, 3),
        "bonds": ((0, 1), (2, 3), (4, 5), (1, 6), (3, 6), (5, 6)),
        "euler": 8,
    },
    "III*": {
        "mults": (1, 2, 3, 4, 3, 2, 1, 2),
        "bonds": ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (3, 7)),
        "euler": 9,
    },
    "II*": {
        "mults": (1, 2, 3, 4, 5, 6, 4, 2, 3),
        "bonds": ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (5, 8)),
        "euler": 10,
    },
}


@dataclass(frozen=True)
class KodairaFibre:
    """One singular fibre with named components."""

    fibre_id: str
    kind: str  # "In", "I0*", "II*", "III*", "IV*"
    labels: tuple[str, ...]
    n: int = 0

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if self.kind == "In":
            if self.n < 1:
                raise ValueError("In fibres need n >= 1")
            if len(self.labels) != self.n:
                raise ValueError(f"fibre {self.fibre_id}: expected {self.n} component labels")
        elif self.kind in _ADDITIVE:
            want = len(_ADDITIVE[self.kind]["mults"])
            if len(self.labels) != want:
                raise ValueError(f"fibre {self.fibre_id}: expected {want} component labels")
        else:
            raise ValueError(f"unknown fibre kind {self.kind!r}")

    @property
    def euler(self) -> int:
        return self.n if self.kind == "In" else _ADDITIVE[self.kind]["euler"]

    @property
    def multiplicities(self) -> tuple[int, ...]:
        if self.kind == "In":
            return (1,) * self.n
        return _ADDITIVE[self.kind]["mults"]

    def bonds(self) -> list[tuple[int, int]]:
        """Component adjacency with multiplicity (I1 has a self-bond, I2 a double bond)."""
        if self.kind != "In":
            return list(_ADDITIVE[self.kind]["bonds"])
        if self.n == 1:
            return [(0, 0)]
        if self.n == 2:
            return [(0, 1), (0, 1)]
        return [(i, (i + 1) % self.n) for i in range(self.n)]

    def simple_indices(self) -> list[int]:
        return [i for i, m in enumerate(self.multiplicities) if m == 1]

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"fibre {self.fibre_id} has no component {label!r}") from None


@dataclass(frozen=True)
class SectionIncidence:
    """Which simple component a section meets on each fibre, plus intersection numbers."""

    name: str
    meets: dict  # fibre_id -> component label; omitted fibres default to index 0
    dot_zero: int = 0
    dots: dict = field(default_factory=dict)  # other section name -> intersection number


@dataclass(frozen=True)
class FibrationSpec:
    """An elliptic K3 fibration: fibres, zero section, declared torsion sections."""

    fibres: tuple[KodairaFibre, ...]
    zero_section: str
    sections: tuple[SectionIncidence, ...] = ()
    mw_order: int = 1
    chi: int = 2
    name: Optional[str] = None

    def __post_init__(self):
        if self.chi != 2:
            raise ValueError("only chi = 2 surfaces are modelled")
        ids = [f.fibre_id for f in self.fibres]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate fibre ids")
        all_labels = [l for f in self.fibres for l in f.labels]
        if len(set(all_labels)) != len(all_labels):
            raise ValueError("component labels must be globally unique")
        reserved = {FIBRE_SYMBOL, self.zero_section} | {s.name for s in self.sections}
        if reserved & set(all_labels):
            raise ValueError("component labels clash with section or fibre symbols")
        for s in self.sections:
            for fid, label in s.meets.items():
                fibre = self.fibre(fid)
                idx = fibre.index_of(label)
                if idx not in fibre.simple_indices():
                    raise ValueError(
                        f"section {s.name} meets non-simple component {label} of {fid}"
                    )

    def fibre(self, fibre_id: str) -> KodairaFibre:
        for f in self.fibres:
            if f.fibre_id == fibre_id:
                return f
        raise ValueError(f"unknown fibre id {fibre_id!r}")

    def section(self, name: str) -> SectionIncidence:
        for s in self.sections:
            if s.name == name:
                return s
        raise ValueError(f"unknown section {name!r}")

    def meet_index(self, section: SectionIncidence, fibre: KodairaFibre) -> int:
        label = section.meets.get(fibre.fibre_id)
        if label is None:
            return 0
        return fibre.index_of(label)

    def section_dot(self, a: str, b: str) -> int:
        if a == b:
            return -2
        for s in self.sections:
            if s.name == a:
                if b == self.zero_section:
                    return s.dot_zero
                if b in s.dots:
                    return s.dots[b]
            if s.name == b:
                if a == self.zero_section:
                    return s.dot_zero
                if a in s.dots:
                    return s.dots[a]
        raise ValueError(f"no recorded intersection number for sections {a}, {b}")


def parse_fibration(obj: dict) -> FibrationSpec:
    """Parse the JSON fibration format."""
    fibres = []
    for i, f in enumerate(obj["fibres"]):
        kind = f["type"]
        fibres.append(
            KodairaFibre(
                fibre_id=f.get("id", f"fib{i}"),
                kind=kind,
                labels=tuple(f["labels"]),
                n=int(f.get("n", 0)),
            )
        )
    sections = tuple(
        SectionIncidence(
            name=s["name"],
            meets=dict(s.get("meets", {})),
            dot_zero=int(s.get("dot_zero", 0)),
            dots=dict(s.get("dots", {})),
        )
        for s in obj.get("sections", ())
    )
    return FibrationSpec(
        fibres=tuple(fibres),
        zero_section=obj["zero_section"],
        sections=sections,
        mw_order=int(obj.get("mw_order", 1)),
        chi=int(obj.get("chi", 2)),
        name=obj.get("name"),
    )


# ---------------------------------------------------------------------------
# height pairing


def local_contribution(fibre: KodairaFibre, i: int, j: int) -> Fraction:
    """Local correction term of the height pairing for simple components i, j.

    For I_n with components 0..n-1 in cyclic order the term is i(n-j)/n
    (i <= j as distances from component 0); it vanishes whenever either
    index is 0.  Additive fibres use the standard constants.
    """
    mults = fibre.multiplicities
    for idx in (i, j):
        if not 0 <= idx < len(mults):
            raise ValueError(f"fibre {fibre.fibre_id} has no component index {idx}")
        if mults[idx] != 1:
            raise ValueError(f"component {idx} of {fibre.fibre_id} is not simple")
    if i == 0 or j == 0:
        return Fraction(0)
    if fibre.kind == "In":
        a, b = min(i, j), max(i, j)
        return Fraction(a * (fibre.n - b), fibre.n)
    if fibre.kind == "I0*":
        return Fraction(1) if i == j else Fraction(1, 2)
    if fibre.kind == "IV*":
        return Fraction(4, 3) if i == j else Fraction(2, 3)
    if fibre.kind == "III*":
        if i != j:
            raise ValueError("III* has a single non-zero simple component")
        return Fraction(3, 2)
    # II* has no non-zero simple component, so the earlier checks force i = j = 0
    return Fraction(0)


def height_pair(P: str, Q: str, spec: FibrationSpec) -> Fraction:
    """Height pairing: chi + P.O + Q.O - P.Q - sum of local terms.

    For P = Q this reduces to 2 chi + 2 (P.O) - sum, since a section has
    self-intersection -chi.
    """
    sp, sq = spec.section(P), spec.section(Q)
    if P == Q:
        total = Fraction(2 * spec.chi) + 2 * sp.dot_zero
    else:
        total = Fraction(spec.chi) + sp.dot_zero + sq.dot_zero - spec.section_dot(P, Q)
    for fibre in spec.fibres:
        i = spec.meet_index(sp, fibre)
        j = spec.meet_index(sq, fibre)
        total -= local_contribution(fibre, i, j)
    return total


def height(P: str, spec: FibrationSpec) -> Fraction:
    """Height of a section: 2 chi + 2 (P.O) - sum of local correction terms."""
    return height_pair(P, P, spec)


@dataclass(frozen=True)
class ValidationCheck:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[ValidationCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)


def validate_fibration(spec: FibrationSpec) -> ValidationReport:
    """Euler number 24, rank-20 component count, zero height for torsion sections."""
    checks = []
    euler = sum(f.euler for f in spec.fibres)
    checks.append(
        ValidationCheck("euler_sum_24", euler == 24, f"sum of fibre Euler numbers = {euler}")
    )
    st = sum(len(f.labels) - 1 for f in spec.fibres) + 2
    checks.append(
        ValidationCheck(
            "shioda_tate_20", st == 20, f"components - fibres + 2 = {st} (finite Mordell-Weil)"
        )
    )
    for s in spec.sections:
        h = height(s.name, spec)
        checks.append(
            ValidationCheck(f"torsion_height_{s.name}", h == 0, f"h({s.name}) = {h}")
        )
    return ValidationReport(tuple(checks))


# ---------------------------------------------------------------------------
# the formal pairing and radical membership


def generators(spec: FibrationSpec) -> list[str]:
    out = [spec.zero_section] + [s.name for s in spec.sections] + [FIBRE_SYMBOL]
    for f in spec.fibres:
        out.extend(f.labels)
    return out


def formal_gram(spec: FibrationSpec) -> tuple[list[str], list[list[int]]]:
    """Integer intersection matrix on the formal generators."""
    gens = generators(spec)
    pos = {g: i for i, g in enumerate(gens)}
    n = len(gens)
    G = [[0] * n for _ in range(n)]
    section_names = [spec.zero_section] + [s.name for s in spec.sections]

    for a in section_names:
        for b in section_names:
            if a == b:
                G[pos[a]][pos[a]] = -2
            else:
                G[pos[a]][pos[b]] = spec.section_dot(a, b)
        G[pos[a]][pos[FIBRE_SYMBOL]] = G[pos[FIBRE_SYMBOL]][pos[a]] = 1

    for fibre in spec.fibres:
        base = [pos[l] for l in fibre.labels]
        for i in base:
            G[i][i] = -2
        for i, j in fibre.bonds():
            if i == j:
                G[base[i]][base[i]] += 2
            else:
                G[base[i]][base[j]] += 1
                G[base[j]][base[i]] += 1
        # zero section meets component 0
        G[pos[spec.zero_section]][base[0]] = G[base[0]][pos[spec.zero_section]] = 1
        for s in spec.sections:
            idx = spec.meet_index(s, fibre)
            G[pos[s.name]][base[idx]] = G[base[idx]][pos[s.name]] = 1
    return gens, G


def divisor_vector(spec: FibrationSpec, coeffs: dict) -> list[Fraction]:
    gens = generators(spec)
    pos = {g: i for i, g in enumerate(gens)}
    v = [Fraction(0)] * len(gens)
    for symbol, value in coeffs.items():
        if symbol not in pos:
            raise ValueError(f"unknown generator symbol {symbol!r}")
        v[pos[symbol]] = Fraction(value)
    return v


def in_radical(spec: FibrationSpec, v: Sequence[Fraction]) -> bool:
    _, G = formal_gram(spec)
    n = len(G)
    for i in range(n):
        if sum(G[i][j] * v[j] for j in range(n)) != 0:
            return False
    return True


def verify_divisibility_relation(spec: FibrationSpec, lhs: dict, p: int, rhs: dict) -> bool:
    """True when lhs - p * rhs pairs to zero with every formal generator."""
    vl = divisor_vector(spec, lhs)
    vr = divisor_vector(spec, rhs)
    v = [a - p * b for a, b in zip(vl, vr)]
    return in_radical(spec, v)


def fibre_relation(spec: FibrationSpec, fibre: KodairaFibre) -> dict:
    """The kernel element sum(m_i C_i) - F attached to one fibre."""
    rel = {label: m for label, m in zip(fibre.labels, fibre.multiplicities)}
    rel[FIBRE_SYMBOL] = -1
    return rel


def parse_divisor(obj: dict) -> dict:
    """Divisor JSON: symbol -> integer or rational string 'a/b'."""
    return {k: Fraction(v) for k, v in obj.items()}

import random

import pytest

from k3lat.groups import (
    CATALOG_ORDER,
    AbelianInvariants,
    EnumerationBound,
    ExtensionConstraint,
    FiniteGroupTable,
    GroupPresentation,
    abelian_group_table,
    abelianization_invariants,
    all_subgroups,
    catalog_group,
    count_normal_subgroups,
    count_normal_subgroups_isomorphic_to,
    filter_extensions,
    group_from_presentation,
    is_isomorphic,
    parse_word,
    semidirect_z4xz2_by_z2,
)


def test_parse_word():
    assert parse_word("a4", "ab") == [0, 0, 0, 0]
    assert parse_word("abAB", "ab") == [0, 1, 2, 3]
    assert parse_word("acBA3C", "abc") == [0, 2, 4, 3, 3, 3, 5]
    with pytest.raises(ValueError):
        parse_word("ax", "ab")


def test_presentation_orders():
    assert group_from_presentation(GroupPresentation(("a",), ("a2",))).order == 2
    assert catalog_group("Gamma2c1").order == 16
    assert catalog_group("G18/5").order == 18
    assert not catalog_group("G18/5").is_abelian()
    assert catalog_group("S3").order == 6
    assert catalog_group("D8").order == 8
    assert catalog_group("D10").order == 10
    assert catalog_group("(Z/2)^4").order == 16
    assert catalog_group("S3xZ/3").order == 18


def test_presentation_orders_beyond_catalog():
    s4 = group_from_presentation(GroupPresentation(("a", "b"), ("a4", "b2", "ababab")))
    assert s4.order == 24 and not s4.is_abelian()
    a4 = group_from_presentation(GroupPresentation(("a", "b"), ("a3", "b3", "abab")))
    assert a4.order == 12
    q8 = group_from_presentation(GroupPresentation(("a", "b"), ("a4", "a2B2", "babA")))
    assert q8.order == 8
    assert count_normal_subgroups(q8, 2) == 3
    assert count_normal_subgroups_isomorphic_to(q8, catalog_group("(Z/2)^2")) == 0


def test_enumeration_bound():
    free = GroupPresentation(("a", "b"), ())
    with pytest.raises(EnumerationBound):
        group_from_presentation(free, bound=50)


def test_catalog_abelian_groups_match_direct_construction():
    for name, inv in [
        ("Z/6", (6,)),
        ("(Z/2)^3", (2, 2, 2)),
        ("Z/4xZ/2", (2, 4)),
        ("Z/4x(Z/2)^2", (2, 2, 4)),
        ("(Z/3)^2", (3, 3)),
        ("Z/6xZ/3", (3, 6)),
    ]:
        assert is_isomorphic(catalog_group(name), abelian_group_table(AbelianInvariants(inv)))


def test_normal_subgroup_counts():
    assert count_normal_subgroups(catalog_group("(Z/2)^4"), 2) == 15
    assert count_normal_subgroups(catalog_group("Z/4x(Z/2)^2"), 2) == 7
    assert count_normal_subgroups(catalog_group("Gamma2c1"), 2) == 3
    assert count_normal_subgroups(catalog_group("D10"), 5) == 0
    assert count_normal_subgroups(catalog_group("D10"), 2) == 1
    assert count_normal_subgroups(catalog_group("S3"), 3) == 0
    assert count_normal_subgroups(catalog_group("Z/6"), 3) == 1


def test_normal_subgroups_isomorphic_to_pattern():
    v4 = catalog_group("(Z/2)^2")
    assert count_normal_subgroups_isomorphic_to(catalog_group("D8"), v4) == 2
    assert count_normal_subgroups_isomorphic_to(catalog_group("(Z/2)^3"), v4) == 7
    assert count_normal_subgroups_isomorphic_to(catalog_group("Z/8"), v4) == 0
    assert count_normal_subgroups_isomorphic_to(catalog_group("Z/4xZ/2"), v4) == 1


def test_is_isomorphic_basics():
    assert not is_isomorphic(catalog_group("D8"), catalog_group("(Z/2)^3"))
    assert not is_isomorphic(catalog_group("Z/10"), catalog_group("D10"))
    assert is_isomorphic(catalog_group("Z/6"), abelian_group_table(AbelianInvariants((6,))))


def test_is_isomorphic_under_shuffled_numbering():
    rng = random.Random(4)
    g = catalog_group("Gamma2c1")
    perm = list(range(1, g.order))
    rng.shuffle(perm)
    perm = [0] + perm
    inv_perm = [perm.index(i) for i in range(g.order)]
    shuffled = [
        [inv_perm[g.table[perm[a]][perm[b]]] for b in range(g.order)] for a in range(g.order)
    ]
    assert is_isomorphic(g, FiniteGroupTable(tuple(map(tuple, shuffled))))


def test_split_extension_name_matches_order16_group():
    assert is_isomorphic(semidirect_z4xz2_by_z2(), catalog_group("Gamma2c1"))
    assert catalog_group("(Z/4xZ/2):Z/2").name == "Gamma2c1"


def test_index_two_counts_match_abelianization():
    for name in CATALOG_ORDER:
        G = catalog_group(name)
        ab = abelianization_invariants(G)
        evens = sum(1 for f in ab.factors if f % 2 == 0)
        assert count_normal_subgroups(G, 2) == 2**evens - 1


def test_isomorphism_is_equivalence_on_catalog():
    groups = [catalog_group(n) for n in CATALOG_ORDER]
    for g in groups:
        assert is_isomorphic(g, g)
    for a in groups:
        for b in groups:
            assert is_isomorphic(a, b) == is_isomorphic(b, a)
    # distinct catalog entries are genuinely distinct groups
    for i, a in enumerate(groups):
        for b in groups[i + 1 :]:
            assert not is_isomorphic(a, b)


def test_subgroup_enumeration_counts():
    assert len(all_subgroups(catalog_group("S3"))) == 6
    assert len(all_subgroups(catalog_group("D8"))) == 10
    assert len(all_subgroups(catalog_group("Z/10"))) == 4


# ---------------------------------------------------------------------------
# extension filtering


def by_names(names):
    return [catalog_group(n) for n in names]


def test_filter_order10_extensions():
    constraint = ExtensionConstraint(AbelianInvariants((5,)), 2)
    survivors = filter_extensions(constraint, by_names(["Z/10", "D10", "Z/8", "S3"]))
    assert [g.name for g in survivors] == ["Z/10", "D10"]
    with_cover = ExtensionConstraint(
        AbelianInvariants((5,)), 2, ({"kind": "normal_count", "index": 5, "op": "ge", "value": 1},)
    )
    assert [g.name for g in filter_extensions(with_cover, by_names(["Z/10", "D10"]))] == ["Z/10"]
    without_cover = ExtensionConstraint(
        AbelianInvariants((5,)), 2, ({"kind": "normal_count", "index": 5, "op": "eq", "value": 0},)
    )
    assert [g.name for g in filter_extensions(without_cover, by_names(["Z/10", "D10"]))] == ["D10"]


def test_filter_order18_extensions():
    # kernel (Z/3)^2: an index-3 normal subgroup must exist, and be unique
    base = ["Z/6xZ/3", "S3xZ/3", "G18/5"]
    has3 = ExtensionConstraint(
        AbelianInvariants((3, 3)), 2, ({"kind": "normal_count", "index": 3, "op": "ge", "value": 1},)
    )
    assert [g.name for g in filter_extensions(has3, by_names(base))] == ["Z/6xZ/3", "S3xZ/3"]
    unique3 = ExtensionConstraint(
        AbelianInvariants((3, 3)), 2, ({"kind": "normal_count", "index": 3, "op": "eq", "value": 1},)
    )
    assert [g.name for g in filter_extensions(unique3, by_names(base))] == ["S3xZ/3"]
    # kernel Z/3 at order 6: the same index-3 fact separates the two extensions
    order6 = ExtensionConstraint(
        AbelianInvariants((3,)), 2, ({"kind": "normal_count", "index": 3, "op": "ge", "value": 1},)
    )
    assert [g.name for g in filter_extensions(order6, by_names(["Z/6", "S3"]))] == ["Z/6"]


def test_filter_order8_extensions_parity_fact():
    base = ["Z/8", "Z/4xZ/2", "(Z/2)^3", "D8"]
    odd_v4 = ExtensionConstraint(
        AbelianInvariants((2, 2)),
        2,
        ({"kind": "normal_iso_count", "pattern": "(Z/2)^2", "op": "odd"},),
    )
    assert [g.name for g in filter_extensions(odd_v4, by_names(base))] == [
        "Z/4xZ/2",
        "(Z/2)^3",
    ]


def test_filter_order16_extensions():
    base = ["(Z/2)^4", "Z/4x(Z/2)^2", "Gamma2c1", "D8xZ/2"]
    not_d8z2 = ExtensionConstraint(
        AbelianInvariants((2, 2, 2)), 2, ({"kind": "not_isomorphic", "pattern": "D8xZ/2"},)
    )
    assert [g.name for g in filter_extensions(not_d8z2, by_names(base))] == [
        "(Z/2)^4",
        "Z/4x(Z/2)^2",
        "Gamma2c1",
    ]
    # the index-2 normal-subgroup counts 15 / 7 / 3 then pick out each case
    for count, expect in [(15, "(Z/2)^4"), (7, "Z/4x(Z/2)^2"), (3, "Gamma2c1")]:
        c = ExtensionConstraint(
            AbelianInvariants((2, 2, 2)),
            2,
            (
                {"kind": "not_isomorphic", "pattern": "D8xZ/2"},
                {"kind": "normal_count", "index": 2, "op": "eq", "value": count},
            ),
        )
        assert [g.name for g in filter_extensions(c, by_names(base))] == [expect]

import pytest

from k3lat.classifier import (
    EnriquesInput,
    FactsError,
    K3Input,
    admissible_pairs,
    cover_euler_solutions,
    enriques_classify,
    k3_classify,
    table_lookup,
    transport_singularities,
)


def test_cover_euler_solutions_exact():
    assert cover_euler_solutions() == [
        (2, 8, "K3"),
        (2, 16, "abelian"),
        (3, 6, "K3"),
        (3, 9, "abelian"),
        (5, 4, "K3"),
        (7, 3, "K3"),
    ]


def test_admissible_pairs():
    assert admissible_pairs("K3") == [
        (2, 16), (3, 9), (5, 4), (7, 3), (11, 1), (13, 1), (17, 1), (19, 1),
    ]
    assert admissible_pairs("Enriques") == [(2, 8), (3, 4), (5, 2), (7, 1)]
    with pytest.raises(ValueError):
        admissible_pairs("abelian")


def test_transport_singularities():
    assert transport_singularities(12, 8, 2) == 8
    assert transport_singularities(8, 6, 3) == 6
    assert transport_singularities(7, 6, 3) == 3
    assert transport_singularities(4, 4, 5) == 0
    with pytest.raises(ValueError):
        transport_singularities(4, 5, 2)


# ---------------------------------------------------------------------------
# K3 classification


def test_k3_stated_examples():
    row5 = k3_classify(K3Input(2, 13, "nonprimitive"))
    assert row5.number == 5
    assert row5.pi1.name == "(Z/2)^2"
    assert row5.sing_y == "4A1"

    row13 = k3_classify(K3Input(3, 9))
    assert row13.number == 13
    assert not row13.pi1.is_finite
    assert row13.pi1.quotient == "Z/3"
    assert row13.pi1.kernel_printed == "Z^4"
    assert row13.pi1.kernel_covering == "Z^2"

    row18 = k3_classify(K3Input(11, 1))
    assert row18.number == 18
    assert row18.pi1.name == "1"


def test_k3_roundtrip_all_rows():
    from k3lat.classifier import _table

    for row in _table(1):
        ps = [row["p"]] if row["p"] != "gt7" else [11, 13, 17, 19]
        for p in ps:
            for c in range(row["c_min"], row["c_max"] + 1):
                got = k3_classify(K3Input(p, c, row["condition"]))
                assert got.number == row["no"], (row["no"], p, c)


def test_k3_sing_y_column():
    assert k3_classify(K3Input(2, 9, "nonprimitive")).sing_y == "2A1"
    assert k3_classify(K3Input(2, 11, "nonprimitive")).sing_y == "6A1"
    assert k3_classify(K3Input(2, 12, "one_H")).sing_y == "8A1"
    assert k3_classify(K3Input(2, 12, "two_H")).sing_y == "smooth"
    assert k3_classify(K3Input(2, 14)).sing_y == "smooth"
    assert k3_classify(K3Input(2, 16)).sing_y == "Y = C^2"
    assert k3_classify(K3Input(3, 7, "nonprimitive")).sing_y == "3A2"
    assert k3_classify(K3Input(3, 8, "one_R")).sing_y == "6A2"
    assert k3_classify(K3Input(3, 8, "two_R")).sing_y == "smooth"
    assert k3_classify(K3Input(5, 4, "nonprimitive")).sing_y == "smooth"
    assert k3_classify(K3Input(7, 2)).sing_y == "2A6 (Y = X)"


def test_k3_inconsistent_facts():
    with pytest.raises(FactsError):
        k3_classify(K3Input(2, 16, "primitive"))
    with pytest.raises(FactsError):
        k3_classify(K3Input(2, 5, "nonprimitive"))
    with pytest.raises(FactsError):
        k3_classify(K3Input(3, 4, "nonprimitive"))
    with pytest.raises(FactsError):
        k3_classify(K3Input(2, 12))  # needs one_H / two_H
    with pytest.raises(FactsError):
        k3_classify(K3Input(2, 9))  # genuinely ambiguous without facts
    with pytest.raises(FactsError):
        k3_classify(K3Input(2, 17))
    with pytest.raises(FactsError):
        k3_classify(K3Input(13, 2))
    with pytest.raises(FactsError):
        k3_classify(K3Input(3, 9, "one_H"))


def test_k3_finite_orders_match_tower():
    from k3lat.classifier import _table
    from k3lat.groups import catalog_group

    for row in _table(1):
        if row["pi1"]["kind"] != "finite":
            continue
        p = row["p"] if row["p"] != "gt7" else 11
        order = catalog_group(row["pi1"]["name"]).order
        assert order == p ** len(row["tower"])


# ---------------------------------------------------------------------------
# Enriques classification


def test_enriques_stated_examples():
    row25 = enriques_classify(EnriquesInput(5, 2, w="primitive", cover="nonprimitive"))
    assert row25.number == 25
    assert row25.pi1.name == "D10"

    row12 = enriques_classify(EnriquesInput(2, 7, w="one_K", cover="three_H"))
    assert row12.number == 12
    assert row12.pi1.name == "(Z/4xZ/2):Z/2"

    row15 = enriques_classify(EnriquesInput(2, 8, w="nonprimitive", cover="nonprimitive"))
    assert row15.number == 15
    assert not row15.pi1.is_finite
    assert row15.pi1.kernel_printed == "Z^2:Z/2"


def test_enriques_roundtrip_all_rows():
    from k3lat.classifier import _table

    for row in _table(2):
        for c in range(row["c_min"], row["c_max"] + 1):
            got = enriques_classify(
                EnriquesInput(row["p"], c, w=row.get("w"), cover=row.get("cover"))
            )
            assert got.number == row["no"], (row["no"], c)


def test_enriques_underdetermined_or_inconsistent():
    with pytest.raises(FactsError):
        enriques_classify(EnriquesInput(2, 4, w="nonprimitive", cover="primitive"))
    with pytest.raises(FactsError):
        enriques_classify(EnriquesInput(2, 4, w="primitive"))  # cover fact missing
    with pytest.raises(FactsError):
        enriques_classify(EnriquesInput(7, 2))


def test_enriques_group_is_soluble_sized():
    # all finite rows have order dividing 2 * p^4
    from k3lat.classifier import _table
    from k3lat.groups import catalog_group

    for row in _table(2):
        if row["pi1"]["kind"] != "finite":
            continue
        order = catalog_group(row["pi1"]["name"]).order
        assert order <= 2 * row["p"] ** 4


# ---------------------------------------------------------------------------
# lookups


def test_table_lookup_examples():
    rows = table_lookup(1, p=2, c=16)
    assert [r["no"] for r in rows] == [8]

    unknown = table_lookup(2, realizable="unknown")
    assert [r["no"] for r in unknown] == [14, 20]

    finite_p3 = table_lookup(1, p=3, finite=True)
    from k3lat.groups import catalog_group

    orders = [catalog_group(r["pi1"]["name"]).order for r in finite_p3]
    assert max(orders) == 9

    assert len(table_lookup(1)) == 18
    assert len(table_lookup(2)) == 26
    assert [r["no"] for r in table_lookup(2, p=5)] == [22, 23, 24, 25]


def test_theorem_bound_outside_exceptional_pairs():
    from k3lat.classifier import _table
    from k3lat.groups import catalog_group

    exceptional = {(2, 8), (2, 16), (3, 9)}
    for table_id in (1, 2):
        for row in _table(table_id):
            ps = [row["p"]] if row["p"] != "gt7" else [11, 13, 17, 19]
            for p in ps:
                for c in range(row["c_min"], row["c_max"] + 1):
                    if (p, c) in exceptional:
                        continue
                    assert row["pi1"]["kind"] == "finite"
                    order = catalog_group(row["pi1"]["name"]).order
                    assert order <= 2 * p**4

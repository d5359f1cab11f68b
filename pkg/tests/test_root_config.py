import random
from itertools import combinations

import pytest

from k3lat.finite_geometry import affine_hyperplanes, affine_space, ag23_lattice, kummer_lattice, line_complements
from k3lat.lattice_core import (
    EmbeddedSublattice,
    GramLattice,
    catalog_lattice,
    identity_matrix,
    primitive_closure,
)
from k3lat.root_config import (
    ChainConfiguration,
    SearchSpaceError,
    chain_span_glue,
    enriques_mod2_divisibility,
    find_p_divisible_subsets,
    is_primitive_configuration,
    odd_p_divisibility_by_finite_index,
    sublattice_index,
    symmetric_difference,
    weighted_chain_class,
)


def test_weighted_chain_class_examples():
    assert weighted_chain_class([(1, 0)], 1) == [1, 0]
    assert weighted_chain_class([(1, 0, 0), (0, 1, 0)], 1) == [1, 2, 0]
    assert weighted_chain_class([(1, 0, 0), (0, 1, 0)], 2) == [2, 4, 0]
    with pytest.raises(ValueError):
        weighted_chain_class([], 1)
    with pytest.raises(ValueError):
        weighted_chain_class([(1, 0), (0, 1, 0)], 1)


def make_unit_config(p, c, extra_rank=0):
    """Chains sitting on an integral basis: block gram, unit-vector classes."""
    n = c * (p - 1) + extra_rank
    block = catalog_lattice(f"A{p - 1}")
    gram = [[0] * n for _ in range(n)]
    for i in range(c):
        off = i * (p - 1)
        for a in range(p - 1):
            for b in range(p - 1):
                gram[off + a][off + b] = block.gram[a][b]
    for j in range(c * (p - 1), n):
        gram[j][j] = 2
    chains = tuple(
        tuple(tuple(1 if t == i * (p - 1) + k else 0 for t in range(n)) for k in range(p - 1))
        for i in range(c)
    )
    return ChainConfiguration(GramLattice(tuple(map(tuple, gram))), p, chains)


def test_integral_basis_configuration_has_no_witnesses():
    for p, c in [(2, 5), (3, 3), (5, 4)]:
        cfg = make_unit_config(p, c)
        assert find_p_divisible_subsets(cfg) == []
        assert is_primitive_configuration(cfg)


def test_config_validation_rejects_bad_gram():
    amb = GramLattice(((2, 0), (0, 2)))
    with pytest.raises(ValueError):
        ChainConfiguration(amb, 2, (((1, 0),),))  # self-intersection +2, not -2


def test_single_a1_in_rank_one_model_is_primitive():
    amb = GramLattice(((-2,),))
    cfg = ChainConfiguration(amb, 2, (((1,),),))
    assert is_primitive_configuration(cfg)


# ---------------------------------------------------------------------------
# the 16-point model


def test_kummer_witnesses_are_hyperplanes_and_full_set():
    _, cfg = kummer_lattice()
    witnesses = find_p_divisible_subsets(cfg)
    assert len(witnesses) == 31
    supports = {w.subset for w in witnesses}
    hyps = {h.members for h in affine_hyperplanes(affine_space(2, 4))}
    assert supports == hyps | {tuple(range(16))}
    eight = [w for w in witnesses if len(w.subset) == 8]
    assert len(eight) == 30
    assert not is_primitive_configuration(cfg)
    # each witness satisfies its identity exactly
    for w in witnesses:
        total = [0] * cfg.ambient.rank
        for i, d in zip(w.subset, w.coefficients):
            wc = weighted_chain_class(cfg.chains[i], d)
            total = [a + b for a, b in zip(total, wc)]
        assert total == [2 * x for x in w.quotient_class]


def test_kummer_symmetric_difference_law():
    _, cfg = kummer_lattice()
    supports = [set(w.subset) for w in find_p_divisible_subsets(cfg)]
    keyed = {tuple(sorted(s)) for s in supports}
    for s1, s2 in combinations(supports, 2):
        sym = tuple(sorted(s1 ^ s2))
        assert sym in keyed or sym == ()


def test_kummer_eight_set_intersection_law():
    _, cfg = kummer_lattice()
    eights = [set(w.subset) for w in find_p_divisible_subsets(cfg) if len(w.subset) == 8]
    for h1, h2 in combinations(eights, 2):
        inter = h1 & h2
        assert len(inter) in (0, 4)
        if not inter:
            assert h1 | h2 == set(range(16))


def test_kummer_hyperplane_span_has_glue_two():
    lattice, cfg = kummer_lattice()
    hyp = affine_hyperplanes(affine_space(2, 4))[0]
    basis = tuple(cfg.chains[i][0] for i in hyp.members)
    _, glue = primitive_closure(EmbeddedSublattice(lattice, basis))
    assert glue.factors == (2,)
    # the hyperplane sum itself is coordinatewise 2-divisible in the overlattice
    from k3lat.lattice_core import is_p_divisible_class

    total = [sum(v[i] for v in basis) for i in range(lattice.rank)]
    assert is_p_divisible_class(total, lattice, 2) is not None


# ---------------------------------------------------------------------------
# the 9-point model


def test_ag23_witnesses_are_line_complements_plus_full_set():
    _, cfg = ag23_lattice()
    witnesses = find_p_divisible_subsets(cfg)
    six = {w.subset for w in witnesses if len(w.subset) == 6}
    comps = {c.members for c in line_complements(affine_space(3, 2))}
    assert six == comps
    assert len(six) == 12
    full = [w for w in witnesses if len(w.subset) == 9]
    assert len(full) == 1
    assert len(witnesses) == 13
    for w in witnesses:
        total = [0] * cfg.ambient.rank
        for i, d in zip(w.subset, w.coefficients):
            wc = weighted_chain_class(cfg.chains[i], d)
            total = [a + b for a, b in zip(total, wc)]
        assert total == [3 * x for x in w.quotient_class]


# ---------------------------------------------------------------------------
# glue group vs witness list, on random glue-code models


def random_self_orthogonal_code(rng, p, c):
    basis = []
    for _ in range(12):
        w = [rng.randrange(p) for _ in range(c)]
        if all(x == 0 for x in w):
            continue
        if p == 2:
            if sum(w) % 4 != 0:
                continue
            if any(sum(a & b for a, b in zip(w, v)) % 2 for v in basis):
                continue
        else:
            if sum(x * x for x in w) % p != 0:
                continue
            if any(sum(a * b for a, b in zip(w, v)) % p for v in basis):
                continue
        from k3lat.lattice_core import right_kernel_mod_p, transpose

        cand = basis + [w]
        # keep only independent generators
        if len(right_kernel_mod_p(transpose(cand), p)) > 0:
            continue
        basis = cand
    return basis


def build_code_model(p, c, code_basis):
    """Overlattice of c orthogonal A_{p-1} chains glued along the given code."""
    from k3lat.lattice_core import GramLattice as GL
    from k3lat.lattice_core import lattice_row_basis, solve_left

    m = c * (p - 1)
    block = catalog_lattice(f"A{p - 1}")
    big = [[0] * m for _ in range(m)]
    for i in range(c):
        off = i * (p - 1)
        for a in range(p - 1):
            for b in range(p - 1):
                big[off + a][off + b] = block.gram[a][b]
    gens = [[p if j == idx else 0 for j in range(m)] for idx in range(m)]
    for w in code_basis:
        vec = [0] * m
        for i in range(c):
            for k in range(1, p):
                vec[i * (p - 1) + k - 1] = (w[i] * k) % p
        gens.append(vec)
    basis = lattice_row_basis(gens)
    gram = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            num = sum(basis[i][a] * big[a][b] * basis[j][b] for a in range(m) for b in range(m))
            assert num % (p * p) == 0
            gram[i][j] = num // (p * p)
    amb = GL(tuple(map(tuple, gram)))
    chains = []
    for i in range(c):
        chain = []
        for k in range(1, p):
            target = [p if j == i * (p - 1) + k - 1 else 0 for j in range(m)]
            x = solve_left(basis, target)
            chain.append(tuple(int(f) for f in x))
        chains.append(tuple(chain))
    return ChainConfiguration(amb, p, tuple(chains))


def test_glue_trivial_iff_no_witness_random_models():
    rng = random.Random(99)
    ran = 0
    while ran < 100:
        p = rng.choice([2, 2, 3, 5])
        cmax = 8 // (p - 1)
        c = rng.randint(1, cmax)
        code = random_self_orthogonal_code(rng, p, c) if rng.random() < 0.7 else []
        cfg = build_code_model(p, c, code)
        glue = chain_span_glue(cfg)
        # the shortcut glue computation agrees with the saturation operation
        span = tuple(v for chain in cfg.chains for v in chain)
        _, glue_via_closure = primitive_closure(EmbeddedSublattice(cfg.ambient, span))
        assert glue.factors == glue_via_closure.factors
        witnesses = find_p_divisible_subsets(cfg)
        assert glue.is_trivial == (witnesses == [])
        expected = (p ** len(code) - 1) // (p - 1)
        assert len(witnesses) == expected
        ran += 1


def test_search_space_guard():
    _, cfg = kummer_lattice()
    with pytest.raises(SearchSpaceError):
        find_p_divisible_subsets(cfg, max_candidates=3)


def test_threaded_search_matches_sequential():
    for builder in (kummer_lattice, ag23_lattice):
        _, cfg = builder()
        sequential = find_p_divisible_subsets(cfg, threads=1)
        threaded = find_p_divisible_subsets(cfg, threads=4)
        assert sequential == threaded


# ---------------------------------------------------------------------------
# finite-index divisibility criterion


def test_odd_p_divisible_trivial_case():
    amb = catalog_lattice("ENRIQUES_FREE")
    n_basis = identity_matrix(10)
    D = [5 * x for x in (1, 2, 0, -1, 3, 0, 0, 1, 1, 2)]
    assert odd_p_divisibility_by_finite_index(D, n_basis, amb, 5) == "divisible"
    assert sublattice_index(n_basis, amb) == 1


def test_odd_p_inconclusive_not_divisible_vector():
    amb = catalog_lattice("ENRIQUES_FREE")
    n_basis = identity_matrix(10)
    D = [1] + [0] * 9
    assert odd_p_divisibility_by_finite_index(D, n_basis, amb, 3) == "inconclusive"


def test_odd_p_index_not_coprime_is_inconclusive():
    amb = catalog_lattice("ENRIQUES_FREE")
    n_basis = [[3 if i == j else 0 for j in range(10)] for i in range(10)]
    D = [3] + [0] * 9
    assert odd_p_divisibility_by_finite_index(D, n_basis, amb, 3) == "inconclusive"


def test_odd_p_requires_finite_index():
    amb = catalog_lattice("ENRIQUES_FREE")
    with pytest.raises(ValueError):
        odd_p_divisibility_by_finite_index([0] * 10, [[1] + [0] * 9], amb, 3)


# ---------------------------------------------------------------------------
# mod-2 congruences with a torsion marker


def test_enriques_mod2_basic():
    kw = (0, 0, 0, 1)
    a = (2, 0, 4, 0)
    b = (1, 1, 0, 1)
    c = (1, 1, 0, 0)
    assert enriques_mod2_divisibility([a], kw) == "divisible_as_0"
    assert enriques_mod2_divisibility([b, c], kw) == "divisible_as_KW"
    assert enriques_mod2_divisibility([c], kw) == "not_divisible"
    with pytest.raises(ValueError):
        enriques_mod2_divisibility([], kw)


def test_symmetric_difference_helper():
    assert symmetric_difference((1, 2, 3), (2, 4)) == (1, 3, 4)

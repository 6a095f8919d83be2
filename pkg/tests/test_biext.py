import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biextlab.abelian import FgAbGroup, GroupMap, InvariantViolation, Unsupported, cyclic, free, hom_group, image, tensor_groups
from biextlab.biext import (
    BiextCocycle,
    BiextTrivialization,
    biext_group,
    brute_force_biext1,
    class_subgroup_order,
    cocycle_generators,
    pullback_biext,
    pushdown_biext,
    split_zero_differential,
    sum_biext,
)
from biextlab.complexes import BoundedComplex, ChainMap
from biextlab.derived import derived_tensor, derived_tensor_map, ext_group, ext_map
from biextlab.picard import PicardPresentation
from biextlab.samples import random_homomorphism

Z2, Z3, Z4 = cyclic(2), cyclic(3), cyclic(4)
TRIV = FgAbGroup.trivial()
SMALL = [TRIV, Z2, Z3, Z4, FgAbGroup.from_orders([2, 2])]
COEFFS = SMALL + [free(1), cyclic(6)]


def plain(g):
    return BoundedComplex.concentrated(g)


def combos(gens, rng):
    out = []
    for _ in range(3):
        acc = BiextCocycle.zero(gens[0].P, gens[0].Q, gens[0].G) if gens else None
        for b in gens:
            k = int(rng.integers(-2, 3))
            acc = BiextCocycle(acc.P, acc.Q, acc.G, acc.phi + k * b.phi, acc.psi + k * b.psi)
        if acc is not None:
            out.append(acc)
    return out


# groups -----------------------------------------------------------------------------


def test_biext1_z2_cubed_has_order_four():
    g = biext_group(Z2, Z2, Z2, 1)
    assert g.order() == 4
    assert str(g) == "Z/2 ⊕ Z/2"


def test_biext1_coprime_vanishes():
    assert biext_group(Z2, Z3, Z2, 1).is_trivial()


@pytest.mark.parametrize("p,q,g", [(Z2, Z2, Z2), (Z4, Z3, free(1)), (TRIV, Z4, Z2)])
def test_biext_minus_one_vanishes(p, q, g):
    assert biext_group(p, q, g, -1).is_trivial()


def test_biext_rejects_other_degrees_and_infinite_inputs():
    with pytest.raises(ValueError):
        biext_group(Z2, Z2, Z2, 2)
    with pytest.raises(Unsupported):
        biext_group(free(1), Z2, Z2, 1)


@settings(max_examples=25)
@given(st.sampled_from(SMALL), st.sampled_from(SMALL), st.sampled_from(COEFFS))
def test_biext_matches_derived_tensor(p, q, g):
    k = derived_tensor(plain(p), plain(q))
    for i in (0, 1):
        assert biext_group(p, q, g, i).is_isomorphic(ext_group(k, plain(g), i))


@given(st.sampled_from(SMALL), st.sampled_from(SMALL), st.sampled_from(COEFFS))
def test_biext0_is_hom_from_tensor(p, q, g):
    assert biext_group(p, q, g, 0).is_isomorphic(hom_group(tensor_groups(p, q), g).group)


# raw enumeration ----------------------------------------------------------------------


def test_brute_force_z2_cubed():
    assert brute_force_biext1(Z2, Z2, Z2) == 4


def test_brute_force_trivial_coefficients_and_trivial_p():
    assert brute_force_biext1(Z2, Z2, TRIV) == 1
    assert brute_force_biext1(TRIV, Z2, Z2) == 1
    assert brute_force_biext1(TRIV, Z3, Z3) == 1


@pytest.mark.parametrize("p,q,g", [(Z2, TRIV, Z2), (Z2, Z2, TRIV), (Z3, TRIV, Z3), (TRIV, Z2, Z4)])
def test_brute_force_matches_linear_algebra(p, q, g):
    assert brute_force_biext1(p, q, g) == biext_group(p, q, g, 1).order()


def test_brute_force_guard_reports_bound():
    with pytest.raises(Unsupported, match="bound 1000"):
        brute_force_biext1(Z2, Z2, Z2, max_candidates=1000)
    with pytest.raises(Unsupported):
        brute_force_biext1(Z2, Z2, free(1))


# cocycles -------------------------------------------------------------------------------


def test_zero_cocycle_is_valid_and_trivial():
    b = BiextCocycle.zero(Z2, Z4, Z2)
    assert b.is_valid() and b.is_trivial_class()


def test_cocycle_generators_span_biext1():
    for p, q, g in itertools.product([TRIV, Z2, Z3, Z4], [Z2, Z4], [Z2, Z4, free(1)]):
        gens = cocycle_generators(p, q, g)
        assert all(b.is_valid() for b in gens)
        assert class_subgroup_order(gens) == biext_group(p, q, g, 1).order()


def test_invalid_tables_rejected():
    b = BiextCocycle.zero(Z2, Z2, Z2)
    phi = b.phi.copy()
    phi[1, 0, 0, 0] = 1
    bad = BiextCocycle(Z2, Z2, Z2, phi, b.psi)
    assert not bad.is_valid()
    with pytest.raises(InvariantViolation):
        bad.validate()


def test_retrivialization_keeps_class():
    rng = np.random.default_rng(0)
    b = sum_biext(*cocycle_generators(Z2, Z4, Z4)[:2])
    theta = BiextTrivialization(rng.integers(-3, 4, size=(2, 4, 1)).astype(object))
    moved = b.trivialized(theta)
    assert moved.is_valid() and moved.same_class(b)


# operations ---------------------------------------------------------------------------------


def test_sum_examples():
    gens = cocycle_generators(Z2, Z2, Z2)
    zero = BiextCocycle.zero(Z2, Z2, Z2)
    for b in gens:
        s = sum_biext(b, zero)
        assert np.array_equal(s.phi, b.phi) and np.array_equal(s.psi, b.psi)
        # 2·class(B) = class(B + B), and Biext^1 is 2-torsion here
        assert sum_biext(b, b).is_trivial_class()
    b1, b2 = gens[0], gens[-1]
    s12, s21 = sum_biext(b1, b2), sum_biext(b2, b1)
    assert np.array_equal(s12.phi, s21.phi) and np.array_equal(s12.psi, s21.psi)


def test_sum_of_distinct_generators_is_nontrivial():
    gens = cocycle_generators(Z2, Z2, Z2)
    assert class_subgroup_order(gens) == 4
    nonzero = [b for b in gens if not b.is_trivial_class()]
    b1 = nonzero[0]
    b2 = next(b for b in nonzero if not b.same_class(b1))
    s = sum_biext(b1, b2)
    assert not s.is_trivial_class()
    assert not s.same_class(b1) and not s.same_class(b2)


def test_sum_refuses_mismatched_groups():
    with pytest.raises(ValueError):
        sum_biext(BiextCocycle.zero(Z2, Z2, Z2), BiextCocycle.zero(Z2, Z2, Z4))


def test_multiples_of_a_class():
    for b in cocycle_generators(Z4, Z2, Z4):
        k = class_subgroup_order([b])
        acc = b
        for _ in range(k - 2):
            acc = sum_biext(acc, b)
        if k > 1:
            assert not acc.is_trivial_class()
        assert sum_biext(acc, b).is_trivial_class() or k == 1


def test_pullback_along_identities_and_pushdown_along_zero():
    for b in cocycle_generators(Z2, Z4, Z2):
        same = pullback_biext(b, GroupMap.identity(Z2), GroupMap.identity(Z4))
        assert np.array_equal(same.phi, b.phi) and np.array_equal(same.psi, b.psi)
        down = pushdown_biext(b, GroupMap.zero(Z2, Z4))
        assert down.is_valid() and not down.phi.any() and not down.psi.any()


@settings(max_examples=8)
@given(st.integers(0, 2**32 - 1))
def test_operations_preserve_validity(seed):
    rng = np.random.default_rng(seed)
    groups = [Z2, Z4, FgAbGroup.from_orders([2, 2])]
    p, q, g = (groups[int(rng.integers(3))] for _ in range(3))
    p2, q2, g2 = (groups[int(rng.integers(3))] for _ in range(3))
    gens = cocycle_generators(p, q, g)
    u = GroupMap(p2, p, random_homomorphism(rng, p2, p))
    v = GroupMap(q2, q, random_homomorphism(rng, q2, q))
    w = GroupMap(g, g2, random_homomorphism(rng, g, g2))
    for b in combos(gens, rng):
        assert sum_biext(b, b).is_valid()
        assert pullback_biext(b, u, v).is_valid()
        assert pushdown_biext(b, w).is_valid()


def _pullback_image_order(p, q, g, u, v):
    gens = cocycle_generators(p, q, g)
    return class_subgroup_order([pullback_biext(b, u, v) for b in gens])


def _derived_image_order(u, v, g):
    cu = ChainMap(plain(u.source), plain(u.target), {0: u.matrix})
    cv = ChainMap(plain(v.source), plain(v.target), {0: v.matrix})
    return image(ext_map(derived_tensor_map(cu, cv), plain(g), 1))[0].order()


def test_pullback_along_doubling_matches_ext_functoriality():
    u = GroupMap(Z2, Z4, [[2]])
    v = GroupMap.identity(Z2)
    assert biext_group(Z4, Z2, Z2, 1).order() == 4
    assert _pullback_image_order(Z4, Z2, Z2, u, v) == _derived_image_order(u, v, Z2)


@settings(max_examples=8)
@given(st.integers(0, 2**32 - 1))
def test_pullback_matches_ext_functoriality(seed):
    rng = np.random.default_rng(seed)
    groups = [Z2, Z4, FgAbGroup.from_orders([2, 2])]
    p, q, p2, q2 = (groups[int(rng.integers(3))] for _ in range(4))
    g = [Z2, Z4][int(rng.integers(2))]
    u = GroupMap(p2, p, random_homomorphism(rng, p2, p))
    v = GroupMap(q2, q, random_homomorphism(rng, q2, q))
    assert _pullback_image_order(p, q, g, u, v) == _derived_image_order(u, v, g)


def test_pullback_refuses_wrong_target():
    with pytest.raises(ValueError):
        pullback_biext(BiextCocycle.zero(Z2, Z2, Z2), GroupMap.identity(FgAbGroup.from_orders([2, 2])), GroupMap.identity(Z2))


# zero-differential splitting ------------------------------------------------------------------


def test_split_all_in_degree_zero():
    sp = split_zero_differential(*(PicardPresentation.plain(Z2) for _ in range(3)))
    assert sp.degree0 == (Z2, Z2, Z2)
    assert all(x.is_trivial() for x in sp.degree_minus1)


def test_split_all_in_degree_minus_one():
    m = PicardPresentation.of(Z2, TRIV)
    sp = split_zero_differential(m, m, m)
    assert all(x.is_trivial() for x in sp.degree0)
    assert all(x.canonical_form() == (0, (2,)) for x in sp.degree_minus1)


def test_split_mixed():
    m = PicardPresentation.of(Z2, Z2, [[0]])
    sp = split_zero_differential(m, m, m)
    for part in sp:
        assert all(x.canonical_form() == (0, (2,)) for x in part)


def test_split_refuses_nonzero_differential():
    with pytest.raises(Unsupported):
        split_zero_differential(PicardPresentation.of(Z4, Z2, [[1]]), PicardPresentation.plain(Z2), PicardPresentation.plain(Z2))

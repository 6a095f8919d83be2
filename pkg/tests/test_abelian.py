import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from biextlab.abelian import (
    FgAbGroup,
    FiniteModel,
    GroupMap,
    InvariantViolation,
    Unsupported,
    cokernel,
    cyclic,
    direct_sum,
    elements,
    format_canonical,
    free,
    hom_group,
    image,
    kernel,
    smith_normal_form,
    solve_integer,
)

small_ints = st.integers(-6, 6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


finite_orders = st.lists(st.integers(1, 6), min_size=0, max_size=3)


def diag_of(a):
    return smith_normal_form(a).diagonal


# smith normal form -----------------------------------------------------------


def test_snf_identity():
    assert diag_of([[1, 0], [0, 1]]) == [1, 1]


def test_snf_diag_2_3():
    assert diag_of([[2, 0], [0, 3]]) == [1, 6]


def test_snf_gcd_of_minors():
    assert diag_of([[2, 4], [6, 8]]) == [2, 4]


def test_snf_is_deterministic():
    a = [[4, 6, 2], [0, 3, 9]]
    s1, s2 = smith_normal_form(a), smith_normal_form(a)
    assert np.array_equal(s1.U, s2.U) and np.array_equal(s1.V, s2.V)


def test_snf_handles_big_entries():
    a = np.array([[10**30, 3], [7, 10**25]], dtype=object)
    s = smith_normal_form(a)
    assert np.array_equal(s.U @ a @ s.V, s.D)
    assert s.diagonal[0] * s.diagonal[1] == abs(10**55 - 21)


@given(matrices())
def test_snf_factorization_and_divisibility(rows):
    a = np.array(rows, dtype=object)
    s = smith_normal_form(a, with_inverse=True)
    assert np.array_equal(s.U @ a @ s.V, s.D)
    n = a.shape[0]
    assert np.array_equal(s.U @ s.U_inv, np.eye(n, dtype=int).astype(object))
    d = s.diagonal
    assert all(x >= 0 for x in d)
    for x, y in zip(d, d[1:]):
        assert (x == 0 and y == 0) or (x != 0 and y % x == 0)


# solve_integer ---------------------------------------------------------------


def test_solve_examples():
    assert solve_integer([[2]], [4]) == [2]
    assert solve_integer([[2]], [3]) is None
    assert solve_integer([[2, 4], [6, 8]], [2, 6]) == [1, 0]


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        solve_integer([[1, 2]], [1, 2])


@given(matrices(), st.lists(small_ints, min_size=4, max_size=4))
def test_solve_finds_preimage_of_image(rows, x):
    a = np.array(rows, dtype=object)
    x = x[: a.shape[1]]
    b = [int(v) for v in a @ np.array(x, dtype=object)]
    sol = solve_integer(a, b)
    assert sol is not None
    assert [int(v) for v in a @ np.array(sol, dtype=object)] == b


# canonical form ---------------------------------------------------------------


def test_canonical_examples():
    assert FgAbGroup(2, [[2], [0]]).canonical_form() == (1, (2,))
    assert FgAbGroup(3).canonical_form() == (3, ())
    assert FgAbGroup(2, [[2, 0], [0, 3]]).canonical_form() == (0, (6,))


def test_format_canonical():
    assert format_canonical((0, ())) == "0"
    assert format_canonical((0, (2, 2))) == "Z/2 ⊕ Z/2"
    assert format_canonical((1, (6,))) == "Z ⊕ Z/6"
    assert format_canonical((6, ())) == "Z^6"


@given(finite_orders, st.randoms(use_true_random=False), st.lists(st.integers(-3, 3), min_size=9, max_size=9))
def test_canonical_form_is_invariant(orders, rnd, coeffs):
    g = FgAbGroup.from_orders(orders)
    n = g.num_generators
    perm = list(range(n))
    rnd.shuffle(perm)
    rel = g.relations[perm, :]
    extra = np.array(coeffs[: g.relations.shape[1]] or [0], dtype=object)
    if g.relations.shape[1]:
        combo = rel @ extra[: rel.shape[1]].reshape(-1, 1)
        rel = np.hstack([rel, combo])
    assert FgAbGroup(n, rel).canonical_form() == g.canonical_form()


# kernel, cokernel, image -------------------------------------------------------


def test_kernel_examples():
    z, z4 = free(1), cyclic(4)
    assert kernel(GroupMap(z, z, [[2]]))[0].is_trivial()
    assert kernel(GroupMap(z4, z4, [[2]]))[0].canonical_form() == (0, (2,))
    k, inc = kernel(GroupMap(z, cyclic(2), [[1]]))
    assert k.canonical_form() == (1, ())
    assert inc.is_injective()


def test_cokernel_examples():
    z, z6, z4 = free(1), cyclic(6), cyclic(4)
    assert cokernel(GroupMap(z, z, [[2]]))[0].canonical_form() == (0, (2,))
    assert cokernel(GroupMap.identity(z6))[0].is_trivial()
    c, proj = cokernel(GroupMap(z4, z4, [[2]]))
    assert c.canonical_form() == (0, (2,))
    assert proj.is_surjective()


def test_ill_defined_map_rejected():
    with pytest.raises(InvariantViolation):
        GroupMap(cyclic(2), cyclic(3), [[1]])


def _random_map(a, b, coeffs):
    space = hom_group(a, b)
    return space.to_map([c for c, _ in zip(coeffs, space.basis)])


@given(finite_orders, finite_orders, st.lists(st.integers(0, 5), min_size=9, max_size=9))
def test_kernel_image_orders_multiply(oa, ob, coeffs):
    a, b = FgAbGroup.from_orders(oa), FgAbGroup.from_orders(ob)
    f = _random_map(a, b, coeffs)
    k, inc = kernel(f)
    im, _ = image(f)
    assert k.order() * im.order() == a.order()
    assert f.compose(inc).is_zero()
    _, proj = cokernel(f)
    assert im.is_isomorphic(kernel(proj)[0])


# hom groups ---------------------------------------------------------------------


def test_hom_examples():
    assert hom_group(free(1), cyclic(5)).group.canonical_form() == (0, (5,))
    assert hom_group(cyclic(2), cyclic(3)).group.is_trivial()
    assert str(hom_group(cyclic(4), cyclic(6)).group) == "Z/2"


def _brute_hom_count(a, b):
    mb = FiniteModel(b)
    gens = [tuple(int(i == j) for i in range(a.num_generators)) for j in range(a.num_generators)]
    count = 0
    for images in itertools.product(range(mb.size), repeat=len(gens)):
        m = np.array([mb.coords_of(i) for i in images], dtype=object).T.reshape(b.num_generators, len(gens))
        if GroupMap(a, b, m, check=False).is_well_defined():
            count += 1
    return count


@given(
    st.lists(st.sampled_from([2, 3, 4]), max_size=2).filter(lambda o: np.prod(o or [1]) <= 16),
    st.lists(st.sampled_from([2, 3, 4]), max_size=2).filter(lambda o: np.prod(o or [1]) <= 16),
)
def test_hom_count_matches_brute_force(oa, ob):
    a, b = FgAbGroup.from_orders(oa), FgAbGroup.from_orders(ob)
    space = hom_group(a, b)
    assert space.group.order() == _brute_hom_count(a, b)
    assert all(f.is_well_defined() for f in space.basis)


def test_hom_coordinates_round_trip():
    a, b = direct_sum([cyclic(2), cyclic(4)]), cyclic(8)
    space = hom_group(a, b)
    for el in elements(space.group):
        f = space.to_map(el.coords)
        back = space.coordinates(f)
        assert space.group.is_zero([x - y for x, y in zip(back, el.coords)])


# elements -------------------------------------------------------------------------


def test_elements_examples():
    assert len(list(elements(cyclic(3)))) == 3
    assert len(list(elements(direct_sum([cyclic(2), cyclic(2)])))) == 4
    assert len(list(elements(FgAbGroup.trivial()))) == 1


def test_elements_of_infinite_group_refused():
    with pytest.raises(Unsupported):
        list(elements(free(1)))


@given(finite_orders)
def test_elements_distinct_and_deterministic(orders):
    g = FgAbGroup.from_orders(orders)
    first = [e.key() for e in elements(g)]
    assert first == [e.key() for e in elements(g)]
    assert len(set(first)) == len(first) == g.order()


def test_elements_of_non_diagonal_presentation():
    g = FgAbGroup(2, [[2, 1], [0, 3]])
    assert len({e.key() for e in elements(g)}) == g.order() == 6

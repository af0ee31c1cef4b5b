import threading
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixedvol import monomial_algebra as ma
from mixedvol.errors import InputError
from mixedvol.graded_families import (
    approximation_polytope,
    body_family,
    callback_family,
    family_from_json,
    family_product_ideal,
    homogenize,
    maximal_power_family,
    power_family,
    truncated_family,
)
from mixedvol.lattice_geometry import RationalPolytope, box, cube, lattice_points, standard_simplex
from mixedvol.monomial_algebra import MonomialIdeal

F = Fraction


def xy2():
    return MonomialIdeal(2, [(1, 0), (0, 2)])


def test_power_family_members():
    fam = power_family(ma.maximal_ideal(2))
    assert fam.ideal_at(3) == ma.mpower(2, 3)
    assert fam.ideal_at(0).is_unit
    assert power_family(xy2()).ideal_at(2).generators == [(0, 4), (1, 2), (2, 0)]
    assert maximal_power_family(3)[4] == ma.mpower(3, 4)


def test_negative_index_rejected():
    with pytest.raises(InputError):
        power_family(xy2()).ideal_at(-1)


def test_deep_index_does_not_recurse():
    fam = maximal_power_family(2)
    assert len(fam.ideal_at(400).generators) == 401


def test_truncation_of_power_family_is_itself():
    src = power_family(xy2())
    for a in (1, 2):
        t = truncated_family(src, a)
        for n in range(3 * a + 1):
            assert t.ideal_at(n) == src.ideal_at(n)


def test_truncation_example():
    # I_1 = (x), I_2 = (x, y), I_n = m for n >= 2 is graded
    def rule(n):
        return {1: MonomialIdeal(2, [(1, 0)])}.get(n, ma.maximal_ideal(2))

    src = callback_family(2, rule, 1, False)
    assert src.graded_violations(5) == []
    t = truncated_family(src, 1)
    assert t.ideal_at(1) == src.ideal_at(1)
    assert t.ideal_at(2).generators == [(2, 0)]
    t2 = truncated_family(src, 2)
    for n in range(1, 7):
        assert ma.ideal_contains(src.ideal_at(n), t2.ideal_at(n))


def test_truncation_rejects_bad_level():
    with pytest.raises(InputError):
        truncated_family(maximal_power_family(2), 0)


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=3), st.integers(1, 3))
@settings(max_examples=20)
def test_truncations_are_graded_and_nested(gens, a):
    src = power_family(MonomialIdeal(2, gens))
    t = truncated_family(src, a)
    assert t.graded_violations(5) == []
    for n in range(6):
        assert ma.ideal_contains(src.ideal_at(n), t.ideal_at(n))


def test_callback_family_spot_checks():
    # not graded: I_1 = m but I_2 = (x^3)
    bad = callback_family(2, lambda n: ma.maximal_ideal(2) if n == 1 else MonomialIdeal(2, [(3 * n, 0)]), 1, False)
    assert (1, 1) in bad.graded_violations(2)
    assert bad.degree_bound_violations(2) == [2]


def test_homogenize_auto_degree():
    assert homogenize(RationalPolytope([(1, 1)])).h == 2
    hb = homogenize(cube(2))
    assert hb.h == 2
    assert hb.lift() == RationalPolytope([(0, 0, 2), (1, 0, 1), (0, 1, 1), (1, 1, 0)])
    assert homogenize(box((F(1, 2), F(1, 2)))).h == 1


def test_homogenize_rejects_bad_degree():
    with pytest.raises(InputError):
        homogenize(cube(2), 1)
    with pytest.raises(InputError):
        homogenize(RationalPolytope([(-1, 0)]))
    with pytest.raises(InputError):
        homogenize(cube(2), 2.5)


def test_body_family_of_simplex_is_powers_of_m():
    fam = body_family(homogenize(standard_simplex(2), 1))
    for n in range(1, 5):
        assert fam.ideal_at(n) == ma.mpower(3, n)


def test_body_family_of_square():
    fam = body_family(homogenize(cube(2)))
    assert fam.ideal_at(1).generators == [(0, 0, 2), (0, 1, 1), (1, 0, 1), (1, 1, 0)]
    assert len(fam.ideal_at(3).generators) == 16
    assert fam.graded_violations(4) == []
    assert fam.degree_bound_violations(4) == []
    # x1^2 is missing, (2, 0) is not in the square
    assert not fam.mprimary_flag
    assert body_family(homogenize(standard_simplex(2, 2), 2)).mprimary_flag


def test_point_body():
    fam = body_family(homogenize(RationalPolytope([(1, 0)]), 1))
    for n in range(1, 4):
        assert fam.ideal_at(n).generators == [(n, 0, 0)]
    assert not fam.mprimary_flag


def test_approximation_polytopes():
    hb = homogenize(cube(2))
    assert approximation_polytope(hb, 1) == cube(2)
    assert approximation_polytope(hb, 2) == cube(2, 2)
    small = homogenize(box((F(1, 2), F(1, 2))))
    assert approximation_polytope(small, 1) == RationalPolytope([(0, 0)])
    assert approximation_polytope(small, 4) == cube(2, 2)


@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 2))
@settings(max_examples=15)
def test_body_family_generators_track_lattice_points(a, b, n):
    K = box((F(a, 2), F(b, 3)))
    hb = homogenize(K)
    gens = body_family(hb).ideal_at(n).generators
    assert len(gens) == len(lattice_points(K, n))
    assert all(sum(g) == n * hb.h for g in gens)


def test_family_product_ideal():
    fx = power_family(MonomialIdeal(2, [(1, 0)]))
    fy = power_family(MonomialIdeal(2, [(0, 1)]))
    assert family_product_ideal([fx, fy], (1, 2)).generators == [(1, 2)]
    assert family_product_ideal([fx, fy], (0, 0)).is_unit
    assert family_product_ideal([fx], (3,)) == fx.ideal_at(3)


def test_family_json_round_trip():
    for fam in (
        power_family(xy2()),
        maximal_power_family(2),
        truncated_family(power_family(xy2()), 2),
        body_family(homogenize(cube(2))),
    ):
        again = family_from_json(fam.to_json())
        for n in range(4):
            assert again.ideal_at(n) == fam.ideal_at(n)
    with pytest.raises(InputError):
        family_from_json({"kind": "mystery"})
    with pytest.raises(InputError):
        callback_family(2, lambda n: ma.maximal_ideal(2), 1, True).to_json()


def test_concurrent_access_is_consistent():
    fam = power_family(xy2())
    out = {}

    def work(k):
        out[k] = fam.ideal_at(6)

    threads = [threading.Thread(target=work, args=(k,)) for k in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len({v for v in out.values()}) == 1
    assert out[0] == ma.power(xy2(), 6)

import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixedvol import _linalg
from mixedvol import monomial_algebra as ma
from mixedvol.errors import InputError, NotMPrimaryError, StabilizationError
from mixedvol.graded_families import body_family, homogenize, maximal_power_family, power_family
from mixedvol.lattice_geometry import cube
from mixedvol.monomial_algebra import MonomialIdeal
from mixedvol.multiplicities import (
    HilbertSampler,
    MixedMultiplicityTable,
    family_polynomial_F,
    hilbert_T_dim,
    hilbert_T_dim_bruteforce,
    m_primary_family_multiplicities,
    mixed_multiplicities_family,
    mixed_multiplicities_ideals,
    mixed_multiplicities_ideals_detailed,
    scaling_identity_check,
    table_indices,
    primary_geometric_table,
)

F = Fraction
SQUARE_J = MonomialIdeal(3, [(0, 0, 2), (1, 0, 1), (0, 1, 1), (1, 1, 0)])
SLOW_I = MonomialIdeal(2, [(0, 8), (3, 5), (8, 0)])
SLOW_J = MonomialIdeal(2, [(3, 0)])


def binomial_fit_table(I, Js, base, width=3):
    """Oracle: solve for every coefficient of the Hilbert polynomial in the
    binomial basis on a dense grid above ``base`` and read off the top ones."""
    D, r = I.num_vars, len(Js)
    basis = [a for k in range(D) for a in itertools.product(range(k + 1), repeat=r + 1) if sum(a) == k]
    basis = sorted(set(basis))
    rows = []
    for pt in itertools.product(range(base, base + width + 1), repeat=r + 1):
        row = [math.prod(math.comb(x, a) for x, a in zip(pt, alpha)) for alpha in basis]
        rows.append(row + [hilbert_T_dim_bruteforce(I, Js, pt[0], pt[1:])])
    red, piv = _linalg.rref(rows)
    assert len(basis) not in piv, "samples are not polynomial above the base"
    coef = {basis[p]: red[i][-1] for i, p in enumerate(piv)}
    return {(a[0], tuple(a[1:])): coef[a] for a in basis if sum(a) == D - 1}


def test_table_indices():
    assert table_indices(3, 1) == [(2, (0,)), (1, (1,)), (0, (2,))]
    assert len(table_indices(3, 2)) == 6


def test_table_validation_and_serialisation():
    t = MixedMultiplicityTable(2, 1, {(1, (0,)): F(1), (0, (1,)): F(3, 2)})
    assert MixedMultiplicityTable.from_json(t.to_json()) == t
    assert t.to_csv().splitlines()[0].startswith("d0")
    with pytest.raises(InputError):
        MixedMultiplicityTable(2, 1, {(1, (0,)): F(1)})


def test_T_examples():
    for d in (1, 2, 3):
        for n0 in range(4):
            assert hilbert_T_dim(ma.maximal_ideal(d), [], n0, ()) == math.comb(n0 + d - 1, d - 1)
    xy = MonomialIdeal(2, [(1, 0), (0, 1)])
    for k in range(5):
        assert hilbert_T_dim(ma.maximal_ideal(2), [xy], 0, (k,)) == k + 1


def test_T_needs_primary_I():
    with pytest.raises(NotMPrimaryError):
        hilbert_T_dim(MonomialIdeal(2, [(1, 0)]), [], 1, ())
    with pytest.raises(InputError):
        hilbert_T_dim(ma.maximal_ideal(2), [ma.zero_ideal(2)], 1, (1,))


@st.composite
def primary_setups(draw):
    d = draw(st.integers(2, 3))
    pure = [draw(st.integers(1, 3)) for _ in range(d)]
    extra = draw(st.lists(st.tuples(*[st.integers(0, 2)] * d), max_size=2))
    I = MonomialIdeal(d, [tuple(p if j == i else 0 for j in range(d)) for i, p in enumerate(pure)] + extra)
    r = draw(st.integers(0, 2))
    Js = [MonomialIdeal(d, draw(st.lists(st.tuples(*[st.integers(0, 2)] * d), min_size=1, max_size=3))) for _ in range(r)]
    return I, Js


@given(primary_setups(), st.data())
@settings(max_examples=25)
def test_T_matches_bruteforce(setup, data):
    I, Js = setup
    n0 = data.draw(st.integers(0, 2))
    n = tuple(data.draw(st.integers(0, 2)) for _ in Js)
    assert hilbert_T_dim(I, Js, n0, n) == hilbert_T_dim_bruteforce(I, Js, n0, n)


@given(st.integers(2, 3), st.integers(1, 3), st.data())
@settings(max_examples=20)
def test_fast_and_generic_paths_agree(d, q, data):
    Js = [MonomialIdeal(d, data.draw(st.lists(st.tuples(*[st.integers(0, 2)] * d), min_size=1, max_size=3)))]
    fast = HilbertSampler(ma.mpower(d, q), Js)
    slow = HilbertSampler(ma.mpower(d, q), Js)
    slow.q = None
    assert fast.q == q
    for n0, k in itertools.product(range(3), range(3)):
        assert fast.T(n0, (k,)) == slow.T(n0, (k,))


def test_multiplicity_of_maximal_ideal():
    for d in (1, 2, 3, 4):
        t = mixed_multiplicities_ideals(ma.maximal_ideal(d), [])
        assert t.entries == {(d - 1, ()): 1}


def test_linear_ideal_table():
    t = mixed_multiplicities_ideals(ma.maximal_ideal(2), [MonomialIdeal(2, [(1, 0), (0, 1)])])
    assert t.entries == {(1, (0,)): 1, (0, (1,)): 1}


def test_square_body_table():
    t = mixed_multiplicities_ideals(ma.maximal_ideal(3), [SQUARE_J])
    assert t.entries == {(2, (0,)): 1, (1, (1,)): 2, (0, (2,)): 2}
    assert mixed_multiplicities_ideals(ma.maximal_ideal(3), [SQUARE_J]) == t


@pytest.mark.parametrize(
    "I, Js",
    [
        (ma.maximal_ideal(2), [MonomialIdeal(2, [(1, 0), (0, 2)])]),
        (MonomialIdeal(2, [(2, 0), (1, 1), (0, 3)]), [MonomialIdeal(2, [(1, 1)])]),
        (ma.maximal_ideal(3), [SQUARE_J]),
        (MonomialIdeal(3, [(1, 0, 0), (0, 2, 0), (0, 0, 2)]), [ma.maximal_ideal(3), MonomialIdeal(3, [(1, 0, 0), (0, 1, 0)])]),
    ],
)
def test_finite_differences_match_binomial_fit(I, Js):
    res = mixed_multiplicities_ideals_detailed(I, Js)
    assert res.table.entries == binomial_fit_table(I, Js, res.base)


def test_sum_rule_for_maximal_ideal():
    for d, r in ((2, 1), (2, 2), (3, 2)):
        m = ma.maximal_ideal(d)
        t = mixed_multiplicities_ideals(m, [m] * r)
        assert set(t.entries.values()) == {1}


def test_symmetry_under_permuting_Js():
    I = ma.maximal_ideal(3)
    A = SQUARE_J
    B = MonomialIdeal(3, [(1, 0, 0), (0, 1, 0), (0, 0, 3)])
    t1 = mixed_multiplicities_ideals(I, [A, B])
    t2 = mixed_multiplicities_ideals(I, [B, A])
    for (d0, (a, b)), v in t1.entries.items():
        assert t2[(d0, (b, a))] == v


def test_entries_are_nonnegative_integers():
    t = mixed_multiplicities_ideals(MonomialIdeal(2, [(3, 0), (1, 1), (0, 2)]), [MonomialIdeal(2, [(2, 0), (0, 1)])])
    assert t.is_nonnegative()
    assert all(v.denominator == 1 for v in t.entries.values())


def test_power_families_give_the_ideal_table():
    # the same multiplicities via the semigroup polynomial of the power families
    I = ma.maximal_ideal(2)
    J = MonomialIdeal(2, [(1, 0), (0, 2)])
    grid = [(a, b) for a in range(1, 4) for b in range(0, 3)]
    _, fam_table = family_polynomial_F(power_family(I), [power_family(J)], grid)
    assert fam_table == mixed_multiplicities_ideals(I, [J])


@pytest.mark.parametrize("p", [1, 2, 3])
def test_scaling_identity(p):
    xy = MonomialIdeal(2, [(1, 0), (0, 1)])
    assert scaling_identity_check([xy], p).ok
    assert scaling_identity_check([SQUARE_J], p).ok


def test_stabilization_failure_is_reported():
    with pytest.raises(StabilizationError):
        mixed_multiplicities_ideals_detailed(SLOW_I, [SLOW_J], max_base=4)
    res = mixed_multiplicities_ideals_detailed(SLOW_I, [SLOW_J], max_base=16)
    assert res.base == 8
    assert res.table.entries == binomial_fit_table(SLOW_I, [SLOW_J], 8)


def test_max_base_from_environment(monkeypatch):
    monkeypatch.setenv("MIXEDVOL_MAX_BASE", "4")
    with pytest.raises(StabilizationError):
        mixed_multiplicities_ideals(SLOW_I, [SLOW_J])


def test_power_family_stabilizes_immediately():
    M = maximal_power_family(2)
    res = mixed_multiplicities_family(M, [power_family(MonomialIdeal(2, [(1, 0), (0, 1)]))], (1, 2, 4))
    assert res.stabilized_from == 1
    assert all(t == res.estimate for t in res.normalized)


def test_lattice_body_family_stabilizes():
    M = maximal_power_family(3)
    sq = body_family(homogenize(cube(2)))
    res = mixed_multiplicities_family(M, [sq], (1, 2, 3), threads=2)
    assert res.stabilized_from == 1
    assert res.estimate.entries == {(2, (0,)): 1, (1, (1,)): 2, (0, (2,)): 2}


def test_family_needs_primary_I():
    with pytest.raises(NotMPrimaryError):
        mixed_multiplicities_family(power_family(MonomialIdeal(2, [(1, 0)])), [], (1,))
    with pytest.raises(InputError):
        mixed_multiplicities_family(maximal_power_family(2), [], (2, 1))


def test_primary_families_single_and_double():
    M = maximal_power_family(2)
    one = m_primary_family_multiplicities([M])
    assert one.route_fit == {(2,): 1}
    two = m_primary_family_multiplicities([M, M])
    assert two.route_fit == {(2, 0): 1, (1, 1): 1, (0, 2): 1}
    assert two.agree


def test_primary_families_routes_and_c_independence():
    M = maximal_power_family(2)
    M2 = power_family(ma.mpower(2, 2))
    res = m_primary_family_multiplicities([M, M2], p_schedule=(1, 2))
    expected = {(2, 0): 1, (1, 1): 2, (0, 2): 4}
    assert res.route_fit == expected
    assert res.bridge_estimate() == expected
    assert res.geometric == expected
    J1 = [ma.maximal_ideal(2), ma.mpower(2, 2)]
    assert primary_geometric_table(J1, res.c) == primary_geometric_table(J1, res.c + 1)


def test_family_polynomial_has_no_pure_n_terms():
    M = maximal_power_family(2)
    J = power_family(MonomialIdeal(2, [(1, 0), (0, 2)]))
    grid = [(a, b, c) for a in range(1, 3) for b in range(0, 3) for c in range(0, 2)]
    poly, table = family_polynomial_F(M, [M, J], grid)
    assert all(v == 0 for k, v in poly.items() if k[0] == 0)
    assert table.is_nonnegative()

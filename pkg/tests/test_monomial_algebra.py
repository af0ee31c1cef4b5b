import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixedvol import kernels
from mixedvol import monomial_algebra as ma
from mixedvol.errors import InputError
from mixedvol.monomial_algebra import MonomialIdeal


def divides(g, m):
    return all(a <= b for a, b in zip(g, m))


@st.composite
def ideals(draw, num_vars=None, max_exp=4, max_gens=5):
    d = draw(st.integers(1, 3)) if num_vars is None else num_vars
    gens = draw(st.lists(st.tuples(*[st.integers(0, max_exp)] * d), min_size=1, max_size=max_gens))
    return MonomialIdeal(d, gens)


@st.composite
def ideal_pairs(draw):
    d = draw(st.integers(1, 3))
    return draw(ideals(d)), draw(ideals(d))


def test_minimal_generators():
    I = MonomialIdeal(2, [(2, 0), (1, 1), (0, 3), (3, 3), (2, 1)])
    assert I.generators == [(0, 3), (1, 1), (2, 0)]


def test_membership():
    I = MonomialIdeal(3, [(1, 0, 0), (0, 2, 0)])
    assert (1, 5, 5) in I
    assert (0, 1, 9) not in I
    assert ma.contains_monomial(I, (0, 2, 0))


def test_power_of_maximal_ideal():
    m2 = ma.power(ma.maximal_ideal(2), 2)
    assert m2.generators == [(0, 2), (1, 1), (2, 0)]
    assert ma.mpower(2, 2) == m2
    assert ma.power(ma.maximal_ideal(3), 0).is_unit


def test_sum_and_product():
    a = MonomialIdeal(2, [(1, 0)])
    b = MonomialIdeal(2, [(0, 1)])
    assert ma.ideal_sum(a, b) == ma.maximal_ideal(2)
    assert (a * b).generators == [(1, 1)]


def test_quotient_dim_example():
    # R / (x^2, xy, y^3) has basis 1, x, y, y^2
    I = MonomialIdeal(2, [(2, 0), (1, 1), (0, 3)])
    assert ma.quotient_dim(ma.unit_ideal(2), I, 10) == 4
    assert ma.quotient_dim(ma.maximal_ideal(2), I, 10) == 3


def test_quotient_dim_checks_inclusion_and_bound():
    with pytest.raises(InputError):
        ma.quotient_dim(MonomialIdeal(2, [(1, 1)]), ma.maximal_ideal(2), 3)
    with pytest.raises(InputError):
        ma.quotient_dim(ma.unit_ideal(2), ma.maximal_ideal(2), -1)


def test_primary_helpers():
    I = MonomialIdeal(2, [(2, 0), (1, 1), (0, 3)])
    assert ma.pure_powers(I) == [2, 3]
    assert ma.is_m_primary(I)
    assert ma.smallest_mpower_inside(I) == 3
    assert not ma.is_m_primary(MonomialIdeal(2, [(1, 0)]))
    assert ma.max_gen_degree(I) == 3
    assert ma.min_gen_degree(I) == 2


def test_bad_input():
    with pytest.raises(InputError):
        MonomialIdeal(2, [(1, -1)])
    with pytest.raises(InputError):
        MonomialIdeal(2, [(1, 0, 0)])


def test_json_round_trip():
    I = MonomialIdeal(3, [(1, 2, 0), (0, 0, 4)])
    assert MonomialIdeal.from_json(I.to_json()) == I


@given(ideals())
def test_generators_form_an_antichain(I):
    gs = I.generators
    for g, h in itertools.permutations(gs, 2):
        assert not divides(g, h)


@given(ideal_pairs())
def test_product_generators_by_brute_force(pair):
    a, b = pair
    prod = ma.product(a, b)
    expected = MonomialIdeal(a.num_vars, [tuple(x + y for x, y in zip(g, h)) for g in a.generators for h in b.generators])
    assert prod == expected
    assert ma.ideal_contains(a, prod) and ma.ideal_contains(b, prod)


@given(ideal_pairs())
def test_sum_contains_both(pair):
    a, b = pair
    s = ma.ideal_sum(a, b)
    assert ma.ideal_contains(s, a) and ma.ideal_contains(s, b)


@given(ideals(max_exp=3, max_gens=4), st.integers(0, 4))
@settings(max_examples=25)
def test_power_matches_repeated_product(I, n):
    acc = ma.unit_ideal(I.num_vars)
    for _ in range(n):
        acc = ma.product(acc, I)
    assert ma.power(I, n) == acc


@given(ideal_pairs(), st.integers(0, 9))
@settings(max_examples=30)
def test_quotient_dim_matches_enumeration(pair, bound):
    a, b = pair
    b = ma.product(a, b)
    assert ma.quotient_dim(a, b, bound) == ma.quotient_dim_bruteforce(a, b, bound)


@given(ideals(), st.integers(0, 8))
def test_degree_counts_match_enumeration(I, bound):
    counts = ma.degree_counts(I, bound)
    for t in range(bound + 1):
        brute = sum(1 for m in ma.monomials_of_degree(I.num_vars, t) if ma.contains_monomial(I, m))
        assert counts[t] == brute


# -- kernel backends -------------------------------------------------------

BACKENDS = [kernels.get_backend(name) for name in kernels.available_backends()]


def brute_minimal(points):
    pts = {tuple(p) for p in points}
    keep = [p for p in pts if not any(q != p and divides(q, p) for q in pts)]
    return sorted(keep)


def brute_depths(gens, lo, hi, max_depth):
    d = len(gens[0])
    out = np.zeros((hi - lo + 1, max_depth + 1), dtype=np.int64)
    for t in range(lo, hi + 1):
        for m in ma.monomials_of_degree(d, t):
            divs = [sum(g) for g in gens if divides(g, m)]
            if divs:
                out[t - lo, min(t - min(divs), max_depth)] += 1
    return out


def test_compiled_backend_is_selected_when_built():
    if "cython" in kernels.available_backends():
        assert kernels.BACKEND in ("cython", "python")
    assert kernels.get_backend("python").BACKEND == "python"
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


point_lists = st.integers(1, 3).flatmap(
    lambda d: st.lists(st.tuples(*[st.integers(0, 5)] * d), min_size=1, max_size=12)
)


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.BACKEND)
@given(pts=point_lists)
def test_minimalize_backends(backend, pts):
    got = [tuple(int(x) for x in row) for row in backend.minimalize(np.array(pts, dtype=np.int64))]
    assert sorted(got) == brute_minimal(pts)


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.BACKEND)
@given(data=st.data())
def test_product_backends(backend, data):
    d = data.draw(st.integers(1, 3))
    row = st.tuples(*[st.integers(0, 4)] * d)
    a = brute_minimal(data.draw(st.lists(row, min_size=1, max_size=6)))
    b = brute_minimal(data.draw(st.lists(row, min_size=1, max_size=6)))
    got = backend.product(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64))
    expected = brute_minimal([tuple(x + y for x, y in zip(g, h)) for g in a for h in b])
    assert sorted(tuple(int(x) for x in r) for r in got) == expected


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.BACKEND)
@given(data=st.data())
def test_depth_histogram_backends(backend, data):
    d = data.draw(st.integers(1, 3))
    gens = brute_minimal(data.draw(st.lists(st.tuples(*[st.integers(0, 4)] * d), min_size=1, max_size=5)))
    lo = data.draw(st.integers(0, 4))
    hi = data.draw(st.integers(lo, 9))
    k = data.draw(st.integers(0, 4))
    got = backend.depth_histogram(np.array(gens, dtype=np.int64), lo, hi, k)
    assert np.array_equal(got, brute_depths(gens, lo, hi, k))


def test_homogeneous_product_path_agrees():
    py = kernels.get_backend("python")
    a = ma.monomials_of_degree(3, 3)
    b = ma.monomials_of_degree(3, 2)[::2]
    expected = brute_minimal([tuple(x + y for x, y in zip(g, h)) for g in a for h in b])
    for backend in BACKENDS:
        got = sorted(tuple(int(x) for x in r) for r in backend.product(a, b))
        assert got == expected
    assert np.array_equal(np.sort(py.product(a, b), axis=0), np.sort(np.array(expected), axis=0))


def test_environment_forces_python_fallback():
    import os
    import subprocess
    import sys

    env = dict(os.environ, MIXEDVOL_KERNELS="python")
    out = subprocess.run(
        [sys.executable, "-c", "from mixedvol import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"

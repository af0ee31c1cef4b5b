"""Monomial ideals in a standard graded polynomial ring k[x_1, ..., x_d].

An ideal is stored as its minimal generating set, an antichain of exponent
vectors sorted lexicographically. The empty set is the zero ideal and the
single zero vector is the unit ideal.
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping, Sequence

import numpy as np

from mixedvol import kernels
from mixedvol.errors import InputError, NotMPrimaryError

ExponentVector = tuple[int, ...]


def as_exponent(m: Iterable, num_vars: int | None = None) -> ExponentVector:
    out = []
    for x in m:
        if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
            raise InputError(f"exponent {x!r} is not an integer")
        if x < 0:
            raise InputError(f"negative exponent {x}")
        out.append(int(x))
    if num_vars is not None and len(out) != num_vars:
        raise InputError(f"exponent vector of length {len(out)}, expected {num_vars}")
    return tuple(out)


class MonomialIdeal:
    """A monomial ideal given by generators; minimalized on construction."""

    __slots__ = ("num_vars", "_gens")

    def __init__(self, num_vars: int, generators: Iterable[Iterable] = ()):
        if num_vars < 1:
            raise InputError("need at least one variable")
        self.num_vars = num_vars
        gens = [as_exponent(g, num_vars) for g in generators]
        if gens:
            arr = kernels.minimalize(np.array(gens, dtype=np.int64))
        else:
            arr = np.empty((0, num_vars), dtype=np.int64)
        arr.setflags(write=False)
        self._gens = arr

    @classmethod
    def _from_minimal(cls, num_vars: int, arr: np.ndarray) -> "MonomialIdeal":
        obj = cls.__new__(cls)
        obj.num_vars = num_vars
        arr = np.ascontiguousarray(arr, dtype=np.int64).reshape(-1, num_vars)
        arr.setflags(write=False)
        obj._gens = arr
        return obj

    @property
    def generators(self) -> list[ExponentVector]:
        return [tuple(int(x) for x in row) for row in self._gens]

    @property
    def gens_array(self) -> np.ndarray:
        return self._gens

    @property
    def is_zero(self) -> bool:
        return len(self._gens) == 0

    @property
    def is_unit(self) -> bool:
        return len(self._gens) == 1 and not self._gens[0].any()

    def __len__(self) -> int:
        return len(self._gens)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MonomialIdeal):
            return NotImplemented
        return self.num_vars == other.num_vars and np.array_equal(self._gens, other._gens)

    def __hash__(self) -> int:
        return hash((self.num_vars, self._gens.tobytes()))

    def __repr__(self) -> str:
        return f"MonomialIdeal({self.num_vars}, {self.generators})"

    def __mul__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return product(self, other)

    def __pow__(self, n: int) -> "MonomialIdeal":
        return power(self, n)

    def __contains__(self, m: Iterable) -> bool:
        return contains_monomial(self, m)

    def issubset(self, other: "MonomialIdeal") -> bool:
        return ideal_contains(other, self)

    def to_json(self) -> dict:
        return {"vars": self.num_vars, "gens": [list(g) for g in self.generators]}

    @classmethod
    def from_json(cls, payload: Mapping) -> "MonomialIdeal":
        try:
            d = payload["vars"]
            gens = payload["gens"]
        except (KeyError, TypeError) as exc:
            raise InputError("ideal JSON needs 'vars' and 'gens'") from exc
        if isinstance(d, bool) or not isinstance(d, int):
            raise InputError("'vars' must be an integer")
        if not isinstance(gens, list):
            raise InputError("'gens' must be a list")
        return cls(d, gens)


# --------------------------------------------------------------------------
# constructors


def zero_ideal(d: int) -> MonomialIdeal:
    return MonomialIdeal(d)


def unit_ideal(d: int) -> MonomialIdeal:
    return MonomialIdeal._from_minimal(d, np.zeros((1, d), dtype=np.int64))


def maximal_ideal(d: int) -> MonomialIdeal:
    return MonomialIdeal._from_minimal(d, np.eye(d, dtype=np.int64)[::-1])


def monomials_of_degree(d: int, n: int) -> np.ndarray:
    """All exponent vectors of total degree n in d variables, lex descending."""
    if d == 1:
        return np.array([[n]], dtype=np.int64)
    rows = []
    for first in range(n, -1, -1):
        rest = monomials_of_degree(d - 1, n - first)
        rows.append(np.hstack([np.full((len(rest), 1), first, dtype=np.int64), rest]))
    return np.vstack(rows)


def mpower(d: int, n: int) -> MonomialIdeal:
    if n < 0:
        raise InputError("negative power")
    if n == 0:
        return unit_ideal(d)
    arr = monomials_of_degree(d, n)
    return MonomialIdeal._from_minimal(d, arr[np.lexsort(arr.T[::-1])])


# --------------------------------------------------------------------------
# arithmetic


def _check_vars(a: MonomialIdeal, b: MonomialIdeal) -> None:
    if a.num_vars != b.num_vars:
        raise InputError(f"variable count mismatch {a.num_vars} vs {b.num_vars}")


def product(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    _check_vars(a, b)
    if a.is_unit:
        return b
    if b.is_unit:
        return a
    return MonomialIdeal._from_minimal(a.num_vars, kernels.product(a.gens_array, b.gens_array))


def power(a: MonomialIdeal, n: int) -> MonomialIdeal:
    if n < 0:
        raise InputError("negative power")
    result = unit_ideal(a.num_vars)
    base = a
    while n:
        if n & 1:
            result = product(result, base)
        n >>= 1
        if n:
            base = product(base, base)
    return result


def ideal_sum(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    _check_vars(a, b)
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    both = np.vstack([a.gens_array, b.gens_array])
    return MonomialIdeal._from_minimal(a.num_vars, kernels.minimalize(both))


def contains_monomial(a: MonomialIdeal, m: Iterable) -> bool:
    m = np.asarray(as_exponent(m, a.num_vars), dtype=np.int64)
    if a.is_zero:
        return False
    return bool((a.gens_array <= m).all(axis=1).any())


def ideal_contains(big: MonomialIdeal, small: MonomialIdeal) -> bool:
    """Whether ``small`` is a subset of ``big``."""
    _check_vars(big, small)
    if small.is_zero:
        return True
    if big.is_zero:
        return False
    g = big.gens_array
    return bool(all((g <= m).all(axis=1).any() for m in small.gens_array))


def max_gen_degree(a: MonomialIdeal) -> int:
    if a.is_zero:
        raise InputError("the zero ideal has no generators")
    return int(a.gens_array.sum(axis=1).max())


def min_gen_degree(a: MonomialIdeal) -> int:
    if a.is_zero:
        raise InputError("the zero ideal has no generators")
    return int(a.gens_array.sum(axis=1).min())


def pure_powers(a: MonomialIdeal) -> list[int | None]:
    """Smallest a_k with x_k^{a_k} in the ideal, or None when there is none."""
    out: list[int | None] = []
    g = a.gens_array
    for k in range(a.num_vars):
        others = np.delete(g, k, axis=1)
        pure = g[~others.any(axis=1), k] if len(g) else np.empty(0, dtype=np.int64)
        out.append(int(pure.min()) if len(pure) else None)
    return out


def is_m_primary(a: MonomialIdeal) -> bool:
    return all(p is not None for p in pure_powers(a))


def smallest_mpower_inside(a: MonomialIdeal) -> int:
    """Least c with m^c contained in the ideal."""
    pp = pure_powers(a)
    if any(p is None for p in pp):
        raise NotMPrimaryError(f"ideal is not primary to the maximal ideal: {a.generators}")
    if a.is_unit:
        return 0
    d = a.num_vars
    lo = min_gen_degree(a)
    # m^c is inside once c exceeds sum(a_k - 1)
    hi = sum(pp) - d + 1
    for c in range(lo, hi + 1):
        if ideal_contains(a, mpower(d, c)):
            return c
    return hi


def degree_counts(a: MonomialIdeal, bound: int) -> np.ndarray:
    """Number of monomials of each degree 0..bound lying in the ideal."""
    if a.is_zero:
        return np.zeros(bound + 1, dtype=np.int64)
    if a.is_unit:
        return np.array([math.comb(t + a.num_vars - 1, a.num_vars - 1) for t in range(bound + 1)], dtype=np.int64)
    return kernels.depth_histogram(a.gens_array, 0, bound, 0)[:, 0]


def quotient_dim(a: MonomialIdeal, b: MonomialIdeal, degree_bound: int) -> int:
    """Monomials in ``a`` but not ``b`` of degree at most ``degree_bound``."""
    _check_vars(a, b)
    if degree_bound < 0:
        raise InputError("negative degree bound")
    if not ideal_contains(a, b):
        raise InputError("quotient_dim needs B contained in A")
    return int(degree_counts(a, degree_bound).sum() - degree_counts(b, degree_bound).sum())


def quotient_dim_bruteforce(a: MonomialIdeal, b: MonomialIdeal, degree_bound: int) -> int:
    """Enumerate every monomial up to the bound. Slow; used as a test oracle."""
    _check_vars(a, b)
    total = 0
    for t in range(degree_bound + 1):
        for m in monomials_of_degree(a.num_vars, t):
            if contains_monomial(a, m) and not contains_monomial(b, m):
                total += 1
    return total


def product_all(ideals: Sequence[MonomialIdeal], num_vars: int) -> MonomialIdeal:
    acc = unit_ideal(num_vars)
    for I in ideals:
        acc = product(acc, I)
    return acc

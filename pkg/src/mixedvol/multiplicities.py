"""Mixed multiplicities of monomial ideals and of graded families.

For an ideal I primary to the maximal ideal and ideals J_1, ..., J_r in a
ring with D variables, the function

    P(n0, n) = dim I^n0 J^n / I^(n0+1) J^n

is eventually a polynomial of total degree D - 1. Its top-order finite
differences are the mixed multiplicities e(d0, d) with d0 + |d| = D - 1.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from mixedvol import kernels
from mixedvol import monomial_algebra as ma
from mixedvol.errors import InputError, NotMPrimaryError, StabilizationError
from mixedvol.graded_families import GradedFamily
from mixedvol.lattice_geometry import compositions, format_rational, mixed_volume_table
from mixedvol.monomial_algebra import MonomialIdeal
from mixedvol import okounkov

Index = tuple[int, tuple[int, ...]]

DEFAULT_MAX_BASE = 64


def max_base_default() -> int:
    env = os.environ.get("MIXEDVOL_MAX_BASE")
    if env:
        try:
            value = int(env)
        except ValueError as exc:
            raise InputError(f"MIXEDVOL_MAX_BASE={env!r} is not an integer") from exc
        if value < 1:
            raise InputError("MIXEDVOL_MAX_BASE must be positive")
        return value
    return DEFAULT_MAX_BASE


# --------------------------------------------------------------------------
# tables


def table_indices(dim: int, r: int) -> list[Index]:
    return [(c[0], tuple(c[1:])) for c in compositions(dim - 1, r + 1)]


@dataclass(frozen=True)
class MixedMultiplicityTable:
    """Entries e(d0, d) for every d0 + |d| = dim - 1, where dim is the ring dimension."""

    dim: int
    r: int
    entries: Mapping[Index, Fraction]

    def __post_init__(self) -> None:
        want = set(table_indices(self.dim, self.r))
        have = set(self.entries)
        if want != have:
            raise InputError(f"table indices do not match dim={self.dim}, r={self.r}")
        object.__setattr__(
            self, "entries", {k: Fraction(self.entries[k]) for k in table_indices(self.dim, self.r)}
        )

    def __getitem__(self, key: Index) -> Fraction:
        d0, dvec = key
        return self.entries[(d0, tuple(dvec))]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MixedMultiplicityTable):
            return NotImplemented
        return self.dim == other.dim and self.r == other.r and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.dim, self.r, tuple(self.entries.items())))

    def map(self, fn) -> "MixedMultiplicityTable":
        return MixedMultiplicityTable(self.dim, self.r, {k: fn(k, v) for k, v in self.entries.items()})

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.entries.values())

    def to_json(self) -> dict:
        return {
            "d": self.dim,
            "r": self.r,
            "entries": [
                {"d0": d0, "dvec": list(dvec), "value": format_rational(v)}
                for (d0, dvec), v in self.entries.items()
            ],
        }

    @classmethod
    def from_json(cls, payload: Mapping) -> "MixedMultiplicityTable":
        try:
            entries = {
                (int(e["d0"]), tuple(int(x) for x in e["dvec"])): Fraction(e["value"])
                for e in payload["entries"]
            }
            return cls(int(payload["d"]), int(payload["r"]), entries)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError("malformed table JSON") from exc

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["d0"] + [f"d{i + 1}" for i in range(self.r)] + ["value", "decimal"])
        for (d0, dvec), v in self.entries.items():
            w.writerow([d0, *dvec, format_rational(v), f"{float(v):.10g}"])
        return buf.getvalue()


# --------------------------------------------------------------------------
# Hilbert function of T


class HilbertSampler:
    """Exact values of dim [T]_(n0, n) with memoized ideal products.

    When I is a power m^q of the maximal ideal, membership in I^n0 J^n is read
    off the depth histogram of J^n, so all n0 come from a single pass.
    """

    def __init__(self, I: MonomialIdeal, Js: Sequence[MonomialIdeal]):
        if not ma.is_m_primary(I):
            raise NotMPrimaryError(f"I is not primary to the maximal ideal: {I.generators}")
        self.d = I.num_vars
        for J in Js:
            if J.num_vars != self.d:
                raise InputError("all ideals must live in the same ring")
            if J.is_zero:
                raise InputError("J ideals must be nonzero")
        self.I = I
        self.Js = list(Js)
        self.r = len(Js)
        self.cprime = ma.smallest_mpower_inside(I)
        q = ma.min_gen_degree(I)
        self.q = q if I == ma.mpower(self.d, q) else None
        self._jpow: list[dict[int, MonomialIdeal]] = [{0: ma.unit_ideal(self.d)} for _ in Js]
        self._ipow: dict[int, MonomialIdeal] = {0: ma.unit_ideal(self.d)}
        self._jprod: dict[tuple[int, ...], MonomialIdeal] = {}
        self._depth: dict[tuple[int, ...], tuple[int, np.ndarray]] = {}
        self._values: dict[tuple[int, tuple[int, ...]], int] = {}

    def _power(self, table: dict[int, MonomialIdeal], base: MonomialIdeal, n: int) -> MonomialIdeal:
        k = max(i for i in table if i <= n)
        acc = table[k]
        for j in range(k + 1, n + 1):
            acc = ma.product(acc, base)
            table[j] = acc
        return acc

    def J_product(self, n: Sequence[int]) -> MonomialIdeal:
        key = tuple(n)
        if key not in self._jprod:
            acc = ma.unit_ideal(self.d)
            for i, k in enumerate(key):
                acc = ma.product(acc, self._power(self._jpow[i], self.Js[i], k))
            self._jprod[key] = acc
        return self._jprod[key]

    def _depth_counts(self, n: tuple[int, ...], n0: int) -> np.ndarray:
        cached = self._depth.get(n)
        if cached is not None and cached[0] >= n0:
            return cached[1]
        cap = max(n0, 2 * cached[0] if cached else 0, 8)
        J = self.J_product(n)
        q = self.q
        top = q * (cap + 1)
        hist = kernels.depth_histogram(J.gens_array, 0, ma.max_gen_degree(J) + top - 1, top)
        col = hist.sum(axis=0)
        self._depth[n] = (cap, col)
        return col

    def T(self, n0: int, n: Sequence[int]) -> int:
        n = tuple(int(x) for x in n)
        if len(n) != self.r or n0 < 0 or any(x < 0 for x in n):
            raise InputError("bad multidegree")
        key = (n0, n)
        if key in self._values:
            return self._values[key]
        if self.q is not None:
            col = self._depth_counts(n, n0)
            value = int(col[self.q * n0 : self.q * (n0 + 1)].sum())
        else:
            A = ma.product(self._power(self._ipow, self.I, n0), self.J_product(n))
            B = ma.product(self.I, A)
            bound = ma.max_gen_degree(A) + self.cprime - 1
            value = int(ma.degree_counts(A, bound).sum() - ma.degree_counts(B, bound).sum())
        self._values[key] = value
        return value


def hilbert_T_dim(I: MonomialIdeal, Js: Sequence[MonomialIdeal], n0: int, n: Sequence[int]) -> int:
    """dim I^n0 J^n / I^(n0+1) J^n, counted exactly."""
    return HilbertSampler(I, Js).T(n0, n)


def hilbert_T_dim_bruteforce(I: MonomialIdeal, Js: Sequence[MonomialIdeal], n0: int, n: Sequence[int]) -> int:
    """Independent oracle: explicit products and exhaustive enumeration."""
    A = ma.product_all([ma.power(I, n0)] + [ma.power(J, k) for J, k in zip(Js, n)], I.num_vars)
    B = ma.product(I, A)
    bound = ma.max_gen_degree(A) + ma.smallest_mpower_inside(I)
    return ma.quotient_dim_bruteforce(A, B, bound)


def _finite_difference(sampler: HilbertSampler, base: Sequence[int], order: Sequence[int]) -> int:
    total = 0
    top = sum(order)
    for k in itertools.product(*(range(a + 1) for a in order)):
        coeff = math.prod(math.comb(a, b) for a, b in zip(order, k))
        sign = -1 if (top - sum(k)) % 2 else 1
        pt = [b + x for b, x in zip(base, k)]
        total += sign * coeff * sampler.T(pt[0], pt[1:])
    return total


@dataclass(frozen=True)
class IdealTableResult:
    table: MixedMultiplicityTable
    base: int


def mixed_multiplicities_ideals_detailed(
    I: MonomialIdeal,
    Js: Sequence[MonomialIdeal],
    max_base: int | None = None,
    start_base: int | None = None,
    sampler: HilbertSampler | None = None,
) -> IdealTableResult:
    sampler = sampler or HilbertSampler(I, Js)
    D, r = sampler.d, sampler.r
    cap = max_base_default() if max_base is None else max_base
    B = start_base if start_base is not None else D
    B = max(min(B, cap), 0)
    idx = table_indices(D, r)
    while True:
        entries = {}
        stable = True
        for d0, dvec in idx:
            order = (d0,) + dvec
            vals = {_finite_difference(sampler, [B + s] * (r + 1), order) for s in (0, 1, 2)}
            if len(vals) != 1:
                stable = False
                break
            entries[(d0, dvec)] = Fraction(vals.pop())
        if stable:
            return IdealTableResult(MixedMultiplicityTable(D, r, entries), B)
        nxt = max(1, 2 * B)
        if nxt > cap:
            raise StabilizationError(f"finite differences did not stabilize up to base {B} (cap {cap})")
        B = nxt


def mixed_multiplicities_ideals(
    I: MonomialIdeal, Js: Sequence[MonomialIdeal], max_base: int | None = None
) -> MixedMultiplicityTable:
    """All mixed multiplicities e(d0, d) of J_1..J_r with respect to I."""
    return mixed_multiplicities_ideals_detailed(I, Js, max_base=max_base).table


@dataclass(frozen=True)
class ScalingResult:
    ok: bool
    p: int
    lhs: MixedMultiplicityTable
    rhs: MixedMultiplicityTable
    witness: Index | None = None


def scaling_identity_check(
    Js: Sequence[MonomialIdeal], p: int, I: MonomialIdeal | None = None, max_base: int | None = None
) -> ScalingResult:
    """Check e(I^p | J) = p^(d0+1) e(I | J) entrywise (I defaults to m)."""
    if p < 1:
        raise InputError("p must be positive")
    if not Js and I is None:
        raise InputError("need the ring: pass I or at least one J")
    d = I.num_vars if I is not None else Js[0].num_vars
    I = ma.maximal_ideal(d) if I is None else I
    big = mixed_multiplicities_ideals(ma.power(I, p), Js, max_base)
    small = mixed_multiplicities_ideals(I, Js, max_base)
    scaled = small.map(lambda k, v: v * p ** (k[0] + 1))
    witness = next((k for k in big.entries if big.entries[k] != scaled.entries[k]), None)
    return ScalingResult(witness is None, p, big, scaled, witness)


# --------------------------------------------------------------------------
# families


def _map_ordered(fn, items: Sequence, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class FamilyMultiplicityResult:
    p_schedule: tuple[int, ...]
    raw: tuple[MixedMultiplicityTable, ...]
    normalized: tuple[MixedMultiplicityTable, ...]
    estimate: MixedMultiplicityTable
    stabilized_from: int | None


def _stabilized_from(schedule: Sequence[int], tables: Sequence[MixedMultiplicityTable]) -> int | None:
    # earliest p from which all later tables agree, when at least two agree
    if len(tables) < 2 or tables[-1] != tables[-2]:
        return None
    k = len(tables) - 1
    while k > 0 and tables[k - 1] == tables[-1]:
        k -= 1
    return schedule[k]


def _check_p_schedule(p_schedule: Sequence[int]) -> list[int]:
    sched = [int(p) for p in p_schedule]
    if not sched or any(p < 1 for p in sched) or any(b <= a for a, b in zip(sched, sched[1:])):
        raise InputError("p schedule must be a non-empty increasing list of positive integers")
    return sched


def mixed_multiplicities_family(
    I_fam: GradedFamily,
    J_fams: Sequence[GradedFamily],
    p_schedule: Sequence[int],
    max_base: int | None = None,
    threads: int = 1,
) -> FamilyMultiplicityResult:
    """e(I_p | J(1)_p, ...) / p^D along the schedule (D = number of variables)."""
    if not I_fam.mprimary_flag and not ma.is_m_primary(I_fam.ideal_at(1)):
        raise NotMPrimaryError("the I family must be primary to the maximal ideal")
    sched = _check_p_schedule(p_schedule)
    D = I_fam.num_vars

    def one(p: int) -> MixedMultiplicityTable:
        return mixed_multiplicities_ideals(I_fam.ideal_at(p), [f.ideal_at(p) for f in J_fams], max_base)

    raw = _map_ordered(one, sched, threads)
    norm = [t.map(lambda k, v, p=p: v / p**D) for t, p in zip(raw, sched)]
    return FamilyMultiplicityResult(tuple(sched), tuple(raw), tuple(norm), norm[-1], _stabilized_from(sched, norm))


def family_polynomial_F(
    I_fam: GradedFamily,
    J_fams: Sequence[GradedFamily],
    grid: Sequence[tuple[int, ...]],
    c: int | None = None,
) -> tuple[dict[tuple[int, ...], Fraction], MixedMultiplicityTable]:
    """Fit F(n0, n) exactly on ``grid`` (points (n0, n1, ..., nr)).

    Returns the monomial coefficients (exponent on n0 first) and the table of
    e(d0, d) read from the n0^(d0+1) n^d coefficients.
    """
    D = I_fam.num_vars
    r = len(J_fams)
    c = okounkov.compute_c(I_fam, J_fams) if c is None else c
    samples = {
        tuple(pt): okounkov.F_exact(I_fam, J_fams, pt[0], tuple(pt[1:]), c) for pt in grid
    }
    poly = okounkov.fit_homogeneous(samples, r + 1, D)
    entries = {}
    for d0, dvec in table_indices(D, r):
        coef = poly[(d0 + 1,) + dvec]
        entries[(d0, dvec)] = coef * math.factorial(d0 + 1) * math.prod(math.factorial(x) for x in dvec)
    return poly, MixedMultiplicityTable(D, r, entries)


@dataclass
class MPrimaryResult:
    """Two routes to the mixed multiplicities e_d (|d| = D) of primary families."""

    dim: int
    r: int
    c: int
    route_fit: dict[tuple[int, ...], Fraction] | None
    fit_error: str | None
    route_bridge: dict[tuple[int, ...], list[Fraction]]
    p_schedule: tuple[int, ...]
    geometric: dict[tuple[int, ...], Fraction] | None = None
    agree: bool | None = field(default=None)

    def bridge_estimate(self) -> dict[tuple[int, ...], Fraction]:
        return {k: v[-1] for k, v in self.route_bridge.items()}


def primary_geometric_table(J_ideals: Sequence[MonomialIdeal], c: int) -> dict[tuple[int, ...], Fraction]:
    """e_d = c^D - MV(Delta_d) from the exact bodies of power families."""
    D = J_ideals[0].num_vars
    bodies = [okounkov.power_family_body(J, c) for J in J_ideals]
    mv = mixed_volume_table(bodies)
    return {k: Fraction(c**D) - v for k, v in mv.items()}


def m_primary_family_multiplicities(
    J_fams: Sequence[GradedFamily],
    p_schedule: Sequence[int] = (1, 2),
    grid_max: int | None = None,
    c: int | None = None,
    max_base: int | None = None,
) -> MPrimaryResult:
    """Route (i): fit G(n) = lim dim R/J_{mn} / m^D on the grid {1..grid_max}^r.
    Route (ii): e_d equals e(0, d - e_i) of the family J(i) against all J, for
    any slot i with d_i >= 1; estimated as a normalized p-sequence."""
    if not J_fams:
        raise InputError("need at least one family")
    D = J_fams[0].num_vars
    r = len(J_fams)
    for f in J_fams:
        if f.num_vars != D:
            raise InputError("families live in different rings")
        if not ma.is_m_primary(f.ideal_at(1)):
            raise NotMPrimaryError("every family must be primary to the maximal ideal")
    c = okounkov.compute_c_mprimary(J_fams) if c is None else c
    sched = _check_p_schedule(p_schedule)
    gm = grid_max if grid_max is not None else D + 1
    monos = compositions(D, r)

    route_fit = None
    fit_error = None
    try:
        samples = {
            n: okounkov.G_exact_mprimary(J_fams, n, c) for n in itertools.product(range(1, gm + 1), repeat=r)
        }
        poly = okounkov.fit_homogeneous(samples, r, D)
        route_fit = {k: poly[k] * math.prod(math.factorial(x) for x in k) for k in monos}
    except StabilizationError as exc:
        fit_error = str(exc)

    tables: dict[tuple[int, int], MixedMultiplicityTable] = {}
    bridge: dict[tuple[int, ...], list[Fraction]] = {}
    for dvec in monos:
        i = next(j for j, x in enumerate(dvec) if x > 0)
        shifted = tuple(x - (1 if j == i else 0) for j, x in enumerate(dvec))
        seq = []
        for p in sched:
            if (i, p) not in tables:
                tables[(i, p)] = mixed_multiplicities_ideals(
                    J_fams[i].ideal_at(p), [f.ideal_at(p) for f in J_fams], max_base
                )
            seq.append(tables[(i, p)][(0, shifted)] / p**D)
        bridge[dvec] = seq

    result = MPrimaryResult(D, r, c, route_fit, fit_error, bridge, tuple(sched))
    if all(f.spec is not None and f.spec.get("kind") == "power" for f in J_fams):
        result.geometric = primary_geometric_table([f.ideal_at(1) for f in J_fams], c)
    if route_fit is not None:
        result.agree = route_fit == result.bridge_estimate()
    return result

"""Semigroups of monomials, level counts and Newton-Okounkov volumes.

For graded families I, J(1), ..., J(r) and (n0, n) the semigroup Gamma has
level set

    [Gamma]_m = { e : x^e in J_{mn},            |e| <= c m (n0 + |n|) }

and the hatted variant uses I_{m n0} J_{mn} instead. The difference of the two
level counts is dim J_{mn} / I_{m n0} J_{mn}.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from mixedvol import _linalg
from mixedvol import monomial_algebra as ma
from mixedvol.errors import InputError, NotMPrimaryError, StabilizationError
from mixedvol.graded_families import GradedFamily, family_product_ideal
from mixedvol.lattice_geometry import RationalPolytope, compositions
from mixedvol.monomial_algebra import MonomialIdeal


class Variant(enum.Enum):
    PLAIN = "plain"
    HAT = "hat"


def _beta_max(J_families: Sequence[GradedFamily]) -> int:
    return max((f.linear_gen_bound for f in J_families), default=0)


def compute_c(I_family: GradedFamily, J_families: Sequence[GradedFamily]) -> int:
    """Degree constant max(beta + 1, c') for the pair (I, J)."""
    I1 = I_family.ideal_at(1)
    if not ma.is_m_primary(I1):
        raise NotMPrimaryError("the I family must be primary to the maximal ideal")
    return max(_beta_max(J_families) + 1, ma.smallest_mpower_inside(I1))


def compute_c_mprimary(J_families: Sequence[GradedFamily]) -> int:
    """Least c >= 2 with m^(c-1) inside every J(i)_1."""
    c = 2
    for fam in J_families:
        J1 = fam.ideal_at(1)
        if not ma.is_m_primary(J1):
            raise NotMPrimaryError("every family must be primary to the maximal ideal")
        c = max(c, ma.smallest_mpower_inside(J1) + 1)
    return c


@dataclass(eq=False)
class GammaSpec:
    """One of the semigroups above, fixed by its families, indices and c.

    ``I_family`` may be None for the purely primary setting, where only the
    PLAIN variant with n0 = 0 makes sense.
    """

    variant: Variant
    I_family: GradedFamily | None
    J_families: tuple[GradedFamily, ...]
    n0: int
    n: tuple[int, ...]
    c: int
    num_vars: int = field(init=False)
    _cache: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self) -> None:
        self.J_families = tuple(self.J_families)
        self.n = tuple(int(x) for x in self.n)
        if len(self.n) != len(self.J_families):
            raise InputError("need one index per J family")
        if self.n0 < 0 or any(x < 0 for x in self.n):
            raise InputError("indices must be non-negative")
        fams = list(self.J_families) + ([self.I_family] if self.I_family is not None else [])
        if not fams:
            raise InputError("need at least one family to fix the ring")
        self.num_vars = fams[0].num_vars
        if any(f.num_vars != self.num_vars for f in fams):
            raise InputError("families live in different rings")
        if self.c < 1:
            raise InputError("c must be positive")
        if self.I_family is None:
            if self.variant is Variant.HAT or self.n0:
                raise InputError("HAT semigroups and n0 > 0 need an I family")
        else:
            if self.c <= _beta_max(self.J_families):
                raise InputError(f"c = {self.c} must exceed every J family's beta")
            I1 = self.I_family.ideal_at(1)
            if not ma.is_m_primary(I1):
                raise NotMPrimaryError("the I family must be primary to the maximal ideal")
            if self.c < ma.smallest_mpower_inside(I1):
                raise InputError(f"c = {self.c} is below the least power of m inside I_1")

    def with_variant(self, variant: Variant) -> "GammaSpec":
        return GammaSpec(variant, self.I_family, self.J_families, self.n0, self.n, self.c)

    def bound(self, m: int) -> int:
        return self.c * m * (self.n0 + sum(self.n))

    def ideal(self, m: int) -> MonomialIdeal:
        key = (self.variant, m)
        if key not in self._cache:
            if self.J_families:
                J = family_product_ideal(self.J_families, [m * k for k in self.n])
            else:
                J = ma.unit_ideal(self.num_vars)
            if self.variant is Variant.HAT:
                J = ma.product(self.I_family.ideal_at(m * self.n0), J)
            self._cache[key] = J
        return self._cache[key]


def level_count(spec: GammaSpec, m: int, extra_degree: int = 0) -> int:
    """#[Gamma]_m, optionally with the degree bound raised by ``extra_degree``."""
    if m < 1:
        raise InputError("level must be positive")
    return int(ma.degree_counts(spec.ideal(m), spec.bound(m) + extra_degree).sum())


def _ideal_mask(ideal: MonomialIdeal, bound: int) -> np.ndarray:
    d = ideal.num_vars
    up = np.zeros((bound + 1,) * d, dtype=bool)
    g = ideal.gens_array
    g = g[g.sum(axis=1) <= bound]
    if len(g):
        up[tuple(g.T)] = True
        for ax in range(d):
            np.logical_or.accumulate(up, axis=ax, out=up)
    return up


def level_set(spec: GammaSpec, m: int) -> np.ndarray:
    """The exponent vectors of [Gamma]_m (level coordinate dropped), sorted."""
    b = spec.bound(m)
    mask = _ideal_mask(spec.ideal(m), b)
    pts = np.argwhere(mask)
    return pts[pts.sum(axis=1) <= b].astype(np.int64)


# --------------------------------------------------------------------------
# volume estimates


@dataclass(frozen=True)
class VolumeEstimate:
    levels: tuple[int, ...]
    counts: tuple[int, ...]
    normalized: tuple[Fraction, ...]
    extrapolated: Fraction
    non_monotone: bool


def _extrapolate(levels: Sequence[int], values: Sequence[Fraction]) -> Fraction:
    # values ~ L + a/m, eliminate a from the last two samples
    if len(values) < 2:
        return values[-1]
    m1, m2 = levels[-2], levels[-1]
    v1, v2 = values[-2], values[-1]
    return (m2 * v2 - m1 * v1) / (m2 - m1)


def _check_schedule(schedule: Sequence[int]) -> list[int]:
    sched = [int(x) for x in schedule]
    if not sched:
        raise InputError("empty schedule")
    if any(x < 1 for x in sched) or any(b <= a for a, b in zip(sched, sched[1:])):
        raise InputError("schedule must be strictly increasing positive integers")
    return sched


def _non_monotone(values: Sequence[Fraction]) -> bool:
    if len(values) < 3:
        return False
    steps = [b - a for a, b in zip(values, values[1:])]
    return any(s > 0 for s in steps) and any(s < 0 for s in steps)


def estimate_okounkov_volume(spec: GammaSpec, schedule: Sequence[int]) -> VolumeEstimate:
    """#[Gamma]_m / m^d along the schedule plus a 1/m extrapolation.

    No convergence rate is known, so the estimate is a report, not a bound.
    """
    sched = _check_schedule(schedule)
    d = spec.num_vars
    counts = [level_count(spec, m) for m in sched]
    norm = [Fraction(k, m**d) for k, m in zip(counts, sched)]
    return VolumeEstimate(tuple(sched), tuple(counts), tuple(norm), _extrapolate(sched, norm), _non_monotone(norm))


@dataclass(frozen=True)
class LevelCountRow:
    m: int
    count_plain: int
    count_hat: int
    normalized_diff: Fraction


def level_count_series(
    I_family: GradedFamily,
    J_families: Sequence[GradedFamily],
    n0: int,
    n: Sequence[int],
    schedule: Sequence[int],
    c: int | None = None,
) -> list[LevelCountRow]:
    sched = _check_schedule(schedule)
    c = compute_c(I_family, J_families) if c is None else c
    plain = GammaSpec(Variant.PLAIN, I_family, tuple(J_families), n0, tuple(n), c)
    hat = plain.with_variant(Variant.HAT)
    d = plain.num_vars
    rows = []
    for m in sched:
        a, b = level_count(plain, m), level_count(hat, m)
        rows.append(LevelCountRow(m, a, b, Fraction(a - b, m**d)))
    return rows


def F_estimate(
    I_family: GradedFamily,
    J_families: Sequence[GradedFamily],
    n0: int,
    n: Sequence[int],
    schedule: Sequence[int],
    c: int | None = None,
) -> list[Fraction]:
    """dim(J_{mn} / I_{m n0} J_{mn}) / m^d along the schedule."""
    return [row.normalized_diff for row in level_count_series(I_family, J_families, n0, n, schedule, c)]


# --------------------------------------------------------------------------
# exact leading coefficients


def leading_coefficient(
    f: Callable[[int], int],
    degree: int,
    start: int = 1,
    extra: int = 2,
    max_start: int = 64,
) -> tuple[Fraction, int]:
    """Leading coefficient of a function that is eventually a polynomial.

    Samples ``degree + 1 + extra`` consecutive integers from ``start`` and
    accepts once every difference of order ``degree + 1`` vanishes there;
    otherwise doubles ``start``. Returns the coefficient and the start used.
    """
    s = max(1, start)
    while True:
        vals = [f(m) for m in range(s, s + degree + 1 + extra)]
        diffs = list(vals)
        for _ in range(degree):
            diffs = [b - a for a, b in zip(diffs, diffs[1:])]
        if len(set(diffs)) == 1:
            return Fraction(diffs[0], math.factorial(degree)), s
        if s >= max_start:
            raise StabilizationError(f"no polynomial of degree {degree} fits from m = {s}")
        s *= 2


def F_exact(
    I_family: GradedFamily,
    J_families: Sequence[GradedFamily],
    n0: int,
    n: Sequence[int],
    c: int | None = None,
    max_start: int = 64,
) -> Fraction:
    """Limit of dim(J_{mn} / I_{m n0} J_{mn}) / m^d when the counts are
    eventually polynomial in m (power families and other Noetherian inputs)."""
    c = compute_c(I_family, J_families) if c is None else c
    plain = GammaSpec(Variant.PLAIN, I_family, tuple(J_families), n0, tuple(n), c)
    hat = plain.with_variant(Variant.HAT)
    value, _ = leading_coefficient(
        lambda m: level_count(plain, m) - level_count(hat, m), plain.num_vars, max_start=max_start
    )
    return value


def colength_via_gamma(J_families: Sequence[GradedFamily], n: Sequence[int], m: int, c: int) -> int:
    """dim R / J_{mn} as C(cm|n| + d, d) - #[Gamma_n]_m."""
    spec = GammaSpec(Variant.PLAIN, None, tuple(J_families), 0, tuple(n), c)
    d = spec.num_vars
    return math.comb(spec.bound(m) + d, d) - level_count(spec, m)


def G_estimate_mprimary(
    J_families: Sequence[GradedFamily], n: Sequence[int], schedule: Sequence[int], c: int | None = None
) -> list[Fraction]:
    sched = _check_schedule(schedule)
    c = compute_c_mprimary(J_families) if c is None else c
    d = J_families[0].num_vars
    return [Fraction(colength_via_gamma(J_families, n, m, c), m**d) for m in sched]


def G_exact_mprimary(
    J_families: Sequence[GradedFamily], n: Sequence[int], c: int | None = None, max_start: int = 64
) -> Fraction:
    c = compute_c_mprimary(J_families) if c is None else c
    d = J_families[0].num_vars
    value, _ = leading_coefficient(lambda m: colength_via_gamma(J_families, n, m, c), d, max_start=max_start)
    return value


def fit_homogeneous(
    samples: Mapping[tuple[int, ...], Fraction], num_vars: int, degree: int
) -> dict[tuple[int, ...], Fraction]:
    """Exact homogeneous polynomial through the samples.

    Uses a maximal independent subset of the samples to solve, then demands
    that every remaining sample is reproduced.
    """
    monos = compositions(degree, num_vars)
    pts = sorted(samples)
    rows: list[list[Fraction]] = []
    chosen: list[tuple[int, ...]] = []
    for p in pts:
        row = [Fraction(math.prod(x**e for x, e in zip(p, mono))) for mono in monos]
        if _linalg.rank(rows + [row]) > len(rows):
            rows.append(row)
            chosen.append(p)
        if len(rows) == len(monos):
            break
    if len(rows) < len(monos):
        raise InputError("sample grid does not determine a homogeneous polynomial")
    coeffs = _linalg.solve(rows, [Fraction(samples[p]) for p in chosen])
    poly = dict(zip(monos, coeffs))
    for p in pts:
        val = sum(c * math.prod(x**e for x, e in zip(p, mono)) for mono, c in poly.items())
        if val != samples[p]:
            raise StabilizationError(f"samples are not a homogeneous polynomial of degree {degree} (at {p})")
    return poly


# --------------------------------------------------------------------------
# exact bodies for power families


def power_family_body(J: MonomialIdeal, c: int) -> RationalPolytope:
    """Newton-Okounkov slice of the powers of J below degree c:
    the Newton polyhedron of J cut by the simplex |x| <= c."""
    if J.is_zero:
        raise InputError("zero ideal")
    d = J.num_vars
    pts = []
    for g in J.generators:
        slack = c - sum(g)
        if slack < 0:
            raise InputError("c is below a generator degree")
        pts.append(g)
        for j in range(d):
            pts.append(tuple(x + (slack if k == j else 0) for k, x in enumerate(g)))
    return RationalPolytope(pts)


# --------------------------------------------------------------------------
# levelwise decomposition


def _sumset(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if len(a) == 0 or len(b) == 0:
        return np.empty((0, a.shape[1]), dtype=np.int64)
    if len(a) < len(b):
        a, b = b, a
    shape = tuple(int(x) for x in a.max(axis=0) + b.max(axis=0) + 1)
    mask = np.zeros(shape, dtype=bool)
    for row in b:
        mask[tuple((a + row).T)] = True
    return np.argwhere(mask).astype(np.int64)


@dataclass(frozen=True)
class DecompositionResult:
    ok: bool
    per_level: tuple[tuple[int, str, bool], ...]
    witness: dict | None = None


def levelwise_decomposition_check(
    I_family: GradedFamily,
    J_families: Sequence[GradedFamily],
    n0: int,
    n: Sequence[int],
    m_max: int,
    c: int | None = None,
) -> DecompositionResult:
    """Compare each level set with the sum of its one-family factors.

    The n0 part carries I (or the unit ideal for PLAIN); each J factor uses a
    single family at index n_i with I at index 0, so its hatted version is
    the plain one.
    """
    J_families = tuple(J_families)
    n = tuple(n)
    c = compute_c(I_family, J_families) if c is None else c
    r = len(J_families)
    per_level = []
    witness = None
    for variant in (Variant.PLAIN, Variant.HAT):
        whole = GammaSpec(variant, I_family, J_families, n0, n, c)
        base = GammaSpec(variant, I_family, J_families, n0, (0,) * r, c)
        factors = [
            GammaSpec(Variant.PLAIN, I_family, J_families, 0, tuple(k if j == i else 0 for j in range(r)), c)
            for i, k in enumerate(n)
        ]
        for m in range(1, m_max + 1):
            lhs = level_set(whole, m)
            rhs = level_set(base, m)
            for f in factors:
                rhs = _sumset(rhs, level_set(f, m))
            ok = lhs.shape == rhs.shape and np.array_equal(lhs, rhs)
            per_level.append((m, variant.value, bool(ok)))
            if not ok and witness is None:
                a = {tuple(int(x) for x in p) for p in lhs}
                b = {tuple(int(x) for x in p) for p in rhs}
                diff = sorted(a ^ b)
                witness = {
                    "m": m,
                    "variant": variant.value,
                    "point": list(diff[0]),
                    "in_whole": diff[0] in a,
                }
    return DecompositionResult(witness is None, tuple(per_level), witness)

"""End-to-end comparison of mixed volumes of bodies with mixed multiplicities.

Bodies K_1..K_r in the non-negative orthant of R^d are paired with the
standard simplex K_0. Each K_i is homogenized into a graded family J(i) in
d + 1 variables, and for each p the normalized multiplicities

    e(m | J(1)_p, ...) / p^|d|      and      e(m^p | J(1)_p, ...) / p^(d+1)

are compared with MV_d(K_0 [d0 copies], K_1 [d_1 copies], ...).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from mixedvol import monomial_algebra as ma
from mixedvol.errors import InputError
from mixedvol.graded_families import body_family, homogenize
from mixedvol.lattice_geometry import RationalPolytope, format_rational, mixed_volume_table, standard_simplex
from mixedvol.multiplicities import (
    HilbertSampler,
    MixedMultiplicityTable,
    _check_p_schedule,
    mixed_multiplicities_ideals_detailed,
)

ROUTES = ("m", "mp")


@dataclass(frozen=True)
class EntryReport:
    index: tuple[int, tuple[int, ...]]
    geometric: Fraction
    sequence: tuple[Fraction, ...]
    abs_dev: Fraction
    rel_dev: Fraction | None
    monotone: bool
    passed: bool


@dataclass(frozen=True)
class VerificationReport:
    bodies: tuple[RationalPolytope, ...]
    dim: int
    h: tuple[int, ...]
    lattice: bool
    tolerance: Fraction
    p_schedule: tuple[int, ...]
    geometric: MixedMultiplicityTable
    algebraic: dict[str, tuple[MixedMultiplicityTable, ...]]
    entries: dict[str, tuple[EntryReport, ...]]
    routes_agree: bool
    passed: bool

    @property
    def slow_convergence(self) -> bool:
        return not self.lattice and not self.passed

    def to_json(self) -> dict:
        fr = format_rational
        return {
            "input": {
                "d": self.dim,
                "r": len(self.bodies),
                "bodies": [K.to_json() for K in self.bodies],
                "h": list(self.h),
                "lattice": self.lattice,
            },
            "p_schedule": list(self.p_schedule),
            "tolerance": fr(self.tolerance),
            "geometric": self.geometric.to_json(),
            "algebraic": {
                route: [{"p": p, "table": t.to_json()} for p, t in zip(self.p_schedule, tables)]
                for route, tables in self.algebraic.items()
            },
            "entries": {
                route: [
                    {
                        "d0": e.index[0],
                        "dvec": list(e.index[1]),
                        "geometric": fr(e.geometric),
                        "sequence": [fr(x) for x in e.sequence],
                        "abs_dev": fr(e.abs_dev),
                        "rel_dev": None if e.rel_dev is None else fr(e.rel_dev),
                        "monotone": e.monotone,
                        "pass": e.passed,
                    }
                    for e in entries
                ]
                for route, entries in self.entries.items()
            },
            "routes_agree": self.routes_agree,
            "slow_convergence": self.slow_convergence,
            "pass": self.passed,
        }


def geometric_table(bodies: Sequence[RationalPolytope]) -> MixedMultiplicityTable:
    """MV_d of the multisets (d0 copies of the simplex, d_i copies of K_i)."""
    d = bodies[0].dim
    mv = mixed_volume_table([standard_simplex(d)] + list(bodies))
    return MixedMultiplicityTable(d + 1, len(bodies), {(k[0], tuple(k[1:])): v for k, v in mv.items()})


def _algebraic_tables(J_ideals, p: int, routes: Sequence[str], max_base):
    d1 = J_ideals[0].num_vars
    out = {}
    if "m" in routes:
        t = mixed_multiplicities_ideals_detailed(ma.maximal_ideal(d1), J_ideals, max_base).table
        out["m"] = t.map(lambda k, v: v / p ** sum(k[1]))
    if "mp" in routes:
        t = mixed_multiplicities_ideals_detailed(ma.mpower(d1, p), J_ideals, max_base).table
        out["mp"] = t.map(lambda k, v: v / p**d1)
    return out


def _is_monotone(devs: Sequence[Fraction]) -> bool:
    return all(b <= a for a, b in zip(devs, devs[1:]))


def verify_theorem_c(
    bodies: Sequence[RationalPolytope],
    p_schedule: Sequence[int] = (1, 2, 4, 8, 16),
    tolerance=Fraction(1, 20),
    h="auto",
    routes: Sequence[str] = ROUTES,
    max_base: int | None = None,
    threads: int = 1,
) -> VerificationReport:
    if not bodies:
        raise InputError("need at least one body")
    dims = {K.dim for K in bodies}
    if len(dims) != 1:
        raise InputError("bodies live in different dimensions")
    routes = tuple(routes)
    if not routes or any(r not in ROUTES for r in routes):
        raise InputError(f"routes must be drawn from {ROUTES}")
    tol = Fraction(tolerance)
    if tol < 0:
        raise InputError("tolerance must be non-negative")
    sched = _check_p_schedule(p_schedule)
    hbs = [homogenize(K, h) for K in bodies]
    fams = [body_family(hb) for hb in hbs]
    for p in sched:
        for i, f in enumerate(fams):
            if f.ideal_at(p).is_zero:
                raise InputError(f"body {i + 1} has no lattice points at level p = {p}")
    geo = geometric_table(bodies)
    lattice = all(K.is_lattice() for K in bodies)

    def one(p: int):
        return _algebraic_tables([f.ideal_at(p) for f in fams], p, routes, max_base)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_p = list(pool.map(one, sched))
    else:
        per_p = [one(p) for p in sched]
    algebraic = {route: tuple(t[route] for t in per_p) for route in routes}

    entries: dict[str, tuple[EntryReport, ...]] = {}
    passed = True
    for route, tables in algebraic.items():
        rows = []
        for key, g in geo.entries.items():
            seq = tuple(t.entries[key] for t in tables)
            devs = [abs(x - g) for x in seq]
            abs_dev = devs[-1]
            rel = abs_dev / g if g != 0 else None
            if lattice:
                ok = all(x == g for x in seq)
            elif g == 0:
                ok = abs_dev == 0
            else:
                ok = abs_dev <= tol * g
            rows.append(EntryReport(key, g, seq, abs_dev, rel, _is_monotone(devs), ok))
            passed &= ok
        entries[route] = tuple(rows)
    routes_agree = all(algebraic[routes[0]] == algebraic[r] for r in routes)
    return VerificationReport(
        tuple(bodies), bodies[0].dim, tuple(hb.h for hb in hbs), lattice, tol, tuple(sched),
        geo, algebraic, entries, routes_agree, passed and routes_agree,
    )

"""Exact convex geometry over the rationals.

Polytopes are stored by their vertex set (V-representation). The facet
description is derived on demand with an integer double-description pass, so
every predicate and volume below is exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from mixedvol import _linalg
from mixedvol.errors import InputError

Vector = tuple[Fraction, ...]


def as_vector(coords: Iterable) -> Vector:
    """Coerce ints, Fractions and "p/q" strings to an exact rational vector."""
    out = []
    for x in coords:
        if isinstance(x, float):
            raise InputError(f"floating point coordinate {x!r}; use 'p/q' strings")
        if isinstance(x, bool):
            raise InputError("boolean coordinate")
        try:
            out.append(Fraction(x))
        except (TypeError, ValueError) as exc:
            raise InputError(f"not a rational: {x!r}") from exc
    return tuple(out)


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# --------------------------------------------------------------------------
# hull machinery


@dataclass(frozen=True)
class _HullData:
    affine_dim: int
    base: Vector
    pivots: tuple[int, ...]
    # w . (x - base) == 0 cuts out the affine hull
    equations: tuple[Vector, ...]
    # (a, b) meaning a . x[pivots] + b >= 0, integer entries
    facets: tuple[tuple[tuple[int, ...], int], ...]
    # vertex indices lying on each facet
    facet_vertices: tuple[frozenset, ...]


def _double_description(gens: list[tuple[int, ...]]) -> list[tuple[tuple[int, ...], int]]:
    """Extreme rays of {y : g . y >= 0 for all g in gens} with their zero sets.

    ``gens`` must span the whole space so the cone is pointed. Zero sets are
    bitmasks over generator indices.
    """
    dim = len(gens[0])
    _, _, basis = _linalg.int_echelon(gens, limit=dim)
    if len(basis) < dim:
        raise ValueError("generators do not span")
    rows = [gens[j] for j in basis]

    rays: list[tuple[tuple[int, ...], int]] = []
    all_bits = sum(1 << j for j in basis)
    for i in range(dim):
        e = [0] * dim
        e[i] = 1
        y = _linalg.solve(rows, e)
        rays.append((_linalg.primitive(y), all_bits & ~(1 << basis[i])))

    in_basis = set(basis)
    rest = [j for j in range(len(gens)) if j not in in_basis]
    # far-out generators first so most of the rest are dismissed cheaply
    n = len(gens)
    centre = [sum(g[k] for g in gens) / n for k in range(dim - 1)]
    rest.sort(key=lambda j: -sum((gens[j][k] - centre[k]) ** 2 for k in range(dim - 1)))

    for j in rest:
        g = gens[j]
        bit = 1 << j
        pos, zero, neg = [], [], []
        for ray in rays:
            s = sum(a * b for a, b in zip(g, ray[0]))
            if s > 0:
                pos.append((ray, s))
            elif s < 0:
                neg.append((ray, s))
            else:
                zero.append(ray)
        if not neg:
            rays = [r for r, _ in pos] + [(r, z | bit) for r, z in zero]
            continue
        new = []
        for (rp, zp), sp in pos:
            for (rn, zn), sn in neg:
                common = zp & zn
                if common.bit_count() < dim - 2:
                    continue
                adjacent = True
                for other, zo in rays:
                    if other is rp or other is rn:
                        continue
                    if common & ~zo == 0:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                y = [sp * b - sn * a for a, b in zip(rp, rn)]
                new.append((_linalg.primitive(y), common | bit))
        rays = [r for r, _ in pos] + [(r, z | bit) for r, z in zero] + new
    return rays


def _compute_hull(points: list[Vector]) -> tuple[list[Vector], _HullData]:
    pts = sorted(set(points))
    d = len(pts[0])
    base = pts[0]
    # integer coordinates after clearing all denominators
    scale = math.lcm(*(x.denominator for p in pts for x in p))
    ipts = [tuple(int(x * scale) for x in p) for p in pts]
    ib = ipts[0]
    diffs = [[a - b for a, b in zip(p, ib)] for p in ipts[1:]]
    basis, pivots, _ = _linalg.int_echelon(diffs, limit=d)
    k = len(pivots)
    if k == d:
        equations: tuple[Vector, ...] = ()
    else:
        equations = tuple(tuple(w) for w in _linalg.nullspace(basis, d)) if basis else tuple(
            tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)
        )
    if k == 0:
        return [base], _HullData(0, base, (), equations, (), ())

    pivots = sorted(pivots)
    gens = [tuple(q[i] for i in pivots) + (1,) for q in ipts]
    rays = _double_description(gens)

    full = (1 << len(pts)) - 1
    keep = []
    for j in range(len(pts)):
        meet = full
        for _, z in rays:
            if z >> j & 1:
                meet &= z
        if meet == 1 << j:
            keep.append(j)
    index = {j: i for i, j in enumerate(keep)}
    facets = []
    for r, _ in rays:
        # undo the coordinate scaling: a . (scale x) + b >= 0
        row = _linalg.primitive([x * scale for x in r[:k]] + [r[k]])
        facets.append((row[:k], row[k]))
    facet_vertices = tuple(
        frozenset(index[j] for j in keep if z >> j & 1) for _, z in rays
    )
    verts = [pts[j] for j in keep]
    return verts, _HullData(k, base, tuple(pivots), equations, tuple(facets), facet_vertices)


class RationalPolytope:
    """Convex hull of finitely many rational points in Q^d.

    The stored ``vertices`` are exactly the vertices of the hull, sorted, so two
    polytopes compare equal iff they are the same set.
    """

    def __init__(self, points: Iterable[Iterable], dim: int | None = None):
        pts = [as_vector(p) for p in points]
        if not pts:
            raise InputError("polytope needs at least one point")
        dims = {len(p) for p in pts}
        if len(dims) != 1:
            raise InputError(f"mixed point dimensions {sorted(dims)}")
        d = dims.pop()
        if dim is not None and dim != d:
            raise InputError(f"declared dim {dim} but points have dimension {d}")
        if d == 0:
            raise InputError("ambient dimension must be positive")
        verts, hull = _compute_hull(pts)
        self.dim = d
        self.vertices: tuple[Vector, ...] = tuple(verts)
        self._hull = hull

    # -- basic protocol ----------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalPolytope):
            return NotImplemented
        return self.dim == other.dim and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash((self.dim, self.vertices))

    def __repr__(self) -> str:
        vs = ", ".join("(" + ", ".join(format_rational(x) for x in v) + ")" for v in self.vertices)
        return f"RationalPolytope(dim={self.dim}, vertices=[{vs}])"

    def __add__(self, other: "RationalPolytope") -> "RationalPolytope":
        return minkowski_sum(self, other)

    @property
    def affine_dim(self) -> int:
        return self._hull.affine_dim

    @property
    def is_full_dimensional(self) -> bool:
        return self._hull.affine_dim == self.dim

    def facets(self) -> list[tuple[tuple[int, ...], int]]:
        """Integer inequalities ``a . x + b >= 0`` of a full-dimensional polytope."""
        if not self.is_full_dimensional:
            raise ValueError("facets are only defined for full-dimensional polytopes")
        return list(self._hull.facets)

    def scale(self, t) -> "RationalPolytope":
        t = Fraction(t)
        if t < 0:
            raise InputError("negative scale factor")
        return RationalPolytope([tuple(t * x for x in v) for v in self.vertices])

    def translate(self, v: Iterable) -> "RationalPolytope":
        v = as_vector(v)
        if len(v) != self.dim:
            raise InputError("translation vector has wrong dimension")
        return RationalPolytope([tuple(a + b for a, b in zip(p, v)) for p in self.vertices])

    def is_lattice(self) -> bool:
        return all(x.denominator == 1 for v in self.vertices for x in v)

    @cached_property
    def volume(self) -> Fraction:
        return _volume(self)

    def contains(self, q: Iterable) -> bool:
        return contains_point(self, q)

    def issubset(self, other: "RationalPolytope") -> bool:
        return all(contains_point(other, v) for v in self.vertices)

    # -- serialisation -------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "vertices": [[format_rational(x) for x in v] for v in self.vertices],
        }

    @classmethod
    def from_json(cls, payload: Mapping) -> "RationalPolytope":
        try:
            verts = payload["vertices"]
            dim = payload.get("dim")
        except (KeyError, TypeError, AttributeError) as exc:
            raise InputError("polytope JSON needs 'vertices'") from exc
        if not isinstance(verts, list):
            raise InputError("'vertices' must be a list")
        return cls(verts, dim=dim)


# --------------------------------------------------------------------------
# operations


def convex_hull(points: Iterable[Iterable]) -> RationalPolytope:
    return RationalPolytope(points)


def minkowski_sum(P: RationalPolytope, Q: RationalPolytope) -> RationalPolytope:
    if P.dim != Q.dim:
        raise InputError(f"dimension mismatch {P.dim} vs {Q.dim}")
    return RationalPolytope(
        [tuple(a + b for a, b in zip(u, v)) for u in P.vertices for v in Q.vertices]
    )


def contains_point(P: RationalPolytope, q: Iterable) -> bool:
    q = as_vector(q)
    if len(q) != P.dim:
        raise InputError(f"point of dimension {len(q)} tested against polytope in dimension {P.dim}")
    h = P._hull
    diff = [a - b for a, b in zip(q, h.base)]
    for w in h.equations:
        if sum(a * b for a, b in zip(w, diff)) != 0:
            return False
    if h.affine_dim == 0:
        return True
    x = [q[i] for i in h.pivots]
    return all(sum(a * b for a, b in zip(av, x)) + bv >= 0 for av, bv in h.facets)


def _affine_dim(points: Sequence[Vector]) -> int:
    base = points[0]
    return _linalg.rank([[a - b for a, b in zip(p, base)] for p in points[1:]]) if len(points) > 1 else 0


def _volume(P: RationalPolytope) -> Fraction:
    h = P._hull
    d = P.dim
    if h.affine_dim < d:
        return Fraction(0)
    verts = P.vertices
    nv = len(verts)
    # integer coordinates in which the vertex centroid is a lattice point
    scale = nv * math.lcm(*(x.denominator for v in verts for x in v))
    ipts = [[int(x * scale) for x in v] for v in verts]
    centre = [sum(v[i] for v in ipts) // nv for i in range(d)]

    def triangulate(face: frozenset, k: int) -> list[tuple[int, ...]]:
        # pulling triangulation of a k-face from its smallest vertex; the
        # facets of a face are its inclusion-maximal proper intersections
        if k == 0:
            return [tuple(face)]
        apex = min(face)
        cands = {face & g for g in h.facet_vertices}
        cands.discard(face)
        subfaces = [f for f in cands if len(f) >= k and not any(f < o for o in cands)]
        out = []
        for sub in subfaces:
            if apex not in sub:
                out.extend((apex,) + s for s in triangulate(sub, k - 1))
        return out

    total = 0
    for fv in h.facet_vertices:
        for simplex in triangulate(fv, d - 1):
            mat = [[ipts[i][j] - centre[j] for j in range(d)] for i in simplex]
            total += abs(_linalg.det(mat))
    return Fraction(total, math.factorial(d) * scale**d)


def volume(P: RationalPolytope) -> Fraction:
    return P.volume


def lattice_points(P: RationalPolytope, scale: int = 1) -> list[tuple[int, ...]]:
    """Integer points of ``scale * P`` in lexicographic order."""
    if scale < 0:
        raise InputError("scale must be non-negative")
    verts = [tuple(scale * x for x in v) for v in P.vertices]
    lo = [math.ceil(min(v[i] for v in verts)) for i in range(P.dim)]
    hi = [math.floor(max(v[i] for v in verts)) for i in range(P.dim)]
    if any(a > b for a, b in zip(lo, hi)):
        return []
    axes = [np.arange(a, b + 1, dtype=np.int64) for a, b in zip(lo, hi)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, P.dim)
    mask = np.ones(len(grid), dtype=bool)
    h = P._hull
    base = tuple(scale * x for x in h.base)
    for w in h.equations:
        den = math.lcm(*(x.denominator for x in w))
        wi = np.array([int(x * den) for x in w], dtype=np.int64)
        rhs = sum(Fraction(int(x * den)) * b for x, b in zip(w, base))
        if rhs.denominator != 1:
            return []
        mask &= grid @ wi == int(rhs)
    if h.affine_dim > 0:
        sub = grid[:, list(h.pivots)]
        for a, b in h.facets:
            mask &= sub @ np.array(a, dtype=np.int64) + scale * b >= 0
    return [tuple(int(x) for x in row) for row in grid[mask]]


# --------------------------------------------------------------------------
# volume polynomial and mixed volumes


@dataclass(frozen=True)
class VolumePolynomial:
    """Vol(l_1 K_1 + ... + l_r K_r) as a homogeneous polynomial in l."""

    num_bodies: int
    degree: int
    coefficients: Mapping[tuple[int, ...], Fraction]

    def __call__(self, lam: Sequence) -> Fraction:
        total = Fraction(0)
        for exps, c in self.coefficients.items():
            term = Fraction(c)
            for l, e in zip(lam, exps):
                term *= Fraction(l) ** e
            total += term
        return total

    def mixed_volume(self, multidegree: Sequence[int]) -> Fraction:
        """MV of the multiset with ``multidegree[i]`` copies of body ``i``."""
        key = tuple(multidegree)
        if sum(key) != self.degree or len(key) != self.num_bodies:
            raise InputError(f"multidegree {key} does not sum to {self.degree}")
        c = self.coefficients.get(key, Fraction(0))
        return c * math.prod(math.factorial(k) for k in key)


def compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    """All tuples of ``parts`` non-negative ints summing to ``total`` (lex order)."""
    if parts == 0:
        return [()] if total == 0 else []
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        out.extend((first,) + rest for rest in compositions(total - first, parts - 1))
    return out


def _weighted_sum(bodies: Sequence[RationalPolytope], lam: Sequence[int]) -> RationalPolytope:
    acc = None
    for K, l in zip(bodies, lam):
        if l == 0:
            continue
        term = K.scale(l) if l != 1 else K
        acc = term if acc is None else minkowski_sum(acc, term)
    if acc is None:
        return RationalPolytope([(0,) * bodies[0].dim])
    return acc


def _check_same_dim(bodies: Sequence[RationalPolytope]) -> int:
    if not bodies:
        raise InputError("need at least one body")
    dims = {K.dim for K in bodies}
    if len(dims) != 1:
        raise InputError(f"bodies live in different dimensions {sorted(dims)}")
    return dims.pop()


def volume_polynomial(bodies: Sequence[RationalPolytope]) -> VolumePolynomial:
    """Interpolate the volume polynomial of the given bodies exactly.

    Samples ``l`` on the lattice points of the dilated simplex ``|l| = d``,
    which is unisolvent for homogeneous polynomials of degree ``d``.
    """
    d = _check_same_dim(bodies)
    r = len(bodies)
    monos = compositions(d, r)
    samples = monos
    values = [_weighted_sum(bodies, lam).volume for lam in samples]
    mat = [[math.prod(Fraction(l) ** e for l, e in zip(lam, mono)) for mono in monos] for lam in samples]
    coeffs = _linalg.solve(mat, values)
    return VolumePolynomial(r, d, {m: c for m, c in zip(monos, coeffs)})


def _mv_polarization(bodies: Sequence[RationalPolytope]) -> Fraction:
    d = len(bodies)
    sums: dict[tuple[int, ...], RationalPolytope] = {}
    total = Fraction(0)
    for mask in range(1, 1 << d):
        idx = tuple(i for i in range(d) if mask >> i & 1)
        if len(idx) == 1:
            S = bodies[idx[0]]
        else:
            S = minkowski_sum(sums[idx[:-1]], bodies[idx[-1]])
        sums[idx] = S
        sign = -1 if (d - len(idx)) % 2 else 1
        total += sign * S.volume
    return total


def _group(bodies: Sequence[RationalPolytope]) -> tuple[list[RationalPolytope], tuple[int, ...]]:
    distinct: list[RationalPolytope] = []
    counts: list[int] = []
    for K in bodies:
        for i, L in enumerate(distinct):
            if L == K:
                counts[i] += 1
                break
        else:
            distinct.append(K)
            counts.append(1)
    return distinct, tuple(counts)


def _mv_interpolation(bodies: Sequence[RationalPolytope]) -> Fraction:
    distinct, mult = _group(bodies)
    return volume_polynomial(distinct).mixed_volume(mult)


def mixed_volume(bodies: Sequence[RationalPolytope], cross_check: bool = True) -> Fraction:
    """MV_d of ``d`` bodies in R^d (normalised so MV(K,...,K) = d! Vol K).

    With ``cross_check`` the inclusion-exclusion value is compared against the
    coefficient read off the interpolated volume polynomial.
    """
    d = _check_same_dim(bodies)
    if len(bodies) != d:
        raise InputError(f"mixed volume in dimension {d} needs {d} bodies, got {len(bodies)}")
    mv = _mv_polarization(bodies)
    if cross_check:
        other = _mv_interpolation(bodies)
        if other != mv:
            raise ArithmeticError(f"mixed volume routes disagree: {mv} vs {other}")
    return mv


def mixed_volume_table(bodies: Sequence[RationalPolytope]) -> dict[tuple[int, ...], Fraction]:
    """MV_d(K_multidegree) for every multidegree of total degree d."""
    d = _check_same_dim(bodies)
    poly = volume_polynomial(list(bodies))
    return {m: poly.mixed_volume(m) for m in compositions(d, len(bodies))}


# --------------------------------------------------------------------------
# named bodies


def standard_simplex(d: int, scale=1) -> RationalPolytope:
    s = Fraction(scale)
    pts = [tuple(Fraction(0) for _ in range(d))]
    for i in range(d):
        pts.append(tuple(s if j == i else Fraction(0) for j in range(d)))
    return RationalPolytope(pts)


def box(upper: Sequence, lower: Sequence | None = None) -> RationalPolytope:
    upper = as_vector(upper)
    lower = as_vector(lower) if lower is not None else tuple(Fraction(0) for _ in upper)
    return RationalPolytope(itertools.product(*zip(lower, upper)))


def cube(d: int, side=1) -> RationalPolytope:
    return box([side] * d)

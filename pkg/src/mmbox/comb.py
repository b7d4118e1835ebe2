"""Discretized comb spaces: structured test instances with certified couplings.

A comb is a planar set under the l1 metric: a basepoint at the origin plus,
for each tooth index i = 1..depth, a vertical segment at abscissa 2^(-i+2)
whose length 2^(-i) * (1 + t(i)) encodes a coordinate t(i) in [0, 1].  Tooth
i carries mass 2^(-i), spread uniformly along the segment.

The discretization cuts each tooth into ``pts_per_tooth`` equal-mass blocks
and represents block j by its upper endpoint, so the tooth tip is always a
sample point and the basepoint-to-tip distance 2^(-i+2) + 2^(-i)*(1 + t(i))
is realized exactly.  Truncation at ``depth`` lumps the tail mass 2^(-depth)
at the basepoint, keeping total mass exactly 1.

For two combs over the same grid, matching blocks pairwise gives a relation
S with full coupling mass and small distortion; :func:`comb_witness` builds
that pairing and the accompanying distortion bound, which certifies an upper
bound for the box distance between the two discretizations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (
    ONE,
    ZERO,
    Coupling,
    FiniteMMSpace,
    FiniteMetricSpace,
    NumberLike,
    PreconditionError,
    Relation,
    to_fraction,
)


@dataclass(frozen=True)
class CombParams:
    """Tooth coordinates, tooth count, and per-tooth sample resolution."""

    t: tuple[Fraction, ...]
    depth: int
    pts_per_tooth: int

    @classmethod
    def make(
        cls, t: Sequence[NumberLike], pts_per_tooth: int, depth: int | None = None
    ) -> "CombParams":
        tt = tuple(to_fraction(v) for v in t)
        if depth is None:
            depth = len(tt)
        return cls(tt, depth, pts_per_tooth)


def _check_params(p: CombParams) -> None:
    if p.depth < 1:
        raise ValueError("depth must be at least 1")
    if len(p.t) != p.depth:
        raise ValueError(
            f"coordinate sequence has length {len(p.t)}, depth is {p.depth}"
        )
    if p.pts_per_tooth < 1:
        raise ValueError("pts_per_tooth must be at least 1")
    for i, v in enumerate(p.t):
        if not (0 <= v <= 1):
            raise ValueError(f"t({i + 1}) = {v} outside [0, 1]")


@dataclass(frozen=True)
class CombSpace:
    """A comb discretization: the mm-space plus the planar coordinates behind it."""

    mm: FiniteMMSpace
    coords: tuple[tuple[Fraction, Fraction], ...]
    params: CombParams


def build_comb(params: CombParams) -> CombSpace:
    """Discretize a comb with the given parameters.

    Point order is basepoint first, then tooth-major, block-minor.  Point
    masses: 2^(-depth) at the basepoint (the lumped tail), 2^(-i) / m per
    sample on tooth i.  Distances are l1 distances between the planar
    coordinates.
    """
    _check_params(params)
    m = params.pts_per_tooth
    coords: list[tuple[Fraction, Fraction]] = [(ZERO, ZERO)]
    labels = ["base"]
    masses = [Fraction(1, 2**params.depth)]
    for i in range(1, params.depth + 1):
        xcoord = Fraction(4, 2**i)
        length = (1 + params.t[i - 1]) * Fraction(1, 2**i)
        tooth_mass = Fraction(1, 2**i * m)
        for j in range(m):
            coords.append((xcoord, length * (j + 1) / m))
            labels.append(f"t{i}.{j}")
            masses.append(tooth_mass)
    size = len(coords)
    rows = [
        [abs(coords[a][0] - coords[b][0]) + abs(coords[a][1] - coords[b][1]) for b in range(size)]
        for a in range(size)
    ]
    mm = FiniteMMSpace(
        FiniteMetricSpace(tuple(labels), tuple(tuple(r) for r in rows)),
        tuple(masses),
    )
    return CombSpace(mm, tuple(coords), params)


def comb_witness(
    s: Sequence[NumberLike],
    t: Sequence[NumberLike],
    pts_per_tooth: int,
    epsilon: NumberLike | None = None,
) -> tuple[Coupling, Relation, Fraction]:
    """Build the block-matching certificate between two comb discretizations.

    Matches block j of tooth i in the first comb to the same block in the
    second, plus the basepoint pair.  The matched blocks carry equal mass on
    both sides, so the block-diagonal coupling has full mass on the
    relation.  Returns (coupling, relation, eps) where eps is the assembled
    distortion bound

        eps = 4 * max(2^(-depth), 1/m, max_i 2^i * |s(i) - t(i)|),

    always an upper bound for the true distortion of the relation (the true
    value, usually smaller, is available via ``distortion``).  When
    ``epsilon`` is given, the discretization is instead checked against the
    requested bound (each of the three terms must stay below epsilon/4) and
    the requested value is returned.
    """
    ss = tuple(to_fraction(v) for v in s)
    tt = tuple(to_fraction(v) for v in t)
    if len(ss) != len(tt):
        raise ValueError(
            f"coordinate sequences differ in length: {len(ss)} vs {len(tt)}"
        )
    depth = len(ss)
    m = pts_per_tooth
    _check_params(CombParams(ss, depth, m))
    _check_params(CombParams(tt, depth, m))

    gap = max(abs(a - b) * 2**i for i, (a, b) in enumerate(zip(ss, tt), start=1))
    tail = Fraction(1, 2**depth)
    mesh = Fraction(1, m)
    if epsilon is None:
        eps = 4 * max(tail, mesh, gap)
    else:
        eps = to_fraction(epsilon)
        quarter = eps / 4
        if not mesh < quarter:
            raise PreconditionError(
                ("mesh",),
                f"mesh too coarse for the requested epsilon: 1/{m} is not "
                f"below {eps}/4",
            )
        if not tail < quarter:
            raise PreconditionError(
                ("depth",),
                f"depth too shallow for the requested epsilon: 2^-{depth} is "
                f"not below {eps}/4",
            )
        if not gap < quarter:
            raise PreconditionError(
                ("gap",),
                "coordinate sequences too far apart for the requested "
                f"epsilon: max_i 2^i |s(i)-t(i)| = {gap} is not below {eps}/4",
            )

    npts = 1 + depth * m
    masses = build_comb(CombParams(ss, depth, m)).mm.mass
    return Coupling.diagonal(masses), Relation.identity(npts), eps


def _coords_of(obj) -> tuple[tuple[Fraction, Fraction], ...]:
    if isinstance(obj, CombSpace):
        return obj.coords
    try:
        return tuple((to_fraction(a), to_fraction(b)) for a, b in obj)
    except (TypeError, ValueError) as exc:
        raise ValueError(
            "missing coordinates: expected a CombSpace or a sequence of "
            "planar points"
        ) from exc


def hausdorff_l1(a, b) -> Fraction:
    """Hausdorff distance between two planar point sets under the l1 metric."""
    pa = _coords_of(a)
    pb = _coords_of(b)
    if not pa or not pb:
        raise ValueError("point sets must be nonempty")

    def directed(src, dst):
        return max(
            min(abs(px - qx) + abs(py - qy) for qx, qy in dst) for px, py in src
        )

    return max(directed(pa, pb), directed(pb, pa))

"""Parametrizing finite (measured) metric spaces by edge-length and weight vectors.

An n-point metric space, up to relabeling, is an assignment of a positive
length to each of the n(n-1)/2 unordered point pairs subject to the triangle
inequalities; a measured space adds a strictly positive weight vector summing
to 1.  Relabeling acts by permuting the points, so isometry (mm-isomorphism)
classes correspond to permutation orbits.  This module provides the vector
types, the maps back to spaces, orbit canonical forms and the orbit distance,
plus the constructive recovery of an injection from a low-distortion,
high-mass relation.

Pair-index convention: the pairs {i, j}, i < j, are linearized in
lexicographic order of (i, j), e.g. for n = 4:
(0,1), (0,2), (0,3), (1,2), (1,3), (2,3).  Canonical forms are minima in
this fixed linearization and are therefore stable across versions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Sequence

from .core import (
    ZERO,
    Coupling,
    FiniteMMSpace,
    FiniteMetricSpace,
    NumberLike,
    PreconditionError,
    Relation,
    SizeGuardError,
    SpaceValidationError,
    Violation,
    mass_on,
    distortion,
    is_correspondence,
    separation,
    to_fraction,
)


def pair_list(n: int) -> list[tuple[int, int]]:
    """The documented linearization of the 2-element subsets of {0..n-1}."""
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def pair_index(n: int, i: int, j: int) -> int:
    if i == j:
        raise ValueError("pair indices must be distinct")
    if i > j:
        i, j = j, i
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


@dataclass(frozen=True)
class MetricVector:
    """Edge lengths of an n-point space, one per unordered pair."""

    n: int
    r: tuple[Fraction, ...]

    @classmethod
    def from_entries(cls, n: int, entries: Sequence[NumberLike]) -> "MetricVector":
        vals = tuple(to_fraction(v) for v in entries)
        if len(vals) != n * (n - 1) // 2:
            raise ValueError(
                f"expected {n * (n - 1) // 2} pair entries for n={n}, got {len(vals)}"
            )
        return cls(n, vals)

    def value(self, i: int, j: int) -> Fraction:
        return self.r[pair_index(self.n, i, j)]


@dataclass(frozen=True)
class WeightVector:
    """A strictly positive point-weight vector summing to 1."""

    n: int
    s: tuple[Fraction, ...]

    @classmethod
    def from_entries(cls, entries: Sequence[NumberLike]) -> "WeightVector":
        vals = tuple(to_fraction(v) for v in entries)
        return cls(len(vals), vals)


def validate_metric_vector(mv: MetricVector) -> list[Violation]:
    out: list[Violation] = []
    n = mv.n
    if n < 1 or len(mv.r) != n * (n - 1) // 2:
        return [Violation("shape", (), f"expected {n*(n-1)//2} entries for n={n}")]
    for (i, j), v in zip(pair_list(n), mv.r):
        if v <= 0:
            out.append(Violation("positivity", (i, j), f"r({{{i},{j}}}) = {v} <= 0"))
    for i, j, k in combinations(range(n), 3):
        for p, mid, q in ((i, j, k), (j, i, k), (i, k, j)):
            lhs = mv.value(p, q)
            u = mv.value(p, mid)
            w = mv.value(mid, q)
            if lhs > u + w:
                out.append(
                    Violation(
                        "triangle",
                        (p, mid, q),
                        f"r({{{p},{q}}}) = {lhs} > {u} + {w} via {mid}",
                    )
                )
    return out


def validate_weight_vector(wv: WeightVector) -> list[Violation]:
    out: list[Violation] = []
    if wv.n < 1 or len(wv.s) != wv.n:
        return [Violation("shape", (), f"expected {wv.n} entries")]
    for i, v in enumerate(wv.s):
        if not (0 < v < 1) and not (wv.n == 1 and v == 1):
            out.append(Violation("range", (i,), f"s({i}) = {v} outside (0,1)"))
    total = sum(wv.s, ZERO)
    if total != 1:
        out.append(Violation("sum", (), f"weights sum to {total}, not 1"))
    return out


def _require(violations: list[Violation], name: str) -> None:
    if violations:
        raise SpaceValidationError(violations, name)


def phi_gh(mv: MetricVector) -> FiniteMetricSpace:
    """The n-point metric space whose pairwise distances are the vector entries."""
    _require(validate_metric_vector(mv), "metric vector")
    n = mv.n
    rows = [[ZERO] * n for _ in range(n)]
    for (i, j), v in zip(pair_list(n), mv.r):
        rows[i][j] = v
        rows[j][i] = v
    return FiniteMetricSpace.from_matrix(rows)


def phi_b(mv: MetricVector, wv: WeightVector) -> FiniteMMSpace:
    """The n-point metric measure space built from edge lengths and weights."""
    if mv.n != wv.n:
        raise ValueError(f"dimension mismatch: n={mv.n} vs n={wv.n}")
    _require(validate_weight_vector(wv), "weight vector")
    return FiniteMMSpace(phi_gh(mv), wv.s)


def metric_vector_of(x: FiniteMetricSpace | FiniteMMSpace) -> MetricVector:
    """Extract the edge-length vector of a space (inverse of phi_gh up to labels)."""
    space = x.space if isinstance(x, FiniteMMSpace) else x
    n = space.n
    return MetricVector(n, tuple(space.dist[i][j] for i, j in pair_list(n)))


def weight_vector_of(x: FiniteMMSpace) -> WeightVector:
    return WeightVector(x.n, x.mass)


def _permute_metric(mv: MetricVector, sigma: Sequence[int]) -> tuple[Fraction, ...]:
    n = mv.n
    return tuple(
        mv.r[pair_index(n, sigma[i], sigma[j])] for i, j in pair_list(n)
    )


def canonical_form(
    mv: MetricVector,
    wv: WeightVector | None = None,
    guard_n: int = 8,
) -> MetricVector | tuple[MetricVector, WeightVector]:
    """Lexicographically minimal relabeling over all point permutations.

    Two inputs are equivalent under relabeling iff their canonical forms are
    equal.  For the measured form the comparison key is the edge vector
    first, the weight vector second.
    """
    _require(validate_metric_vector(mv), "metric vector")
    if wv is not None:
        if wv.n != mv.n:
            raise ValueError(f"dimension mismatch: n={mv.n} vs n={wv.n}")
        _require(validate_weight_vector(wv), "weight vector")
    n = mv.n
    if n > guard_n:
        raise SizeGuardError(
            f"canonical_form guard is {guard_n} points, got {n}", math.factorial(n)
        )
    best_key = None
    for sigma in permutations(range(n)):
        r_perm = _permute_metric(mv, sigma)
        key = (r_perm, tuple(wv.s[sigma[i]] for i in range(n))) if wv else (r_perm,)
        if best_key is None or key < best_key:
            best_key = key
    if wv is None:
        return MetricVector(n, best_key[0])
    return MetricVector(n, best_key[0]), WeightVector(n, best_key[1])


def orbit_distance(
    a: MetricVector | tuple[MetricVector, WeightVector],
    b: MetricVector | tuple[MetricVector, WeightVector],
    guard_n: int = 8,
) -> Fraction:
    """Distance between relabeling orbits under the supremum metric.

    The minimum over permutations sigma of the sup-distance between ``a``
    and ``b`` relabeled by sigma, componentwise on the edge vectors and,
    when present, the weight vectors.
    """
    if isinstance(a, MetricVector) != isinstance(b, MetricVector):
        raise ValueError("operands must have the same shape")
    if isinstance(a, MetricVector):
        mva, wva = a, None
        mvb, wvb = b, None
    else:
        mva, wva = a
        mvb, wvb = b
        if wva.n != mva.n or wvb.n != mvb.n:
            raise ValueError("weight vector dimension mismatch")
    if mva.n != mvb.n:
        raise ValueError(f"dimension mismatch: n={mva.n} vs n={mvb.n}")
    n = mva.n
    if n > guard_n:
        raise SizeGuardError(
            f"orbit_distance guard is {guard_n} points, got {n}", math.factorial(n)
        )
    best: Fraction | None = None
    for sigma in permutations(range(n)):
        d = ZERO
        for va, vb in zip(mva.r, _permute_metric(mvb, sigma)):
            gap = abs(va - vb)
            if gap > d:
                d = gap
        if wva is not None:
            for i in range(n):
                gap = abs(wva.s[i] - wvb.s[sigma[i]])
                if gap > d:
                    d = gap
        if best is None or d < best:
            best = d
    assert best is not None
    return best


def uniform_lift(x: FiniteMetricSpace) -> FiniteMMSpace:
    """Attach the uniform measure (mass 1/n per point)."""
    return FiniteMMSpace(x, (Fraction(1, x.n),) * x.n)


def relation_to_injection(
    x: FiniteMetricSpace | FiniteMMSpace,
    y: FiniteMetricSpace | FiniteMMSpace,
    rel: Relation,
    pi: Coupling | None = None,
) -> tuple[int, ...]:
    """Recover an injection X -> Y whose graph sits inside ``rel``.

    Requires dis(rel) < sep(X) and one of
      (a) rel is a correspondence, or
      (b) ``pi`` is given and its mass on rel exceeds 1 minus the smallest
          atom of X.

    Under these hypotheses each point of X has a nonempty partner set and
    the partner sets of distinct points are disjoint, so any choice yields
    an injection; the smallest partner is chosen for determinism.  When
    |X| = |Y| the relation must equal the graph of the resulting bijection,
    which is asserted and returned.
    """
    dis = distortion(rel, x, y)
    sep = separation(x)
    failed: list[str] = []
    if not dis < sep:
        failed.append("dis")
    cond_a = is_correspondence(rel, x, y)
    cond_b = False
    if pi is not None:
        if not isinstance(x, FiniteMMSpace):
            raise ValueError("the mass condition needs a metric measure space X")
        cond_b = mass_on(pi, rel) > 1 - x.min_atom()
    if not (cond_a or cond_b):
        failed.append("mass" if pi is not None else "correspondence")
    if failed:
        reasons = []
        for cond in failed:
            if cond == "dis":
                reasons.append(f"dis S = {dis} is not below sep X = {sep}")
            elif cond == "correspondence":
                reasons.append("S is not a correspondence and no coupling was given")
            else:
                reasons.append(
                    "S is not a correspondence and the coupling mass on S "
                    f"does not exceed 1 - min atom = {1 - x.min_atom()}"
                )
        raise PreconditionError(failed, "; ".join(reasons))

    partners: list[list[int]] = [[] for _ in range(x.n)]
    for i, j in rel.sorted_pairs():
        partners[i].append(j)
    if any(not p for p in partners):
        raise RuntimeError(
            "internal consistency failure: a point has no partner despite "
            "the hypotheses"
        )
    f = tuple(min(p) for p in partners)
    if len(set(f)) != len(f):
        raise RuntimeError(
            "internal consistency failure: partner sets are not disjoint"
        )
    if x.n == y.n and len(rel) != x.n:
        raise RuntimeError(
            "internal consistency failure: equal cardinalities but the "
            "relation is not a bijection graph"
        )
    return f


def mass_closeness(
    f: Sequence[int],
    pi: Coupling,
    x: FiniteMMSpace,
    y: FiniteMMSpace,
    delta: NumberLike,
) -> bool:
    """Whether a mass-concentrated bijection matches atoms within delta.

    Applicable when 1 - pi(graph f) < delta; then returns the truth of
    max over x of |mu_X({x}) - mu_Y({f(x)})| < delta.  A False return would
    falsify the implementation, not the underlying implication.
    """
    d = to_fraction(delta)
    n = x.n
    if y.n != n:
        raise ValueError("spaces must have equal cardinality")
    if sorted(f) != list(range(n)):
        raise ValueError("f is not a bijection")
    on_graph = mass_on(pi, Relation.graph(list(f)))
    if not (1 - on_graph < d):
        raise PreconditionError(
            ("mass",),
            f"not applicable: 1 - pi(graph f) = {1 - on_graph} is not below "
            f"delta = {d}",
        )
    return max(abs(x.mass[i] - y.mass[f[i]]) for i in range(n)) < d

"""Finite metric spaces, metric measure spaces, and their primitive quantities.

All quantities live on exact rationals (`fractions.Fraction`).  Floats are
converted at the boundary through their shortest decimal representation, so
every comparison the solvers make is exact; there is no floating-point
tolerance anywhere past ingestion.

Every type here is immutable after construction and every operation is a pure
function, so values can be shared freely between threads or processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

NumberLike = Union[int, float, str, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)

#: Ingestion tolerance for probability masses coming from rounded (float or
#: file) data.  Masses within this distance of a true probability vector are
#: renormalized exactly at load time; afterwards everything is exact.
MASS_TOLERANCE = Fraction(1, 10**9)

#: Separation of a one-point space: the minimum over an empty pair set.
INFINITE_SEPARATION = math.inf


class SpaceValidationError(ValueError):
    """An operation required a valid space but the input has violations."""

    def __init__(self, violations: Iterable["Violation"], name: str = "space"):
        self.violations = list(violations)
        detail = "; ".join(v.describe() for v in self.violations)
        super().__init__(f"{name} fails validation: {detail}")


class SizeGuardError(RuntimeError):
    """An instance exceeds a solver's exact-search guard."""

    def __init__(self, message: str, search_space: int):
        self.search_space = search_space
        super().__init__(
            f"instance too large for exact search: {message} "
            f"(search space size {search_space})"
        )


class PreconditionError(ValueError):
    """A stated precondition of an operation does not hold.

    ``failed`` names the violated conditions so callers can react to a
    specific one (e.g. "dis", "sep", "mass").
    """

    def __init__(self, failed: Iterable[str], message: str):
        self.failed = tuple(failed)
        super().__init__(message)


def to_fraction(x: NumberLike) -> Fraction:
    """Exact rational from a number-like input.

    Strings accept decimal ("0.25") and ratio ("1/3") syntax.  Floats are
    read through ``repr``, i.e. as the decimal literal they print as.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numeric inputs")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational")


@dataclass(frozen=True)
class Violation:
    """One violated invariant, with the indices it involves."""

    rule: str
    where: tuple[int, ...]
    detail: str

    def describe(self) -> str:
        if self.where:
            spot = ", ".join(str(i) for i in self.where)
            return f"{self.rule} at ({spot}): {self.detail}"
        return f"{self.rule}: {self.detail}"


@dataclass(frozen=True)
class FiniteMetricSpace:
    """A labeled finite point set with an explicit distance matrix."""

    labels: tuple[str, ...]
    dist: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_matrix(
        cls, dist: Sequence[Sequence[NumberLike]], labels: Sequence[str] | None = None
    ) -> "FiniteMetricSpace":
        rows = tuple(tuple(to_fraction(v) for v in row) for row in dist)
        if labels is None:
            labels = tuple(str(i) for i in range(len(rows)))
        return cls(tuple(str(l) for l in labels), rows)

    @property
    def n(self) -> int:
        return len(self.labels)

    def d(self, i: int, j: int) -> Fraction:
        return self.dist[i][j]


def line_space(
    points: Sequence[NumberLike], labels: Sequence[str] | None = None
) -> FiniteMetricSpace:
    """The metric space of the given points on the real line."""
    xs = [to_fraction(p) for p in points]
    rows = [[abs(a - b) for b in xs] for a in xs]
    if labels is None:
        labels = [str(p) for p in points]
    return FiniteMetricSpace.from_matrix(rows, labels)


@dataclass(frozen=True)
class FiniteMMSpace:
    """A finite metric space with a strictly positive probability mass per point.

    Full support is part of the contract: a point with zero mass is not a
    point of the space.
    """

    space: FiniteMetricSpace
    mass: tuple[Fraction, ...]

    @classmethod
    def from_parts(
        cls,
        dist: Sequence[Sequence[NumberLike]],
        mass: Sequence[NumberLike],
        labels: Sequence[str] | None = None,
    ) -> "FiniteMMSpace":
        return cls(
            FiniteMetricSpace.from_matrix(dist, labels),
            tuple(to_fraction(v) for v in mass),
        )

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def labels(self) -> tuple[str, ...]:
        return self.space.labels

    @property
    def dist(self) -> tuple[tuple[Fraction, ...], ...]:
        return self.space.dist

    def d(self, i: int, j: int) -> Fraction:
        return self.space.dist[i][j]

    def max_atom(self) -> Fraction:
        return max(self.mass)

    def min_atom(self) -> Fraction:
        return min(self.mass)


@dataclass(frozen=True)
class Relation:
    """A set of cross-space index pairs (i indexing X, j indexing Y).

    A relation may or may not be a correspondence; see
    :func:`is_correspondence`.
    """

    pairs: frozenset[tuple[int, int]]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "Relation":
        return cls(frozenset((int(i), int(j)) for i, j in pairs))

    @classmethod
    def empty(cls) -> "Relation":
        return cls(frozenset())

    @classmethod
    def full(cls, n: int, m: int) -> "Relation":
        return cls(frozenset((i, j) for i in range(n) for j in range(m)))

    @classmethod
    def identity(cls, n: int) -> "Relation":
        return cls(frozenset((i, i) for i in range(n)))

    @classmethod
    def graph(cls, images: Sequence[int]) -> "Relation":
        """The graph of the map i -> images[i]."""
        return cls(frozenset(enumerate(images)))

    def transpose(self) -> "Relation":
        return Relation(frozenset((j, i) for i, j in self.pairs))

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)

    def issubset(self, other: "Relation") -> bool:
        return self.pairs <= other.pairs

    def __or__(self, other: "Relation") -> "Relation":
        return Relation(self.pairs | other.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.sorted_pairs())

    def __contains__(self, pair) -> bool:
        return pair in self.pairs


@dataclass(frozen=True)
class Coupling:
    """A nonnegative |X| x |Y| matrix of joint probability mass."""

    pi: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[NumberLike]]) -> "Coupling":
        return cls(tuple(tuple(to_fraction(v) for v in row) for row in rows))

    @classmethod
    def product(
        cls, mu_x: Sequence[NumberLike], mu_y: Sequence[NumberLike]
    ) -> "Coupling":
        mx = [to_fraction(v) for v in mu_x]
        my = [to_fraction(v) for v in mu_y]
        return cls(tuple(tuple(a * b for b in my) for a in mx))

    @classmethod
    def diagonal(cls, mu: Sequence[NumberLike]) -> "Coupling":
        m = [to_fraction(v) for v in mu]
        n = len(m)
        return cls(
            tuple(
                tuple(m[i] if i == j else ZERO for j in range(n)) for i in range(n)
            )
        )

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.pi), len(self.pi[0]) if self.pi else 0)

    def row_sums(self) -> tuple[Fraction, ...]:
        return tuple(sum(row, ZERO) for row in self.pi)

    def col_sums(self) -> tuple[Fraction, ...]:
        n, m = self.shape
        return tuple(sum((self.pi[i][j] for i in range(n)), ZERO) for j in range(m))

    def total(self) -> Fraction:
        return sum(self.row_sums(), ZERO)


def _check_relation_indices(rel: Relation, n: int, m: int) -> None:
    for i, j in rel.pairs:
        if not (0 <= i < n and 0 <= j < m):
            raise IndexError(
                f"relation pair ({i}, {j}) out of range for spaces of sizes {n} and {m}"
            )


def validate(obj: FiniteMetricSpace | FiniteMMSpace) -> list[Violation]:
    """Check every invariant of a space; return the violations found.

    An empty list means the space is valid.  Violations are data, not
    errors: invalid inputs are constructible so they can be inspected.
    """
    if isinstance(obj, FiniteMMSpace):
        out = _validate_metric(obj.space)
        out.extend(_validate_mass(obj))
        return out
    if isinstance(obj, FiniteMetricSpace):
        return _validate_metric(obj)
    raise TypeError(f"cannot validate {type(obj).__name__}")


def _validate_metric(space: FiniteMetricSpace) -> list[Violation]:
    out: list[Violation] = []
    n = len(space.labels)
    if n == 0:
        return [Violation("shape", (), "space has no points")]
    if len(set(space.labels)) != n:
        out.append(Violation("shape", (), "labels are not distinct"))
    if len(space.dist) != n or any(len(row) != n for row in space.dist):
        out.append(
            Violation("shape", (), f"distance matrix is not {n}x{n}")
        )
        return out
    d = space.dist
    for i in range(n):
        if d[i][i] != 0:
            out.append(Violation("diagonal", (i,), f"dist[{i}][{i}] = {d[i][i]} != 0"))
    for i in range(n):
        for j in range(i + 1, n):
            if d[i][j] != d[j][i]:
                out.append(
                    Violation(
                        "symmetry", (i, j), f"dist[{i}][{j}] = {d[i][j]} != {d[j][i]}"
                    )
                )
            if d[i][j] <= 0:
                out.append(
                    Violation(
                        "positivity", (i, j), f"dist[{i}][{j}] = {d[i][j]} <= 0"
                    )
                )
    for i in range(n):
        for k in range(i + 1, n):
            for j in range(n):
                if j == i or j == k:
                    continue
                if d[i][k] > d[i][j] + d[j][k]:
                    out.append(
                        Violation(
                            "triangle",
                            (i, j, k),
                            f"dist[{i}][{k}] = {d[i][k]} > "
                            f"{d[i][j]} + {d[j][k]} via {j}",
                        )
                    )
    return out


def _validate_mass(mm: FiniteMMSpace) -> list[Violation]:
    out: list[Violation] = []
    n = mm.space.n
    if len(mm.mass) != n:
        out.append(
            Violation("shape", (), f"mass vector has {len(mm.mass)} entries, not {n}")
        )
        return out
    for i, v in enumerate(mm.mass):
        if v <= 0:
            out.append(Violation("mass-positivity", (i,), f"mass[{i}] = {v} <= 0"))
    total = sum(mm.mass, ZERO)
    if abs(total - 1) > MASS_TOLERANCE:
        out.append(Violation("mass-sum", (), f"masses sum to {total}, not 1"))
    return out


def require_valid(obj: FiniteMetricSpace | FiniteMMSpace, name: str = "space") -> None:
    """Raise ``SpaceValidationError`` unless ``obj`` is a valid space."""
    violations = validate(obj)
    if violations:
        raise SpaceValidationError(violations, name)


def separation(x: FiniteMetricSpace | FiniteMMSpace) -> Fraction | float:
    """The smallest distance between two distinct points.

    For a one-point space the minimum ranges over an empty set and the
    conventional value is +inf.
    """
    space = x.space if isinstance(x, FiniteMMSpace) else x
    n = space.n
    if n == 1:
        return INFINITE_SEPARATION
    return min(space.dist[i][j] for i in range(n) for j in range(i + 1, n))


def diameter(x: FiniteMetricSpace | FiniteMMSpace) -> Fraction:
    """The largest pairwise distance (0 for a one-point space)."""
    space = x.space if isinstance(x, FiniteMMSpace) else x
    n = space.n
    return max(
        (space.dist[i][j] for i in range(n) for j in range(i + 1, n)),
        default=ZERO,
    )


def distortion(
    rel: Relation,
    x: FiniteMetricSpace | FiniteMMSpace,
    y: FiniteMetricSpace | FiniteMMSpace,
) -> Fraction:
    """The largest discrepancy |d_X(x1,x2) - d_Y(y1,y2)| over pairs in ``rel``.

    The empty relation has distortion 0 (an empty supremum).
    """
    dx = x.dist if not isinstance(x, FiniteMetricSpace) else x.dist
    dy = y.dist if not isinstance(y, FiniteMetricSpace) else y.dist
    nx = len(dx)
    ny = len(dy)
    _check_relation_indices(rel, nx, ny)
    ps = rel.sorted_pairs()
    best = ZERO
    for a in range(len(ps)):
        i1, j1 = ps[a]
        drow = dx[i1]
        drow_y = dy[j1]
        for b in range(a + 1, len(ps)):
            i2, j2 = ps[b]
            v = drow[i2] - drow_y[j2]
            if v < 0:
                v = -v
            if v > best:
                best = v
    return best


def is_correspondence(
    rel: Relation,
    x: FiniteMetricSpace | FiniteMMSpace,
    y: FiniteMetricSpace | FiniteMMSpace,
) -> bool:
    """True iff every point of X and every point of Y appears in some pair."""
    nx = x.n
    ny = y.n
    _check_relation_indices(rel, nx, ny)
    seen_x = {i for i, _ in rel.pairs}
    seen_y = {j for _, j in rel.pairs}
    return len(seen_x) == nx and len(seen_y) == ny


def mass_on(pi: Coupling, rel: Relation) -> Fraction:
    """The total coupling mass sitting on the cells of ``rel``."""
    n, m = pi.shape
    _check_relation_indices(rel, n, m)
    return sum((pi.pi[i][j] for i, j in rel.pairs), ZERO)

"""Exact Gromov-Hausdorff distance between finite metric spaces.

The distance is half the minimal distortion over all correspondences.  The
search runs over relations of the form graph(f) | transpose(graph(g)) for
maps f: X -> Y and g: Y -> X.  This family is exhaustive:

  * every such relation is a correspondence (f covers X, g covers Y);
  * every correspondence R contains one (pick f(x) as any partner of x in R
    and g(y) as any partner of y), and distortion is monotone under
    inclusion, so dis(graph f | graph g^T) <= dis R.

Hence the minimum over the family equals the minimum over all
correspondences.  The n <= 3 power-set oracle in the test suite checks this
independently.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .core import (
    ZERO,
    FiniteMetricSpace,
    FiniteMMSpace,
    Relation,
    SizeGuardError,
    distortion,
    is_correspondence,
    require_valid,
)


def _plain_space(x: FiniteMetricSpace | FiniteMMSpace) -> FiniteMetricSpace:
    return x.space if isinstance(x, FiniteMMSpace) else x


def _map_distortions(dx, dy, maps) -> list[Fraction]:
    """Distortion of graph(f) for every map f, in enumeration order."""
    n = len(dx)
    out = []
    for f in maps:
        best = ZERO
        for i in range(n):
            dxi = dx[i]
            dyf = dy[f[i]]
            for i2 in range(i + 1, n):
                v = dxi[i2] - dyf[f[i2]]
                if v < 0:
                    v = -v
                if v > best:
                    best = v
        out.append(best)
    return out


def gh_exact(
    x: FiniteMetricSpace | FiniteMMSpace,
    y: FiniteMetricSpace | FiniteMMSpace,
    guard_n: int = 7,
    prune: bool = False,
) -> tuple[Fraction, Relation]:
    """Exact Gromov-Hausdorff distance with a minimizing correspondence.

    Ties between minimizing correspondences are broken by the
    lexicographically smallest sorted pair list, so the witness is
    deterministic.  With ``prune=True`` a branch-and-bound search (prefix
    distortion lower bounds) replaces the plain enumeration; the result is
    identical, only faster on larger instances.
    """
    xs = _plain_space(x)
    ys = _plain_space(y)
    require_valid(xs, "X")
    require_valid(ys, "Y")
    n, m = xs.n, ys.n
    if max(n, m) > guard_n:
        raise SizeGuardError(
            f"gh_exact guard is {guard_n} points per space, got {n} and {m}",
            m**n * n**m,
        )
    if prune:
        return _gh_pruned(xs.dist, ys.dist, n, m)
    return _gh_enumerate(xs.dist, ys.dist, n, m)


def _candidate_pairs(f, g, n, m) -> list[tuple[int, int]]:
    pairs = {(i, f[i]) for i in range(n)}
    pairs.update((g[j], j) for j in range(m))
    return sorted(pairs)


def _gh_enumerate(dx, dy, n: int, m: int) -> tuple[Fraction, Relation]:
    f_list = list(product(range(m), repeat=n))
    g_list = list(product(range(n), repeat=m))
    dis_f = _map_distortions(dx, dy, f_list)
    dis_g = _map_distortions(dy, dx, g_list)

    best: Fraction | None = None
    best_pairs: list[tuple[int, int]] | None = None
    for fi, f in enumerate(f_list):
        df = dis_f[fi]
        for gi, g in enumerate(g_list):
            dg = dis_g[gi]
            d = df if df >= dg else dg
            # Candidates whose distortion strictly exceeds the incumbent can
            # never win or tie, so the cross evaluation may stop early; ties
            # are still evaluated in full for the lexicographic witness.
            if best is not None and d > best:
                continue
            aborted = False
            for i in range(n):
                dxi = dx[i]
                dyf = dy[f[i]]
                for j in range(m):
                    v = dxi[g[j]] - dyf[j]
                    if v < 0:
                        v = -v
                    if v > d:
                        if best is not None and v > best:
                            aborted = True
                            break
                        d = v
                if aborted:
                    break
            if aborted:
                continue
            if best is None or d < best:
                best = d
                best_pairs = _candidate_pairs(f, g, n, m)
            elif d == best:
                cand = _candidate_pairs(f, g, n, m)
                if cand < best_pairs:
                    best_pairs = cand
    assert best is not None and best_pairs is not None
    return best / 2, Relation.from_pairs(best_pairs)


def _gh_pruned(dx, dy, n: int, m: int) -> tuple[Fraction, Relation]:
    best: Fraction | None = None
    best_pairs: list[tuple[int, int]] | None = None
    f = [0] * n
    g = [0] * m

    def assign_g(j: int, d: Fraction) -> None:
        nonlocal best, best_pairs
        if j == m:
            if best is None or d < best:
                best = d
                best_pairs = _candidate_pairs(f, g, n, m)
            elif d == best:
                cand = _candidate_pairs(f, g, n, m)
                if cand < best_pairs:
                    best_pairs = cand
            return
        dyj = dy[j]
        for tgt in range(n):
            g[j] = tgt
            dxt = dx[tgt]
            d2 = d
            ok = True
            for j2 in range(j):  # pairs within the g prefix
                v = dxt[g[j2]] - dyj[j2]
                if v < 0:
                    v = -v
                if v > d2:
                    if best is not None and v > best:
                        ok = False
                        break
                    d2 = v
            if ok:
                for i in range(n):  # cross pairs against the complete f
                    v = dx[i][tgt] - dy[f[i]][j]
                    if v < 0:
                        v = -v
                    if v > d2:
                        if best is not None and v > best:
                            ok = False
                            break
                        d2 = v
            if ok:
                assign_g(j + 1, d2)

    def assign_f(i: int, d: Fraction) -> None:
        if i == n:
            assign_g(0, d)
            return
        dxi = dx[i]
        for tgt in range(m):
            f[i] = tgt
            dyt = dy[tgt]
            d2 = d
            ok = True
            for i2 in range(i):
                v = dxi[i2] - dyt[f[i2]]
                if v < 0:
                    v = -v
                if v > d2:
                    if best is not None and v > best:
                        ok = False
                        break
                    d2 = v
            if ok:
                assign_f(i + 1, d2)

    assign_f(0, ZERO)
    assert best is not None and best_pairs is not None
    return best / 2, Relation.from_pairs(best_pairs)


def gh_upper_from_relation(
    rel: Relation,
    x: FiniteMetricSpace | FiniteMMSpace,
    y: FiniteMetricSpace | FiniteMMSpace,
) -> Fraction:
    """Upper bound on the Gromov-Hausdorff distance from one correspondence."""
    if not is_correspondence(rel, x, y):
        raise ValueError("relation is not a correspondence")
    return distortion(rel, x, y) / 2

"""Shared generators and independent oracles for the test suite.

The oracles here deliberately avoid the solver code paths they check:
GH via power-set enumeration of all relations, box via brute force over all
subsets, transport via vertex enumeration of the transportation polytope.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from mmbox import (
    Coupling,
    FiniteMetricSpace,
    FiniteMMSpace,
    MetricVector,
    Relation,
    WeightVector,
    distortion,
    max_mass_coupling,
    metric_vector_of,
)

ZERO = Fraction(0)


def metric_closure(w: list[list[Fraction]]) -> list[list[Fraction]]:
    """Shortest-path closure of a positive symmetric weight matrix."""
    n = len(w)
    d = [row[:] for row in w]
    for i in range(n):
        d[i][i] = ZERO
    for k in range(n):
        for i in range(n):
            for j in range(n):
                via = d[i][k] + d[k][j]
                if via < d[i][j]:
                    d[i][j] = via
    return d


def random_fraction(rng, num_hi=24, den_hi=6) -> Fraction:
    return Fraction(rng.randint(1, num_hi), rng.randint(1, den_hi))


def random_metric_space(rng, n: int) -> FiniteMetricSpace:
    w = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            w[i][j] = w[j][i] = random_fraction(rng)
    return FiniteMetricSpace.from_matrix(metric_closure(w))


def random_mass(rng, n: int) -> list[Fraction]:
    weights = [rng.randint(1, 9) for _ in range(n)]
    total = sum(weights)
    return [Fraction(v, total) for v in weights]


def random_mm_space(rng, n: int) -> FiniteMMSpace:
    return FiniteMMSpace(random_metric_space(rng, n), tuple(random_mass(rng, n)))


def random_metric_vector(rng, n: int) -> MetricVector:
    return metric_vector_of(random_metric_space(rng, n))


def random_weight_vector(rng, n: int) -> WeightVector:
    return WeightVector.from_entries(random_mass(rng, n))


def permuted_space(space: FiniteMetricSpace, sigma) -> FiniteMetricSpace:
    n = space.n
    rows = [[space.dist[sigma[i]][sigma[j]] for j in range(n)] for i in range(n)]
    return FiniteMetricSpace.from_matrix(
        rows, [space.labels[sigma[i]] for i in range(n)]
    )


def permuted_mm_space(mm: FiniteMMSpace, sigma) -> FiniteMMSpace:
    return FiniteMMSpace(
        permuted_space(mm.space, sigma), tuple(mm.mass[sigma[i]] for i in range(mm.n))
    )


def _cell_diffs(x, y):
    """Cells of X x Y in row-major order and their pairwise distance gaps."""
    nx, ny = x.n, y.n
    cells = [(i, j) for i in range(nx) for j in range(ny)]
    nc = len(cells)
    diff = [[ZERO] * nc for _ in range(nc)]
    for a in range(nc):
        i1, j1 = cells[a]
        for b in range(a + 1, nc):
            i2, j2 = cells[b]
            v = x.dist[i1][i2] - y.dist[j1][j2]
            diff[a][b] = diff[b][a] = v if v >= 0 else -v
    return cells, diff


def gh_power_set_oracle(x, y) -> Fraction:
    """Half the minimal distortion over ALL correspondences, by enumerating
    every relation of X x Y."""
    nx, ny = x.n, y.n
    cells, diff = _cell_diffs(x, y)
    nc = len(cells)
    full_rows = (1 << nx) - 1
    full_cols = (1 << ny) - 1
    best = None
    for mask in range(1, 1 << nc):
        rows = cols = 0
        members = []
        for c in range(nc):
            if mask >> c & 1:
                members.append(c)
                rows |= 1 << cells[c][0]
                cols |= 1 << cells[c][1]
        if rows != full_rows or cols != full_cols:
            continue
        dis = ZERO
        for a_idx in range(len(members)):
            row = diff[members[a_idx]]
            for b_idx in range(a_idx + 1, len(members)):
                v = row[members[b_idx]]
                if v > dis:
                    dis = v
        if best is None or dis < best:
            best = dis
    assert best is not None
    return best / 2


def box_brute_force(x: FiniteMMSpace, y: FiniteMMSpace) -> Fraction:
    """Minimum of max(1 - best coupling mass, dis S) over ALL subsets S."""
    cells, diff = _cell_diffs(x, y)
    nc = len(cells)
    best = Fraction(1)  # the empty relation
    for mask in range(1, 1 << nc):
        members = [c for c in range(nc) if mask >> c & 1]
        dis = ZERO
        for a_idx in range(len(members)):
            row = diff[members[a_idx]]
            for b_idx in range(a_idx + 1, len(members)):
                v = row[members[b_idx]]
                if v > dis:
                    dis = v
        if dis >= best:
            continue  # the objective cannot beat the incumbent
        rel = Relation.from_pairs(cells[c] for c in members)
        _, value = max_mass_coupling(x.mass, y.mass, rel)
        objective = max(dis, 1 - value)
        if objective < best:
            best = objective
    return best


def transport_vertices(mu_x, mu_y) -> list[Coupling]:
    """All vertices of the transportation polytope, by solving every
    forest-supported system via leaf peeling.  Small instances only."""
    n, m = len(mu_x), len(mu_y)
    cells = [(i, j) for i in range(n) for j in range(m)]
    nc = len(cells)
    seen = set()
    out = []
    for mask in range(1 << nc):
        support = [cells[c] for c in range(nc) if mask >> c & 1]
        if len(support) > n + m - 1:
            continue
        sol = _solve_forest(support, list(mu_x), list(mu_y), n, m)
        if sol is None:
            continue
        key = tuple(tuple(row) for row in sol)
        if key not in seen:
            seen.add(key)
            out.append(Coupling(key))
    return out


def _solve_forest(support, a, b, n, m):
    rows = [[] for _ in range(n)]
    cols = [[] for _ in range(m)]
    for idx, (i, j) in enumerate(support):
        rows[i].append(idx)
        cols[j].append(idx)
    pi = [[ZERO] * m for _ in range(n)]
    alive = [True] * len(support)
    remaining = len(support)
    while remaining:
        progress = False
        for i in range(n):
            live = [idx for idx in rows[i] if alive[idx]]
            if len(live) == 1:
                idx = live[0]
                _, j = support[idx]
                v = a[i]
                if v < 0 or b[j] < v:
                    return None
                pi[support[idx][0]][j] = v
                a[i] = ZERO
                b[j] -= v
                alive[idx] = False
                remaining -= 1
                progress = True
        for j in range(m):
            live = [idx for idx in cols[j] if alive[idx]]
            if len(live) == 1:
                idx = live[0]
                i, _ = support[idx]
                v = b[j]
                if v < 0 or a[i] < v:
                    return None
                pi[i][support[idx][1]] = v
                b[j] = ZERO
                a[i] -= v
                alive[idx] = False
                remaining -= 1
                progress = True
        if not progress:
            return None  # a cycle: not a basic solution
    if any(v != 0 for v in a) or any(v != 0 for v in b):
        return None
    return pi


def max_mass_vertex_oracle(mu_x, mu_y, rel: Relation) -> Fraction:
    """Maximum coupling mass on rel over the polytope's vertices."""
    best = ZERO
    for v in transport_vertices(mu_x, mu_y):
        total = sum((v.pi[i][j] for i, j in rel.pairs), ZERO)
        if total > best:
            best = total
    return best

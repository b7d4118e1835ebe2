"""Coupling machinery and the Prokhorov distance on a common finite space.

The central primitive is :func:`max_mass_coupling`: given two probability
mass vectors and a set of allowed cells, find a transport plan putting as
much mass as possible on the allowed cells.  It is solved as a transportation
flow problem with augmenting paths on exact rationals; no LP dependency.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Sequence

from .core import (
    ONE,
    ZERO,
    Coupling,
    FiniteMetricSpace,
    FiniteMMSpace,
    MASS_TOLERANCE,
    NumberLike,
    Relation,
    SizeGuardError,
    _check_relation_indices,
    to_fraction,
)


def _probability_vector(values: Sequence[NumberLike], name: str) -> list[Fraction]:
    vec = [to_fraction(v) for v in values]
    if not vec:
        raise ValueError(f"{name} is empty")
    if any(v < 0 for v in vec):
        raise ValueError(f"{name} has a negative entry")
    total = sum(vec, ZERO)
    if total != 1:
        raise ValueError(f"{name} sums to {total}, not 1")
    return vec


def max_mass_coupling(
    mu_x: Sequence[NumberLike], mu_y: Sequence[NumberLike], rel: Relation
) -> tuple[Coupling, Fraction]:
    """Maximize the coupling mass on the cells of ``rel``.

    Returns a coupling attaining the maximum together with the value.  Mass
    that cannot be routed through ``rel`` is completed deterministically off
    the relation in northwest-corner order, so the full matrix is always a
    valid coupling; only the mass on ``rel`` is contractually meaningful.
    """
    mx = _probability_vector(mu_x, "mu_x")
    my = _probability_vector(mu_y, "mu_y")
    n, m = len(mx), len(my)
    _check_relation_indices(rel, n, m)

    nbr: list[list[int]] = [[] for _ in range(n)]
    for i, j in rel.sorted_pairs():
        nbr[i].append(j)

    pi = [[ZERO] * m for _ in range(n)]
    supply = list(mx)
    demand = list(my)

    # Augmenting paths over the bipartite residual graph: forward arcs are the
    # cells of rel (unbounded), backward arcs carry the mass already placed.
    # Each BFS uses a fixed scan order, so the result is deterministic.
    while True:
        prev = [-2] * (n + m)  # -2 unseen, -1 root, else predecessor node id
        queue: deque[int] = deque()
        for i in range(n):
            if supply[i] > 0:
                prev[i] = -1
                queue.append(i)
        target = -1
        while queue and target < 0:
            u = queue.popleft()
            if u < n:
                for j in nbr[u]:
                    v = n + j
                    if prev[v] == -2:
                        prev[v] = u
                        if demand[j] > 0:
                            target = v
                            break
                        queue.append(v)
            else:
                j = u - n
                for i in range(n):
                    if prev[i] == -2 and pi[i][j] > 0:
                        prev[i] = u
                        queue.append(i)
        if target < 0:
            break

        delta = demand[target - n]
        u = target
        while prev[u] != -1:
            p = prev[u]
            if u < n and pi[u][p - n] < delta:  # backward arc y_(p-n) -> x_u
                delta = pi[u][p - n]
            u = p
        if supply[u] < delta:
            delta = supply[u]

        u = target
        while prev[u] != -1:
            p = prev[u]
            if u >= n:
                pi[p][u - n] += delta
            else:
                pi[u][p - n] -= delta
            u = p
        supply[u] -= delta
        demand[target - n] -= delta

    value = ONE - sum(supply, ZERO)

    # Complete the residual marginals.  After maximization no cell of rel has
    # both leftover supply and leftover demand, so the fill stays off rel.
    i = j = 0
    while i < n and j < m:
        if supply[i] == 0:
            i += 1
        elif demand[j] == 0:
            j += 1
        else:
            step = min(supply[i], demand[j])
            pi[i][j] += step
            supply[i] -= step
            demand[j] -= step

    return Coupling(tuple(tuple(row) for row in pi)), value


def is_coupling(
    pi: Coupling,
    mu_x: Sequence[NumberLike],
    mu_y: Sequence[NumberLike],
    tol: Fraction | None = None,
) -> bool:
    """True iff the marginals of ``pi`` are ``mu_x`` and ``mu_y``.

    Exact comparison by default; when any input is a float (rounded data),
    marginals are accepted within the ingestion tolerance.
    """
    if tol is None:
        floaty = any(isinstance(v, float) for v in list(mu_x) + list(mu_y)) or any(
            isinstance(v, float) for row in pi.pi for v in row
        )
        tol = MASS_TOLERANCE if floaty else ZERO
    mx = [to_fraction(v) for v in mu_x]
    my = [to_fraction(v) for v in mu_y]
    n, m = pi.shape
    if n != len(mx) or m != len(my):
        return False
    if any(v < 0 for row in pi.pi for v in row):
        return False
    rows = pi.row_sums()
    cols = pi.col_sums()
    return all(abs(rows[i] - mx[i]) <= tol for i in range(n)) and all(
        abs(cols[j] - my[j]) <= tol for j in range(m)
    )


def prokhorov(
    mu: Sequence[NumberLike],
    nu: Sequence[NumberLike],
    z: FiniteMetricSpace | FiniteMMSpace,
    guard_n: int = 12,
) -> Fraction:
    """Prokhorov distance between two probability vectors on a common space.

    Computes the infimum of the eps > 0 such that mu(A) <= nu(A^eps) + eps
    for every subset A, where A^eps is the open eps-blowup of A.  Zeros in
    the vectors are allowed: measures on a common space need not have full
    support.

    The infimum is found by exact comparison over the finite candidate set
    where the feasibility condition can change: the pairwise distances and
    the mass gaps mu(A) - nu(B).  The returned value is the infimum of the
    feasible set and need not itself be feasible (open-ball boundary
    effects).
    """
    space = z.space if isinstance(z, FiniteMMSpace) else z
    nz = space.n
    if nz > guard_n:
        raise SizeGuardError(
            f"prokhorov enumerates all subsets of a {nz}-point space", 2**nz
        )
    p = [to_fraction(v) for v in mu]
    q = [to_fraction(v) for v in nu]
    if len(p) != nz or len(q) != nz:
        raise ValueError(f"measure vectors must have {nz} entries")
    for name, vec in (("mu", p), ("nu", q)):
        if any(v < 0 for v in vec):
            raise ValueError(f"{name} has a negative entry")
        total = sum(vec, ZERO)
        if total != 1:
            raise ValueError(f"{name} sums to {total}, not 1")

    d = space.dist
    # Thresholds where an open blowup can change, i.e. the distinct positive
    # distances; on the half-open interval (deltas[k], deltas[k+1]] the open
    # eps-blowup of A equals the closed deltas[k]-blowup.
    deltas: list[Fraction] = [ZERO]
    deltas.extend(
        sorted({d[i][j] for i in range(nz) for j in range(i + 1, nz) if d[i][j] > 0})
    )
    kcount = len(deltas)

    # gap[k] = max over nonempty A of mu(A) - nu(closed deltas[k]-blowup of A)
    gap = [None] * kcount
    for mask in range(1, 1 << nz):
        members = [i for i in range(nz) if mask >> i & 1]
        mu_a = sum((p[i] for i in members), ZERO)
        items = sorted(
            (min(d[t][i] for i in members), q[t]) for t in range(nz)
        )
        ptr = 0
        acc = ZERO
        for k in range(kcount):
            limit = deltas[k]
            while ptr < nz and items[ptr][0] <= limit:
                acc += items[ptr][1]
                ptr += 1
            val = mu_a - acc
            if gap[k] is None or val > gap[k]:
                gap[k] = val

    best: Fraction | None = None
    for k in range(kcount):
        g = gap[k]
        upper = deltas[k + 1] if k + 1 < kcount else None
        if upper is not None and g > upper:
            continue  # no feasible eps inside this interval
        cand = max(deltas[k], g, ZERO)
        if best is None or cand < best:
            best = cand
    assert best is not None  # the last interval is always feasible
    return best

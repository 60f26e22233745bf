"""Exact solver for the balanced transportation problem.

Transportation-simplex implementation (spanning-tree basis with node
potentials). Problems here are tiny (title-length supports, at most a few
dozen nodes per side), so exactness is cheap; the solver also returns the
dual potentials as an optimality certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_EPS = 1e-10


@dataclass
class TransportPlan:
    """Optimal flow between two discrete mass distributions.

    flow[i, j] is the mass moved from supply node i to demand node j; cost is
    the total transport cost; (u, v) are dual potentials certifying
    optimality: u_i + v_j <= cost_matrix[i, j] with equality on basic cells.
    """

    flow: np.ndarray
    cost: float
    u: np.ndarray
    v: np.ndarray

    def dual_objective(self, supply: np.ndarray, demand: np.ndarray) -> float:
        return float(self.u @ supply + self.v @ demand)


def _northwest_corner(a: np.ndarray, b: np.ndarray, flow: np.ndarray):
    """Initial basic feasible solution; returns the m+n-1 basic cells."""
    m, n = flow.shape
    basis = []
    a_rem, b_rem = a.copy(), b.copy()
    i = j = 0
    while True:
        q = min(a_rem[i], b_rem[j])
        flow[i, j] = q
        basis.append((i, j))
        a_rem[i] -= q
        b_rem[j] -= q
        if i == m - 1 and j == n - 1:
            break
        if i == m - 1:
            j += 1
        elif j == n - 1:
            i += 1
        elif a_rem[i] <= b_rem[j]:
            i += 1
        else:
            j += 1
    return basis


def solve_transport(cost: np.ndarray, supply, demand) -> TransportPlan:
    """Minimize sum(flow * cost) with row sums = supply, column sums = demand.

    Supply and demand must be non-negative and balanced (equal totals within
    1e-9). Returns an exact vertex optimum of the LP.
    """
    cost = np.asarray(cost, dtype=float)
    a = np.asarray(supply, dtype=float).copy()
    b = np.asarray(demand, dtype=float).copy()
    m, n = cost.shape
    if a.shape != (m,) or b.shape != (n,):
        raise ValueError("cost matrix shape does not match supply/demand lengths")
    if (a < -_EPS).any() or (b < -_EPS).any():
        raise ValueError("supply and demand must be non-negative")
    if abs(a.sum() - b.sum()) > 1e-9:
        raise ValueError("unbalanced problem: supply and demand totals differ")

    flow = np.zeros((m, n))
    row_adj: list[set[int]] = [set() for _ in range(m)]
    col_adj: list[set[int]] = [set() for _ in range(n)]
    for r, c in _northwest_corner(a, b, flow):
        row_adj[r].add(c)
        col_adj[c].add(r)

    u = np.empty(m)
    v = np.empty(n)
    u_done = np.empty(m, dtype=bool)
    v_done = np.empty(n, dtype=bool)

    def recompute_potentials() -> None:
        u_done[:] = False
        v_done[:] = False
        u[0] = 0.0
        u_done[0] = True
        stack = [(True, 0)]
        while stack:
            is_row, k = stack.pop()
            if is_row:
                for c in row_adj[k]:
                    if not v_done[c]:
                        v[c] = cost[k, c] - u[k]
                        v_done[c] = True
                        stack.append((False, c))
            else:
                for r in col_adj[k]:
                    if not u_done[r]:
                        u[r] = cost[r, k] - v[k]
                        u_done[r] = True
                        stack.append((True, r))

    def cycle_for(i0: int, j0: int) -> list[tuple[int, int]]:
        """Alternating cell cycle closed by the entering cell (i0, j0)."""
        parent: dict[tuple[bool, int], tuple[bool, int] | None] = {(False, j0): None}
        stack = [(False, j0)]
        while stack:
            node = stack.pop()
            is_row, k = node
            if is_row:
                for c in row_adj[k]:
                    child = (False, c)
                    if child not in parent:
                        parent[child] = node
                        stack.append(child)
            else:
                for r in col_adj[k]:
                    child = (True, r)
                    if child not in parent:
                        parent[child] = node
                        if r == i0:
                            stack.clear()
                            break
                        stack.append(child)
        cells = [(i0, j0)]
        node = (True, i0)
        while parent[node] is not None:
            nxt = parent[node]
            is_row, k = node
            cells.append((k, nxt[1]) if is_row else (nxt[1], k))
            node = nxt
        return cells

    basic_mask = np.zeros((m, n), dtype=bool)
    basic_mask[tuple(zip(*[(r, c) for r in range(m) for c in row_adj[r]]))] = True

    max_iters = 400 * (m + n + 1) ** 2
    dantzig_limit = 100 * (m + n + 1)
    for iteration in range(max_iters):
        recompute_potentials()
        reduced = cost - u[:, None] - v[None, :]
        reduced[basic_mask] = 0.0
        if iteration < dantzig_limit:
            flat = int(np.argmin(reduced))
            enter = (flat // n, flat % n)
            if reduced[enter] >= -_EPS:
                break
        else:
            # Bland-style fallback guards against degenerate cycling.
            coords = np.argwhere(reduced < -_EPS)
            if coords.size == 0:
                break
            enter = (int(coords[0][0]), int(coords[0][1]))

        cycle = cycle_for(*enter)
        minus_cells = cycle[1::2]
        theta = min(flow[c] for c in minus_cells)
        leave = min(c for c in minus_cells if flow[c] <= theta + _EPS)
        for k, cell in enumerate(cycle):
            if k % 2 == 0:
                flow[cell] += theta
            else:
                flow[cell] -= theta
        flow[leave] = 0.0
        row_adj[leave[0]].discard(leave[1])
        col_adj[leave[1]].discard(leave[0])
        basic_mask[leave] = False
        row_adj[enter[0]].add(enter[1])
        col_adj[enter[1]].add(enter[0])
        basic_mask[enter] = True
    else:
        raise RuntimeError("transport solver failed to converge")

    np.clip(flow, 0.0, None, out=flow)
    recompute_potentials()
    total = float((flow * cost).sum())
    return TransportPlan(flow=flow, cost=total, u=u.copy(), v=v.copy())

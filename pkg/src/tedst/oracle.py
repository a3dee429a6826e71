"""Exhaustive tree edit distance for small trees.

Enumerates every valid mapping between the two trees (one-to-one pairs that
preserve ancestry and left-to-right order) and returns the cheapest.  Used
only to check :func:`tedst.ted.ted`; it shares no code with the DP.
"""

from __future__ import annotations

from tedst.costs import CostModel, OpKind
from tedst.tree import OrderedTree

DEFAULT_BOUND = 16


class OracleBoundError(ValueError):
    pass


def _ancestry(tree: OrderedTree):
    """anc[a][b] is True when node a is a proper ancestor of node b."""
    n = tree.n
    anc = [[False] * (n + 1) for _ in range(n + 1)]
    for b in range(1, n + 1):
        a = tree.parent(b)
        while a:
            anc[a][b] = True
            a = tree.parent(a)
    return anc


def brute_force_ted(t1: OrderedTree, t2: OrderedTree, costs: CostModel,
                    bound: int = DEFAULT_BOUND) -> float:
    m, n = t1.n, t2.n
    if m + n > bound:
        raise OracleBoundError(f"{m} + {n} nodes exceeds the oracle bound of {bound}")
    anc1, anc2 = _ancestry(t1), _ancestry(t2)
    dele = [0.0] + [costs.node_cost(OpKind.DELETE, x=t1.label(i)) for i in range(1, m + 1)]
    ins = [0.0] + [costs.node_cost(OpKind.INSERT, y=t2.label(j)) for j in range(1, n + 1)]
    pair = [[0.0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            pair[i][j] = costs.pair_cost(t1.label(i), t2.label(j))[1]
    ins_total = sum(ins)

    best = [float("inf")]
    mapped = []  # (i, j) pairs chosen so far, i and j increasing

    # Nodes are decided in postorder.  Taking targets in increasing order
    # keeps postorder; together with equal ancestry that keeps sibling order.
    def search(i, last_j, cost):
        if cost >= best[0]:
            return
        if i > m:
            total = cost + ins_total - sum(ins[j] for _, j in mapped)
            if total < best[0]:
                best[0] = total
            return
        search(i + 1, last_j, cost + dele[i])
        for j in range(last_j + 1, n + 1):
            if all(anc1[i][pi] == anc2[j][pj] for pi, pj in mapped):
                mapped.append((i, j))
                search(i + 1, j, cost + pair[i][j])
                mapped.pop()

    search(1, 0, 0.0)
    return best[0]

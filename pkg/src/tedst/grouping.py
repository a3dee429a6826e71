"""Collapse node-level edit scripts into subtree operations.

A run of identical operations whose aligned nodes form a whole subtree (of
two or more nodes) becomes one subtree operation.  In the marker string each
collapsed run keeps its final symbol (the subtree root) and every earlier
position becomes ``"+"``, so ``dddmmiiimm`` can turn into ``++d+m++imm``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from tedst.costs import CostModel, OpKind
from tedst.ted import Alignment, EditScript, ScriptError, build_alignment, ted
from tedst.tree import OrderedTree, is_subtree_span

NODE = "node"
SUBTREE = "subtree"


@dataclass(frozen=True)
class GroupedOp:
    kind: OpKind
    granularity: str
    src_span: Optional[tuple] = None
    dst_span: Optional[tuple] = None
    cost: Optional[float] = None

    @property
    def size(self) -> int:
        span = self.src_span or self.dst_span
        return span[1] - span[0] + 1


@dataclass(frozen=True)
class GroupedScript:
    ops: tuple
    marker_string: str
    source: OrderedTree
    target: OrderedTree
    total_cost: Optional[float] = None
    scan_steps: int = 0

    def __len__(self):
        return len(self.ops)

    def describe(self) -> list:
        """Human-readable lines, one per grouped operation."""
        verbs = {"d": "delete", "i": "insert", "x": "exchange", "m": "keep"}
        lines = []
        for op in self.ops:
            parts = []
            if op.src_span:
                parts.append(_span_text(self.source, op.src_span))
            if op.dst_span:
                parts.append(_span_text(self.target, op.dst_span))
            what = " -> ".join(parts)
            cost = "" if op.cost is None else f"  [{op.cost:g}]"
            lines.append(f"{verbs[op.kind.value]} {op.granularity} {what}{cost}")
        return lines


def _span_text(tree, span):
    words = [tree.label(k).surface for k in range(span[0], span[1] + 1)]
    return "(" + ", ".join(words) + ")" if len(words) > 1 else words[0]


def _runs(kinds: str):
    start = 0
    for pos in range(1, len(kinds) + 1):
        if pos == len(kinds) or kinds[pos] != kinds[start]:
            yield start, pos - 1
            start = pos


def group_script(script: EditScript, align: Alignment, t1: OrderedTree,
                 t2: OrderedTree) -> GroupedScript:
    """Group ``script`` into node and subtree operations; costs are left unset.

    Each maximal run of one op kind is scanned from its right end.  Only one
    start can make ``[start, end]`` a subtree span (the leftmost leaf of the
    node at ``end``), so the longest qualifying suffix is found directly; if
    it lies inside the run and has two or more nodes it is collapsed, and the
    scan resumes just left of it.  Otherwise ``end`` stays a node operation.
    """
    kinds = script.kinds
    if len(align) != len(kinds):
        raise ScriptError(f"alignment length {len(align)} != script length {len(kinds)}")
    for pos, (op, a, b) in enumerate(zip(script.ops, align.s1, align.s2), start=1):
        want_a = op.src if op.kind != OpKind.INSERT else None
        want_b = op.dst if op.kind != OpKind.DELETE else None
        if a != want_a or b != want_b:
            raise ScriptError(f"alignment disagrees with script at position {pos}")

    s1, s2 = align.s1, align.s2
    markers = list(kinds)
    groups = []
    steps = 0
    for first, last in _runs(kinds):
        kind = OpKind(kinds[first])
        end = last
        run_groups = []
        while end >= first:
            steps += 1
            start = _span_start(kind, end, s1, s2, t1, t2)
            if start is not None and first <= start < end:
                steps += 1
                if _collapsible(kind, start, end, s1, s2, t1, t2):
                    for p in range(start, end):
                        markers[p] = "+"
                    run_groups.append(_make(kind, SUBTREE, start, end, s1, s2))
                    end = start - 1
                    continue
            run_groups.append(_make(kind, NODE, end, end, s1, s2))
            end -= 1
        groups.extend(reversed(run_groups))

    return GroupedScript(tuple(groups), "".join(markers), t1, t2, scan_steps=steps)


def _span_start(kind, end, s1, s2, t1, t2):
    """Script position where a subtree ending at ``end`` would have to begin."""
    if kind == OpKind.INSERT:
        return end - (s2[end] - t2.leftmost(s2[end]))
    start = end - (s1[end] - t1.leftmost(s1[end]))
    if kind == OpKind.DELETE:
        return start
    other = end - (s2[end] - t2.leftmost(s2[end]))
    return start if other == start else None


def _collapsible(kind, start, end, s1, s2, t1, t2) -> bool:
    if kind == OpKind.DELETE:
        return is_subtree_span(t1, s1[start], s1[end])
    if kind == OpKind.INSERT:
        return is_subtree_span(t2, s2[start], s2[end])
    return is_subtree_span(t1, s1[start], s1[end]) and is_subtree_span(t2, s2[start], s2[end])


def _make(kind, granularity, start, end, s1, s2):
    src = (s1[start], s1[end]) if kind != OpKind.INSERT else None
    dst = (s2[start], s2[end]) if kind != OpKind.DELETE else None
    return GroupedOp(kind, granularity, src, dst)


def assign_group_costs(gs: GroupedScript, costs: CostModel) -> GroupedScript:
    t1, t2 = gs.source, gs.target
    priced = []
    for op in gs.ops:
        xs = [t1.label(k) for k in range(op.src_span[0], op.src_span[1] + 1)] if op.src_span else None
        ys = [t2.label(k) for k in range(op.dst_span[0], op.dst_span[1] + 1)] if op.dst_span else None
        if op.granularity == SUBTREE:
            c = costs.subtree_cost(op.kind, xs, ys)
        else:
            c = costs.node_cost(op.kind, xs[0] if xs else None, ys[0] if ys else None)
        priced.append(replace(op, cost=c))
    return replace(gs, ops=tuple(priced), total_cost=sum(op.cost for op in priced))


def ted_st(t1: OrderedTree, t2: OrderedTree, costs: CostModel) -> GroupedScript:
    """Node-optimal script, then subtree grouping, priced under ``costs``."""
    script = ted(t1, t2, costs)
    align = build_alignment(t1, t2, script)
    return assign_group_costs(group_script(script, align, t1, t2), costs)

"""Zhang-Shasha tree edit distance that also records the edit script.

Alongside the usual tree-distance table ``D`` and per-keyroot forest table
``FD`` the DP keeps, for every cell, the sequence of node operations that
achieves its cost.  Sequences are kept as small binary ropes so that both
appending an operation and splicing in a stored subtree script are O(1); the
final script is flattened once at the end.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from tedst.costs import CostModel, OpKind, fold, labels_match
from tedst.tree import OrderedTree, keyroots

GAP = None


class ScriptError(ValueError):
    """An edit script does not fit the trees it is applied to."""


@dataclass(frozen=True)
class EditOp:
    kind: OpKind
    src: Optional[int] = None
    dst: Optional[int] = None
    cost: float = 0.0

    def __post_init__(self):
        kind = OpKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind == OpKind.DELETE and (self.src is None or self.dst is not None):
            raise ValueError("delete carries a source index only")
        if kind == OpKind.INSERT and (self.dst is None or self.src is not None):
            raise ValueError("insert carries a target index only")
        if kind in (OpKind.EXCHANGE, OpKind.MATCH) and (self.src is None or self.dst is None):
            raise ValueError(f"{kind.name.lower()} needs both indices")


@dataclass(frozen=True)
class EditScript:
    ops: tuple
    total_cost: float

    @property
    def kinds(self) -> str:
        return "".join(op.kind.value for op in self.ops)

    def __len__(self):
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def mapping(self) -> list:
        """(src, dst) pairs of the match and exchange operations."""
        return [(op.src, op.dst) for op in self.ops if op.src is not None and op.dst is not None]


@dataclass(frozen=True)
class Alignment:
    s1: tuple
    s2: tuple

    def __len__(self):
        return len(self.s1)

    def kinds(self, t1: OrderedTree, t2: OrderedTree) -> str:
        out = []
        for a, b in zip(self.s1, self.s2):
            if a is GAP:
                out.append("i")
            elif b is GAP:
                out.append("d")
            else:
                out.append("m" if labels_match(t1.label(a), t2.label(b)) else "x")
        return "".join(out)

    def render(self, t1: OrderedTree, t2: OrderedTree, kinds: str = "") -> str:
        """Two gap-padded rows, optionally with the op string between them."""
        top = [t1.label(a).surface if a is not GAP else "_" for a in self.s1]
        bottom = [t2.label(b).surface if b is not GAP else "_" for b in self.s2]
        rows = [top]
        if kinds:
            rows.append(list(kinds))
        rows.append(bottom)
        widths = [max(len(r[k]) for r in rows) for k in range(len(top))]
        names = ["S1:", "", "S2:"] if kinds else ["S1:", "S2:"]
        return "\n".join(
            f"{name:<4}" + " ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
            for name, row in zip(names, rows)
        )


def _flatten(rope) -> list:
    out = []
    stack = [rope]
    while stack:
        node = stack.pop()
        if node is None:
            continue
        if isinstance(node, EditOp):
            out.append(node)
        else:
            stack.append(node[1])
            stack.append(node[0])
    return out


def ted(t1: OrderedTree, t2: OrderedTree, costs: CostModel) -> EditScript:
    """Minimum-cost edit script transforming ``t1`` into ``t2``.

    On cost ties the diagonal (match/exchange) wins over delete, and delete
    over insert.
    """
    if not t1.n or not t2.n:
        raise ValueError("trees must be non-empty")
    m, n = t1.n, t2.n
    l1 = (0,) + t1.lld
    l2 = (0,) + t2.lld

    dele = [None] + [EditOp(OpKind.DELETE, src=i, cost=costs.node_cost(OpKind.DELETE, x=t1.label(i)))
                     for i in range(1, m + 1)]
    ins = [None] + [EditOp(OpKind.INSERT, dst=j, cost=costs.node_cost(OpKind.INSERT, y=t2.label(j)))
                    for j in range(1, n + 1)]

    dist = [[0.0] * (n + 1) for _ in range(m + 1)]
    path = [[None] * (n + 1) for _ in range(m + 1)]

    for x in keyroots(t1):
        lx = l1[x]
        for y in keyroots(t2):
            ly = l2[y]
            # fd[a][b]: forest lx..lx+a-1 of t1 against ly..ly+b-1 of t2.
            rows, cols = x - lx + 2, y - ly + 2
            fd = [[0.0] * cols for _ in range(rows)]
            fp = [[None] * cols for _ in range(rows)]
            for a in range(1, rows):
                op = dele[lx + a - 1]
                fd[a][0] = fd[a - 1][0] + op.cost
                fp[a][0] = (fp[a - 1][0], op)
            for b in range(1, cols):
                op = ins[ly + b - 1]
                fd[0][b] = fd[0][b - 1] + op.cost
                fp[0][b] = (fp[0][b - 1], op)

            for a in range(1, rows):
                i = lx + a - 1
                dop = dele[i]
                whole_i = l1[i] == lx
                fd_prev, fp_prev = fd[a - 1], fp[a - 1]
                fd_row, fp_row = fd[a], fp[a]
                for b in range(1, cols):
                    j = ly + b - 1
                    iop = ins[j]
                    if whole_i and l2[j] == ly:
                        kind, c = costs.pair_cost(t1.label(i), t2.label(j))
                        diag = fd_prev[b - 1] + c
                        diag_path = (fp_prev[b - 1], EditOp(kind, src=i, dst=j, cost=c))
                    else:
                        pa, pb = l1[i] - lx, l2[j] - ly
                        diag = fd[pa][pb] + dist[i][j]
                        diag_path = (fp[pa][pb], path[i][j])
                    cost, choice = diag, diag_path
                    d = fd_prev[b] + dop.cost
                    if d < cost:
                        cost, choice = d, (fp_prev[b], dop)
                    ins_cost = fd_row[b - 1] + iop.cost
                    if ins_cost < cost:
                        cost, choice = ins_cost, (fp_row[b - 1], iop)
                    fd_row[b] = cost
                    fp_row[b] = choice
                    if whole_i and l2[j] == ly:
                        dist[i][j] = cost
                        path[i][j] = choice

    ops = tuple(_flatten(path[m][n]))
    return EditScript(ops=ops, total_cost=dist[m][n])


def distance(t1: OrderedTree, t2: OrderedTree, costs: CostModel) -> float:
    return ted(t1, t2, costs).total_cost


def script_from_kinds(kinds: str, t1: OrderedTree, t2: OrderedTree, costs: CostModel) -> EditScript:
    """Attach node indices and costs to a bare op string like ``"dddmmiiimm"``.

    Indices are handed out left to right.  A ``"m"`` over labels that do not
    match is rejected.
    """
    ops = []
    i = j = 0
    for ch in kinds:
        kind = OpKind(ch)
        if kind == OpKind.DELETE:
            i += 1
            _check_range(i, t1, "source")
            ops.append(EditOp(kind, src=i, cost=costs.node_cost(kind, x=t1.label(i))))
        elif kind == OpKind.INSERT:
            j += 1
            _check_range(j, t2, "target")
            ops.append(EditOp(kind, dst=j, cost=costs.node_cost(kind, y=t2.label(j))))
        else:
            i += 1
            j += 1
            _check_range(i, t1, "source")
            _check_range(j, t2, "target")
            actual, c = costs.pair_cost(t1.label(i), t2.label(j))
            if kind == OpKind.MATCH and actual != OpKind.MATCH:
                raise ScriptError(f"'m' at source {i}/target {j} but labels differ")
            ops.append(EditOp(kind, src=i, dst=j, cost=c))
    if i != t1.n or j != t2.n:
        raise ScriptError(f"script covers {i}/{t1.n} source and {j}/{t2.n} target nodes")
    return EditScript(tuple(ops), sum(op.cost for op in ops))


def _check_range(i, tree, side):
    if i > tree.n:
        raise ScriptError(f"{side} index {i} out of range 1..{tree.n}")


def build_alignment(t1: OrderedTree, t2: OrderedTree, script: EditScript) -> Alignment:
    """Line the two postorders up against the script, with gaps at inserts/deletes."""
    s1, s2 = [], []
    last_src = last_dst = 0
    for pos, op in enumerate(script.ops, start=1):
        if op.src is not None:
            if not 1 <= op.src <= t1.n:
                raise ScriptError(f"op {pos}: source index {op.src} out of range 1..{t1.n}")
            if op.src != last_src + 1:
                raise ScriptError(f"op {pos}: source index {op.src} follows {last_src}")
            last_src = op.src
        if op.dst is not None:
            if not 1 <= op.dst <= t2.n:
                raise ScriptError(f"op {pos}: target index {op.dst} out of range 1..{t2.n}")
            if op.dst != last_dst + 1:
                raise ScriptError(f"op {pos}: target index {op.dst} follows {last_dst}")
            last_dst = op.dst
        s1.append(op.src if op.kind != OpKind.INSERT else GAP)
        s2.append(op.dst if op.kind != OpKind.DELETE else GAP)
    if last_src != t1.n or last_dst != t2.n:
        raise ScriptError(f"script covers {last_src}/{t1.n} source and {last_dst}/{t2.n} target nodes")
    return Alignment(tuple(s1), tuple(s2))


def replay(t1: OrderedTree, t2: OrderedTree, script: EditScript) -> tuple:
    """Apply ``script`` to ``t1`` and return the result as nested tuples.

    Each node comes out as ``(folded key, (child, ...))``.  Deleting a node splices
    its children into its parent; an inserted node adopts those current
    children of its parent that it dominates in ``t2``, which must form a
    contiguous block.
    """
    new_label = {}
    kept = {}
    for op in script.ops:
        if op.kind == OpKind.MATCH:
            kept[op.src] = op.dst
            new_label[op.dst] = t1.label(op.src).key
        elif op.kind == OpKind.EXCHANGE:
            kept[op.src] = op.dst
            new_label[op.dst] = t2.label(op.dst).key
        elif op.kind == OpKind.INSERT:
            new_label[op.dst] = t2.label(op.dst).key

    # Deletions: rebuild t1 keeping only mapped nodes, named by their t2 index.
    def collapse(i):
        out = []
        for c in t1.kids(i):
            out.extend(collapse(c))
        if i in kept:
            return [(kept[i], out)]
        return out

    kids = {0: []}

    def register(items):
        names = []
        for dst, sub in items:
            kids[dst] = register(sub)
            names.append(dst)
        return names

    kids[0] = register(collapse(t1.root))

    def is_desc(a, b):
        # a strictly below b in t2
        while a:
            a = t2.parent(a)
            if a == b:
                return True
        return False

    for op in script.ops:
        if op.kind != OpKind.INSERT:
            continue
        j = op.dst
        anc = t2.parent(j)
        while anc and anc not in kids:
            anc = t2.parent(anc)
        siblings = kids[anc]
        block = [k for k, c in enumerate(siblings) if is_desc(c, j)]
        if block and block != list(range(block[0], block[-1] + 1)):
            raise ScriptError(f"insert of target node {j} cannot adopt a contiguous block")
        at = block[0] if block else sum(1 for c in siblings if c < j)
        adopted = [siblings[k] for k in block]
        kids[anc] = siblings[:at] + [j] + siblings[at + len(adopted):]
        kids[j] = adopted

    def build(node):
        return (fold(new_label[node]), tuple(build(c) for c in kids[node]))

    if len(kids[0]) != 1:
        raise ScriptError(f"replay produced a forest of {len(kids[0])} trees")
    return build(kids[0][0])


def as_nested(tree: OrderedTree, i: Optional[int] = None) -> tuple:
    """``tree`` in the nested ``(key, children)`` shape used by :func:`replay`."""
    i = tree.root if i is None else i
    return (fold(tree.label(i).key), tuple(as_nested(tree, c) for c in tree.kids(i)))


def op_cost(op: EditOp, t1: OrderedTree, t2: OrderedTree, costs: CostModel) -> float:
    """Cost of ``op`` recomputed from the cost model."""
    if op.kind == OpKind.DELETE:
        return costs.node_cost(op.kind, x=t1.label(op.src))
    if op.kind == OpKind.INSERT:
        return costs.node_cost(op.kind, y=t2.label(op.dst))
    return costs.node_cost(op.kind, t1.label(op.src), t2.label(op.dst))


def script_cost(ops: Sequence[EditOp], t1: OrderedTree, t2: OrderedTree, costs: CostModel) -> float:
    return sum(op_cost(op, t1, t2, costs) for op in ops)

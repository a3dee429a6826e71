"""Edit cost schedules and the lexical resources behind them.

Three schedules are supported:

``unit``
    delete = insert = exchange = 1, match = 0.  Subtree operations cost the
    sum of their parts.
``illustration``
    unit node costs; every subtree operation costs half the sum of its parts.
``entailment``
    stop-word and subsumption aware costs for premise/hypothesis matching.
    Subtree deletes are free, subtree inserts cost double, subtree exchanges
    cost nothing when both sides are identical and half otherwise.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from typing import Iterable, Optional, Sequence

from tedst.tree import NodeLabel


class OpKind(str, Enum):
    DELETE = "d"
    INSERT = "i"
    EXCHANGE = "x"
    MATCH = "m"

    def __str__(self):
        return self.value


MODEL_KINDS = ("unit", "illustration", "entailment")
RELATIONS = ("synonym", "hypernym", "antonym")


def fold(text: str) -> str:
    return text.casefold()


@dataclass(frozen=True)
class CostConfig:
    model_kind: str = "entailment"
    stopword_delete: float = 5
    word_delete: float = 7
    stopword_insert: float = 5
    word_insert: float = 100
    subsumed_exchange: float = 0
    stopword_exchange: float = 5
    reverse_or_antonym_exchange: float = 100
    default_exchange: float = 50
    subtree_delete: float = 0
    insert_multiplier: float = 2
    exchange_divisor: float = 2
    unit_cost: float = 1
    illustration_divisor: float = 2

    def __post_init__(self):
        if self.model_kind not in MODEL_KINDS:
            raise ValueError(f"unknown cost model {self.model_kind!r}")
        for f in fields(self):
            if f.name == "model_kind":
                continue
            if getattr(self, f.name) < 0:
                raise ValueError(f"{f.name} must be nonnegative")
        if self.exchange_divisor == 0 or self.illustration_divisor == 0:
            raise ValueError("divisors must be positive")

    def with_overrides(self, overrides: dict) -> "CostConfig":
        names = {f.name for f in fields(self)}
        bad = set(overrides) - names
        if bad:
            raise ValueError(f"unknown cost parameter(s): {', '.join(sorted(bad))}")
        return replace(self, **overrides)


class Lexicon:
    """Stop words plus synonym/hypernym/antonym edges between word keys.

    Subsumption is reflexive, follows synonym edges in both directions and
    hypernym edges upwards, to any depth.  Antonymy is only looked up on
    direct edges.  All words are case-folded.
    """

    def __init__(self, stopwords: Iterable[str] = (), relations: Iterable[tuple] = ()):
        self.stopwords = frozenset(fold(w) for w in stopwords)
        self.relations = tuple((fold(a), rel, fold(b)) for a, rel, b in relations)
        up = defaultdict(set)
        antonyms = set()
        for a, rel, b in self.relations:
            if rel == "synonym":
                up[a].add(b)
                up[b].add(a)
            elif rel == "hypernym":
                up[a].add(b)
            elif rel == "antonym":
                antonyms.add((a, b))
                antonyms.add((b, a))
            else:
                raise ValueError(f"unknown relation {rel!r}")
        self._antonyms = frozenset(antonyms)
        self._closure = {w: self._reach(w, up) for w in list(up)}

    @staticmethod
    def _reach(start, up):
        seen = {start}
        stack = [start]
        while stack:
            for nxt in up.get(stack.pop(), ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return frozenset(seen)

    @classmethod
    def empty(cls) -> "Lexicon":
        return cls()

    def is_stopword(self, label: NodeLabel) -> bool:
        return fold(label.surface) in self.stopwords

    def subsumes_key(self, x: str, y: str) -> bool:
        x, y = fold(x), fold(y)
        return x == y or y in self._closure.get(x, ())

    def antonymous(self, x: str, y: str) -> bool:
        return (fold(x), fold(y)) in self._antonyms

    def __repr__(self):
        return f"Lexicon({len(self.stopwords)} stop words, {len(self.relations)} relations)"


def subsumes(x: NodeLabel, y: NodeLabel, lexicon: Lexicon) -> bool:
    """Whether replacing ``x`` by ``y`` is truth preserving (x is y or a kind of y)."""
    return lexicon.subsumes_key(x.key, y.key)


def labels_match(x: NodeLabel, y: NodeLabel) -> bool:
    return fold(x.key) == fold(y.key)


@dataclass(frozen=True)
class CostModel:
    config: CostConfig = field(default_factory=CostConfig)
    lexicon: Lexicon = field(default_factory=Lexicon)

    @property
    def kind(self) -> str:
        return self.config.model_kind

    def node_cost(self, kind: OpKind, x: Optional[NodeLabel] = None,
                  y: Optional[NodeLabel] = None) -> float:
        kind = OpKind(kind)
        if kind != OpKind.INSERT and x is None:
            raise ValueError(f"{kind.name.lower()} needs a source label")
        if kind != OpKind.DELETE and y is None:
            raise ValueError(f"{kind.name.lower()} needs a target label")
        c = self.config
        if kind == OpKind.MATCH:
            return 0.0
        if c.model_kind != "entailment":
            return float(c.unit_cost)

        lex = self.lexicon
        if kind == OpKind.DELETE:
            return float(c.stopword_delete if lex.is_stopword(x) else c.word_delete)
        if kind == OpKind.INSERT:
            return float(c.stopword_insert if lex.is_stopword(y) else c.word_insert)
        # Rules are tried in this order; the first that applies wins.
        if subsumes(x, y, lex):
            return float(c.subsumed_exchange)
        if lex.is_stopword(x):
            return float(c.stopword_exchange)
        if subsumes(y, x, lex) or lex.antonymous(x.key, y.key):
            return float(c.reverse_or_antonym_exchange)
        return float(c.default_exchange)

    def pair_cost(self, x: NodeLabel, y: NodeLabel) -> tuple:
        """Kind and cost of putting ``x`` and ``y`` on the diagonal."""
        if labels_match(x, y):
            return OpKind.MATCH, 0.0
        return OpKind.EXCHANGE, self.node_cost(OpKind.EXCHANGE, x, y)

    def subtree_cost(self, kind: OpKind, xs: Optional[Sequence[NodeLabel]] = None,
                     ys: Optional[Sequence[NodeLabel]] = None) -> float:
        """Cost of one operation applied to a whole subtree of two or more nodes.

        ``xs``/``ys`` are the node labels of the source/target subtree in
        postorder.
        """
        kind = OpKind(kind)
        if kind != OpKind.INSERT and (xs is None or len(xs) < 2):
            raise ValueError("subtree operation needs a source span of at least 2 nodes")
        if kind != OpKind.DELETE and (ys is None or len(ys) < 2):
            raise ValueError("subtree operation needs a target span of at least 2 nodes")
        if kind in (OpKind.EXCHANGE, OpKind.MATCH) and len(xs) != len(ys):
            raise ValueError("paired subtree spans differ in length")

        c = self.config
        if kind == OpKind.DELETE:
            parts = [self.node_cost(kind, x=x) for x in xs]
        elif kind == OpKind.INSERT:
            parts = [self.node_cost(kind, y=y) for y in ys]
        else:
            parts = [self.pair_cost(x, y)[1] for x, y in zip(xs, ys)]

        if c.model_kind == "unit":
            return float(sum(parts))
        if c.model_kind == "illustration":
            return sum(parts) / c.illustration_divisor
        if kind == OpKind.DELETE:
            return float(c.subtree_delete)
        if kind == OpKind.INSERT:
            return c.insert_multiplier * sum(parts)
        if [fold(x.key) for x in xs] == [fold(y.key) for y in ys]:
            return 0.0
        return sum(parts) / c.exchange_divisor


def unit_model() -> CostModel:
    return CostModel(CostConfig(model_kind="unit"))


def illustration_model() -> CostModel:
    return CostModel(CostConfig(model_kind="illustration"))


def entailment_model(lexicon: Optional[Lexicon] = None, **overrides) -> CostModel:
    config = CostConfig(model_kind="entailment").with_overrides(overrides)
    return CostModel(config, lexicon or Lexicon())


def make_model(kind: str, lexicon: Optional[Lexicon] = None, overrides: Optional[dict] = None) -> CostModel:
    config = CostConfig(model_kind=kind).with_overrides(overrides or {})
    return CostModel(config, lexicon or Lexicon())

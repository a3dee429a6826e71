"""Deciding entailment from matching scores, and scoring the decisions.

Tree methods (``zs_ted``, ``ted_st``) and ``levenshtein`` produce distances:
small means the premise entails the hypothesis.  ``bow`` produces a
similarity in [0, 1]: large means entailment.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

from tedst.costs import CostModel, Lexicon, fold, subsumes
from tedst.grouping import ted_st
from tedst.ted import ted
from tedst.tree import NodeLabel, OrderedTree

log = logging.getLogger(__name__)

METHODS = ("bow", "levenshtein", "zs_ted", "ted_st")
YES, NO, UNKNOWN = "yes", "no", "unknown"
DISTANCE, SIMILARITY = "distance", "similarity"
BINARY, THREE_WAY = "binary", "three_way"


@dataclass(frozen=True)
class PairRecord:
    id: str
    premise: OrderedTree
    hypothesis: OrderedTree
    gold: str

    def __post_init__(self):
        if not self.premise.n or not self.hypothesis.n:
            raise ValueError(f"pair {self.id}: empty tree")
        if self.gold not in (YES, NO):
            raise ValueError(f"pair {self.id}: gold label must be yes or no, got {self.gold!r}")


@dataclass(frozen=True)
class Thresholds:
    low: float
    high: Optional[float] = None
    polarity: str = DISTANCE
    degenerate: bool = False

    def __post_init__(self):
        if self.high is None:
            object.__setattr__(self, "high", self.low)
        if self.low > self.high:
            raise ValueError(f"low threshold {self.low} exceeds high threshold {self.high}")
        if self.polarity not in (DISTANCE, SIMILARITY):
            raise ValueError(f"unknown polarity {self.polarity!r}")


@dataclass(frozen=True)
class Decision:
    value: str
    score: float
    method: str = ""


@dataclass
class ClassMetrics:
    precision: float
    recall: float
    f_score: float


@dataclass
class MetricsReport:
    """Evaluation of one run.

    ``confusion`` counts ``(gold, predicted)`` pairs.  For the yes-class
    metrics an ``unknown`` prediction is a non-yes prediction, so ``fn``
    includes unknowns on yes pairs; unknowns on no pairs are kept apart in
    ``unknown_no`` because they are neither correct nor a false yes.
    """

    confusion: dict
    accuracy: float
    per_class: dict = field(default_factory=dict)

    def _count(self, gold, pred):
        return self.confusion.get((gold, pred), 0)

    @property
    def tp(self) -> int:
        return self._count(YES, YES)

    @property
    def fp(self) -> int:
        return self._count(NO, YES)

    @property
    def fn(self) -> int:
        return self._count(YES, NO) + self._count(YES, UNKNOWN)

    @property
    def tn(self) -> int:
        return self._count(NO, NO)

    @property
    def unknown_no(self) -> int:
        return self._count(NO, UNKNOWN)

    @property
    def unknown(self) -> int:
        return self._count(YES, UNKNOWN) + self._count(NO, UNKNOWN)

    @property
    def total(self) -> int:
        return sum(self.confusion.values())

    @property
    def yes(self) -> ClassMetrics:
        return self.per_class[YES]

    def lines(self) -> list:
        out = [f"{'class':<8}{'P':>8}{'R':>8}{'F':>8}"]
        for name, m in self.per_class.items():
            out.append(f"{name:<8}{m.precision:>8.3f}{m.recall:>8.3f}{m.f_score:>8.3f}")
        out.append(f"accuracy {self.accuracy:.3f}")
        out.append(f"tp={self.tp} fp={self.fp} fn={self.fn} tn={self.tn} unknown={self.unknown}")
        return out

    def as_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn, "unknown": self.unknown,
            "per_class": {k: vars(v) for k, v in self.per_class.items()},
        }


@dataclass
class PairResult:
    id: str
    method: str
    score: float
    decision: str
    gold: str
    marker_string: str = ""
    explanation: list = field(default_factory=list)


# -- string baselines -------------------------------------------------------------


def _tokens(tree: OrderedTree) -> list:
    return [tree.label(i) for i in tree.surface_order()]


def bow_score(p: OrderedTree, h: OrderedTree, lexicon: Optional[Lexicon] = None,
              use_lemma: bool = True) -> float:
    """Share of hypothesis tokens matched by some premise token.

    A premise token matches when it has the same key (or surface form if
    ``use_lemma`` is off) or is subsumed by the hypothesis token.  Premise
    tokens are consumed greedily, left to right.
    """
    lexicon = lexicon or Lexicon()
    ptoks = _tokens(p)
    used = [False] * len(ptoks)
    matched = 0
    for y in _tokens(h):
        for k, x in enumerate(ptoks):
            if used[k]:
                continue
            if _same_word(x, y, use_lemma) or _related(x, y, lexicon):
                used[k] = True
                matched += 1
                break
    return matched / h.n


def _same_word(x: NodeLabel, y: NodeLabel, use_lemma: bool) -> bool:
    if use_lemma:
        return fold(x.key) == fold(y.key)
    return fold(x.surface) == fold(y.surface)


def _related(x: NodeLabel, y: NodeLabel, lexicon: Lexicon) -> bool:
    # Identity is left to _same_word so surface mode stays strict.
    return fold(x.key) != fold(y.key) and subsumes(x, y, lexicon)


def token_levenshtein(p_tokens: Sequence[NodeLabel], h_tokens: Sequence[NodeLabel]) -> int:
    prev = list(range(len(h_tokens) + 1))
    for i, x in enumerate(p_tokens, start=1):
        cur = [i] + [0] * len(h_tokens)
        for j, y in enumerate(h_tokens, start=1):
            sub = prev[j - 1] + (0 if fold(x.key) == fold(y.key) else 1)
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, sub)
        prev = cur
    return prev[-1]


# -- decisions and metrics ----------------------------------------------------------


def classify(score: float, th: Thresholds, mode: str = BINARY, method: str = "") -> Decision:
    if mode not in (BINARY, THREE_WAY):
        raise ValueError(f"unknown mode {mode!r}")
    if th.polarity == DISTANCE:
        if mode == BINARY:
            value = YES if score < th.low else NO
        else:
            value = YES if score < th.low else NO if score > th.high else UNKNOWN
    else:
        if mode == BINARY:
            value = YES if score > th.low else NO
        else:
            value = YES if score > th.high else NO if score < th.low else UNKNOWN
    return Decision(value, score, method)


def _prf(tp, fp, fn):
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return ClassMetrics(p, r, f)


def evaluate(decisions: Sequence, gold: Sequence[str]) -> MetricsReport:
    """Per-class P/R/F and accuracy.  ``unknown`` is never a correct answer."""
    if len(decisions) != len(gold):
        raise ValueError(f"{len(decisions)} decisions for {len(gold)} gold labels")
    values = [d.value if isinstance(d, Decision) else d for d in decisions]
    confusion = Counter(zip(gold, values))
    per_class = {}
    for cls, other in ((YES, NO), (NO, YES)):
        hit = confusion[(cls, cls)]
        predicted = hit + confusion[(other, cls)]
        actual = sum(v for (g, _), v in confusion.items() if g == cls)
        per_class[cls] = _prf(hit, predicted - hit, actual - hit)
    correct = confusion[(YES, YES)] + confusion[(NO, NO)]
    accuracy = correct / len(gold) if gold else 0.0
    return MetricsReport(dict(confusion), accuracy, per_class)


# -- pipeline -------------------------------------------------------------------------


def polarity_of(method: str) -> str:
    return SIMILARITY if method == "bow" else DISTANCE


def score_pair(rec: PairRecord, method: str, model: CostModel) -> PairResult:
    marker, explanation = "", []
    if method == "bow":
        score = bow_score(rec.premise, rec.hypothesis, model.lexicon)
    elif method == "levenshtein":
        score = float(token_levenshtein(_tokens(rec.premise), _tokens(rec.hypothesis)))
    elif method == "zs_ted":
        script = ted(rec.premise, rec.hypothesis, model)
        score, marker = script.total_cost, script.kinds
    elif method == "ted_st":
        grouped = ted_st(rec.premise, rec.hypothesis, model)
        score, marker, explanation = grouped.total_cost, grouped.marker_string, grouped.describe()
    else:
        raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
    return PairResult(rec.id, method, score, "", rec.gold, marker, explanation)


def score_dataset(dataset: Sequence[PairRecord], method: str, model: CostModel) -> list:
    return [score_pair(rec, method, model) for rec in dataset]


def run_pipeline(dataset: Sequence[PairRecord], method: str, model: CostModel,
                 th: Thresholds, mode: str = BINARY):
    """Score, classify and evaluate every pair.  Returns ``(report, results)``."""
    if not dataset:
        raise ValueError("empty dataset")
    results = score_dataset(dataset, method, model)
    decisions = []
    for res in results:
        d = classify(res.score, th, mode, method)
        res.decision = d.value
        decisions.append(d)
    report = evaluate(decisions, [rec.gold for rec in dataset])
    return report, results


# -- threshold tuning ------------------------------------------------------------------


def _objective(values, gold, objective):
    report = evaluate(values, gold)
    return report.accuracy if objective == "accuracy" else report.yes.f_score


def _cut_value(distinct, a):
    """A threshold placing exactly the first ``a`` distinct scores below it."""
    if a == 0:
        return distinct[0] - 1.0
    if a == len(distinct):
        return distinct[-1] + 1.0
    return (distinct[a - 1] + distinct[a]) / 2


def tune_thresholds(dev: Sequence[PairRecord], method: str, model: CostModel,
                    mode: str = BINARY, objective: str = "accuracy",
                    scores: Optional[Sequence[float]] = None) -> Thresholds:
    """Grid search over cuts between the dev set's distinct scores.

    Each candidate threshold sits midway between two neighbouring scores.
    When several cuts score equally well the middle one is returned.
    Pass precomputed ``scores`` to skip rescoring.
    """
    gold = [rec.gold for rec in dev]
    if len(set(gold)) < 2:
        raise ValueError("tuning needs both yes and no pairs")
    if objective not in ("accuracy", "f_yes"):
        raise ValueError(f"unknown objective {objective!r}")
    if scores is None:
        scores = [r.score for r in score_dataset(dev, method, model)]
    polarity = polarity_of(method)
    return tune_on_scores(scores, gold, polarity, mode, objective)


def tune_on_scores(scores, gold, polarity=DISTANCE, mode=BINARY, objective="accuracy") -> Thresholds:
    # Similarity scores are negated so one search serves both polarities.
    sign = 1 if polarity == DISTANCE else -1
    keyed = [sign * s for s in scores]
    distinct = sorted(set(keyed))
    if len(distinct) == 1:
        log.warning("all dev scores equal %s; threshold is degenerate", scores[0])
        return Thresholds(scores[0], scores[0], polarity, degenerate=True)

    cuts = range(len(distinct) + 1)
    if mode == BINARY:
        candidates = [(a, a) for a in cuts]
    else:
        candidates = [(a, b) for a in cuts for b in cuts if a <= b]

    results = []
    for a, b in candidates:
        lo, hi = _cut_value(distinct, a), _cut_value(distinct, b)
        values = [YES if s < lo else (NO if s > hi or mode == BINARY else UNKNOWN) for s in keyed]
        results.append((_objective(values, gold, objective), a, b))
    best = max(r[0] for r in results)
    optimal = [(a, b) for score, a, b in results if score == best]
    a, b = optimal[len(optimal) // 2]
    lo, hi = _cut_value(distinct, a), _cut_value(distinct, b)
    if polarity == DISTANCE:
        return Thresholds(lo, hi, polarity)
    # Back in similarity space: yes iff score > high, no iff score < low.
    return Thresholds(-hi, -lo, polarity)

"""Acceptance checks, one test per criterion.

Each test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion (see conftest.py).
"""

import random
import time

import pytest

from helpers import random_pairs, random_tree, small_lexicon_model
from tedst.costs import Lexicon, OpKind, entailment_model, illustration_model, unit_model
from tedst.entailment import classify, evaluate, score_dataset, tune_thresholds
from tedst.grouping import SUBTREE, assign_group_costs, group_script, ted_st
from tedst.oracle import brute_force_ted
from tedst.samples import MODIFIER_STOPWORDS, modifier_pair, worked_trees
from tedst.synthetic import make_corpus
from tedst.ted import as_nested, build_alignment, replay, script_from_kinds, ted
from tedst.tree import NodeLabel, build_tree, is_subtree_span

L = NodeLabel.of
D, I, X, M = OpKind.DELETE, OpKind.INSERT, OpKind.EXCHANGE, OpKind.MATCH


@pytest.fixture(scope="module")
def oracle_pairs():
    return random_pairs(seed=2024, count=1000, max_nodes=8)


@pytest.mark.criterion(1, "worked example distance is 6")
def test_worked_distance():
    t1, t2 = worked_trees()
    start = time.perf_counter()
    script = ted(t1, t2, unit_model())
    elapsed = time.perf_counter() - start
    assert script.total_cost == 6
    # Independent per-op sum of the reference script.
    ref = script_from_kinds("dddmmiiimm", t1, t2, unit_model())
    per_op = 0
    for op in ref.ops:
        if op.kind in (D, I):
            per_op += 1
        elif t1.label(op.src).key != t2.label(op.dst).key:
            per_op += 1
    assert per_op == 6
    assert elapsed < 1.0


@pytest.mark.criterion(2, "grouping of the worked script gives ++d+m++imm and cost 3")
def test_worked_grouping():
    t1, t2 = worked_trees()
    script = script_from_kinds("dddmmiiimm", t1, t2, illustration_model())
    gs = group_script(script, build_alignment(t1, t2, script), t1, t2)
    assert gs.marker_string == "++d+m++imm"
    assert assign_group_costs(gs, illustration_model()).total_cost == 3


@pytest.mark.criterion(3, "modifier deletion costs 19 node-level and 0 grouped")
def test_modifier_pin():
    p, h = modifier_pair()
    model = entailment_model(Lexicon(stopwords=MODIFIER_STOPWORDS))
    assert ted(p, h, model).total_cost == 19
    assert ted_st(p, h, model).total_cost == 0


@pytest.mark.criterion(4, "DP equals brute force on 1000 random pairs, both models")
def test_oracle_equivalence(oracle_pairs):
    assert len(oracle_pairs) >= 1000
    start = time.perf_counter()
    bad = []
    for model in (unit_model(), small_lexicon_model()):
        for k, (t1, t2) in enumerate(oracle_pairs):
            if ted(t1, t2, model).total_cost != brute_force_ted(t1, t2, model):
                bad.append((model.config.model_kind, k))
    assert bad == []
    assert time.perf_counter() - start < 60


@pytest.mark.criterion(5, "identity, symmetry and triangle inequality")
def test_metric_axioms():
    rng = random.Random(5)
    unit, lex = unit_model(), small_lexicon_model()
    violations = 0
    n = 500
    for _ in range(n):
        t = random_tree(rng, rng.randint(1, 10))
        violations += ted(t, t, unit).total_cost != 0
        violations += ted(t, t, lex).total_cost != 0
    for _ in range(n):
        a, b = random_tree(rng, rng.randint(1, 10)), random_tree(rng, rng.randint(1, 10))
        violations += ted(a, b, unit).total_cost != ted(b, a, unit).total_cost
    for _ in range(n):
        a, b, c = (random_tree(rng, rng.randint(1, 8)) for _ in range(3))
        d = lambda x, y: ted(x, y, unit).total_cost
        violations += d(a, c) > d(a, b) + d(b, c)
    assert violations == 0


@pytest.mark.criterion(6, "replaying each script rebuilds t2")
def test_script_replay(oracle_pairs):
    failures = 0
    for model in (unit_model(), small_lexicon_model()):
        for t1, t2 in oracle_pairs:
            failures += replay(t1, t2, ted(t1, t2, model)) != as_nested(t2)
    assert failures == 0


def _descendant_span(tree, span):
    return is_subtree_span(tree, span[0], span[1])


@pytest.mark.criterion(7, "grouped spans are subtrees and partition both trees")
def test_grouping_soundness(oracle_pairs):
    problems = []
    for model in (unit_model(), small_lexicon_model()):
        for k, (t1, t2) in enumerate(oracle_pairs):
            gs = ted_st(t1, t2, model)
            src, dst = [], []
            for op in gs.ops:
                if op.src_span:
                    src.extend(range(op.src_span[0], op.src_span[1] + 1))
                if op.dst_span:
                    dst.extend(range(op.dst_span[0], op.dst_span[1] + 1))
                if op.granularity == SUBTREE:
                    ok = ((op.src_span is None or _descendant_span(t1, op.src_span))
                          and (op.dst_span is None or _descendant_span(t2, op.dst_span)))
                    if not ok:
                        problems.append((k, "span"))
            if sorted(src) != list(range(1, t1.n + 1)) or sorted(dst) != list(range(1, t2.n + 1)):
                problems.append((k, "cover"))
    assert problems == []


@pytest.mark.criterion(8, "all twelve entailment cost cells")
def test_cost_cells():
    lex = Lexicon(stopwords={"the"},
                  relations=[("wombat", "hypernym", "animal"), ("hot", "antonym", "cold")])
    m = entailment_model(lex)
    park, river, the = L("park"), L("river"), L("the")
    cells = [
        (m.node_cost(D, x=the), 5),
        (m.node_cost(D, x=park), 7),
        (m.node_cost(I, y=the), 5),
        (m.node_cost(I, y=park), 100),
        (m.node_cost(X, L("wombat"), L("animal")), 0),
        (m.node_cost(X, the, park), 5),
        (m.node_cost(X, L("animal"), L("wombat")), 100),
        (m.node_cost(X, park, river), 50),
        (m.subtree_cost(D, xs=[the, park]), 0),
        (m.subtree_cost(I, ys=[the, park]), 2 * (5 + 100)),
        (m.subtree_cost(X, [the, park], [the, park]), 0),
        (m.subtree_cost(X, [the, park], [the, river]), (0 + 50) / 2),
    ]
    assert m.node_cost(X, L("hot"), L("cold")) == 100
    assert [got for got, _ in cells] == [want for _, want in cells]


@pytest.mark.criterion(9, "synthetic corpus: grouped F_yes beats node-level F_yes")
def test_synthetic_corpus_ordering():
    dev, dev_lex = make_corpus(200, seed=1)
    test, test_lex = make_corpus(200, seed=0)
    f = {}
    for method in ("bow", "zs_ted", "ted_st"):
        th = tune_thresholds(dev, method, entailment_model(dev_lex), objective="f_yes")
        results = score_dataset(test, method, entailment_model(test_lex))
        report = evaluate([classify(r.score, th) for r in results], [r.gold for r in test])
        f[method] = report.yes.f_score
    print(f"\n  F_yes on the synthetic test corpus: {f}")
    assert f["ted_st"] > f["zs_ted"]


def _star(n):
    return build_tree([0] + [1] * (n - 1), [L("r")] + [L(f"c{k}") for k in range(n - 1)])


def _chain(n):
    return build_tree([0] + list(range(1, n)), [L(f"n{k}") for k in range(n)])


def _worst_case_scripts(length, rng):
    """(script, t1, t2) triples of exactly ``length`` ops with long single-kind runs."""
    out = []

    def add(kinds, t1, t2):
        out.append((script_from_kinds(kinds, t1, t2, unit_model()), t1, t2))

    for shape in (_star, _chain, lambda n: random_tree(rng, n, "ab")):
        t = shape(length)
        root = build_tree([0], [t.label(t.root)])
        add("m" * length, t, t)
        add("d" * (length - 1) + "m", t, root)
        add("i" * (length - 1) + "m", root, t)
    half = length // 2
    a = build_tree([0] + [1] * (half - 1), [L("r")] + [L("a")] * (half - 1))
    # The root exchange consumes a node from each side.
    rest = length - half
    b = build_tree([0] + list(range(1, rest + 1)), [L("s")] * (rest + 1))
    add("d" * (half - 1) + "i" * rest + "x", a, b)
    return out


@pytest.mark.criterion(10, "grouping pass is within c*L^2 steps")
def test_grouping_step_bound():
    c = 1.0
    rng = random.Random(10)
    ratios = {}
    for length in (50, 100, 200):
        worst = 0
        for script, t1, t2 in _worst_case_scripts(length, rng):
            assert len(script.kinds) == length
            gs = group_script(script, build_alignment(t1, t2, script), t1, t2)
            worst = max(worst, gs.scan_steps)
        ratios[length] = worst / length ** 2
        assert worst <= c * length ** 2
    print(f"\n  worst steps / L^2: {ratios}")

import random

from hypothesis import strategies as st

from tedst.costs import Lexicon, entailment_model
from tedst.tree import NodeLabel, build_tree

ALPHABET = "abcd"


def random_tree(rng: random.Random, n: int, alphabet: str = ALPHABET):
    """Random recursive tree: token k's head is an earlier token."""
    heads = [0] + [rng.randint(1, k) for k in range(1, n)]
    return build_tree(heads, [NodeLabel.of(rng.choice(alphabet)) for _ in range(n)])


def random_pairs(seed: int, count: int, max_nodes: int = 8):
    rng = random.Random(seed)
    return [(random_tree(rng, rng.randint(1, max_nodes)), random_tree(rng, rng.randint(1, max_nodes)))
            for _ in range(count)]


def small_lexicon_model():
    """Entailment costs over the test alphabet with every rule reachable."""
    lex = Lexicon(stopwords={"a"},
                  relations=[("b", "hypernym", "c"), ("c", "antonym", "d"), ("d", "synonym", "a")])
    return entailment_model(lex)


@st.composite
def trees(draw, max_nodes=12, alphabet=ALPHABET):
    n = draw(st.integers(1, max_nodes))
    heads = [0] + [draw(st.integers(1, k)) for k in range(1, n)]
    labels = [NodeLabel.of(draw(st.sampled_from(alphabet))) for _ in range(n)]
    return build_tree(heads, labels)


def descendants(tree, i):
    """Nodes under ``i`` (inclusive) by walking parent pointers."""
    out = set()
    for k in range(1, tree.n + 1):
        a = k
        while a:
            if a == i:
                out.add(k)
                break
            a = tree.parent(a)
    return out

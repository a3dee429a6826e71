"""Synthetic premise/hypothesis pairs over random dependency trees.

Positive pairs drop one whole modifier subtree (two or more words) from the
premise, and sometimes also swap a noun for one of its hypernyms.  Negative
pairs keep the structure but replace two or three content words with
unrelated ones.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from tedst.costs import Lexicon
from tedst.entailment import NO, YES, PairRecord
from tedst.tree import NodeLabel, build_tree

STOPWORDS = ("the", "a", "of", "in", "on", "by", "to", "with")
PREPOSITIONS = ("in", "on", "by", "with", "of", "to")
DETERMINERS = ("the", "a")


@dataclass
class _Node:
    word: str
    rel: str
    left: list = field(default_factory=list)
    right: list = field(default_factory=list)
    content: bool = True
    modifier: bool = False

    def walk(self):
        yield self
        for c in self.left + self.right:
            yield from c.walk()

    def size(self):
        return sum(1 for _ in self.walk())

    def copy(self):
        return _Node(self.word, self.rel, [c.copy() for c in self.left],
                     [c.copy() for c in self.right], self.content, self.modifier)


class Vocabulary:
    """Nouns, verbs and adjectives, with a shallow hypernym hierarchy over nouns."""

    def __init__(self, rng: random.Random, nouns=240, verbs=60, adjectives=80, categories=24):
        self.nouns = [f"n{k:03d}" for k in range(nouns)]
        self.verbs = [f"v{k:03d}" for k in range(verbs)]
        self.adjectives = [f"j{k:03d}" for k in range(adjectives)]
        self.categories = [f"c{k:02d}" for k in range(categories)]
        self.hypernym = {w: rng.choice(self.categories) for w in self.nouns[: nouns // 2]}

    def lexicon(self) -> Lexicon:
        return Lexicon(stopwords=STOPWORDS,
                       relations=[(w, "hypernym", c) for w, c in self.hypernym.items()])


def _np(rng, vocab, depth, max_words):
    noun = _Node(rng.choice(vocab.nouns), "OBJ")
    if rng.random() < 0.8:
        noun.left.append(_Node(rng.choice(DETERMINERS), "DET", content=False))
    for _ in range(rng.randint(0, 2)):
        noun.left.append(_Node(rng.choice(vocab.adjectives), "ATT"))
    if depth > 0 and noun.size() + 3 <= max_words and rng.random() < 0.7:
        noun.right.append(_pp(rng, vocab, depth - 1, max_words - noun.size()))
    return noun


def _pp(rng, vocab, depth, max_words):
    prep = _Node(rng.choice(PREPOSITIONS), "MOD", content=False, modifier=True)
    prep.right.append(_np(rng, vocab, depth, max_words - 1))
    return prep


def _sentence(rng, vocab):
    verb = _Node(rng.choice(vocab.verbs), "ROOT")
    subj = _np(rng, vocab, 0, 4)
    subj.rel = "SBJ"
    verb.left.append(subj)
    for _ in range(rng.randint(1, 2)):
        verb.right.append(_np(rng, vocab, rng.randint(0, 1), 8))
    # The modifier that positives will drop: a prepositional phrase whose
    # size varies widely, so per-node deletion costs vary widely too.
    verb.right.append(_pp(rng, vocab, rng.randint(0, 5), rng.randint(3, 24)))
    return verb


def _to_tree(root: _Node):
    order = []

    def emit(node, head):
        for c in node.left:
            emit(c, node)
        order.append((node, head))
        for c in node.right:
            emit(c, node)

    emit(root, None)
    pos = {id(node): k for k, (node, _) in enumerate(order, start=1)}
    heads = [pos[id(head)] if head is not None else 0 for _, head in order]
    labels = [NodeLabel(surface=node.word, rel=node.rel) for node, _ in order]
    return build_tree(heads, labels)


def _parent_map(root):
    out = {}
    for node in root.walk():
        for c in node.left + node.right:
            out[id(c)] = node
    return out


def _positive(rng, vocab, premise):
    hyp = premise.copy()
    parents = _parent_map(hyp)
    mods = [n for n in hyp.walk() if n.modifier and n.size() >= 2]
    # Prefer the large top-level modifier half the time so sizes spread out.
    target = mods[0] if rng.random() < 0.5 else rng.choice(mods)
    owner = parents[id(target)]
    owner.right = [c for c in owner.right if c is not target]
    owner.left = [c for c in owner.left if c is not target]
    if rng.random() < 0.5:
        swappable = [n for n in hyp.walk() if n.word in vocab.hypernym]
        if swappable:
            node = rng.choice(swappable)
            node.word = vocab.hypernym[node.word]
    return hyp


def _negative(rng, vocab, premise):
    hyp = premise.copy()
    content = [n for n in hyp.walk() if n.content]
    for node in rng.sample(content, min(len(content), rng.randint(2, 3))):
        pool = vocab.verbs if node.rel == "ROOT" else (
            vocab.adjectives if node.rel == "ATT" else vocab.nouns)
        choices = [w for w in pool if w != node.word and w not in vocab.hypernym]
        node.word = rng.choice(choices)
    return hyp


def make_corpus(n_pairs: int = 200, seed: int = 0):
    """Balanced corpus of ``n_pairs`` pairs and the lexicon it was built with."""
    rng = random.Random(seed)
    vocab = Vocabulary(rng)
    records = []
    for k in range(n_pairs):
        premise = _sentence(rng, vocab)
        if k % 2 == 0:
            hyp, gold = _positive(rng, vocab, premise), YES
        else:
            hyp, gold = _negative(rng, vocab, premise), NO
        records.append(PairRecord(f"s{seed}-{k:04d}", _to_tree(premise), _to_tree(hyp), gold))
    return records, vocab.lexicon()

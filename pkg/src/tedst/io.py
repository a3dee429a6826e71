"""Readers and writers: CoNLL dependency trees, bracket trees, lexicon files."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from tedst.costs import RELATIONS, CostConfig, Lexicon
from tedst.tree import NodeLabel, OrderedTree, TreeError, build_tree

DELIMITERS = "(),\\"


class ParseError(ValueError):
    """Malformed input.  ``where`` is a line number or character offset."""

    def __init__(self, message: str, where: Optional[int] = None):
        super().__init__(message)
        self.where = where


# -- CoNLL -------------------------------------------------------------------


@dataclass(frozen=True)
class ConllToken:
    id: int
    form: str
    lemma: str
    cpostag: str
    postag: str
    feats: str
    head: int
    deprel: str

    def columns(self) -> list:
        return [str(self.id), self.form, self.lemma, self.cpostag, self.postag,
                self.feats, str(self.head), self.deprel]


def _split(line):
    return line.split("\t") if "\t" in line else line.split()


def read_conll_blocks(text: str, first_line: int = 1) -> list:
    """Split CoNLL text into sentences of :class:`ConllToken` with line numbers.

    Returns ``[(tokens, line_numbers), ...]``.  Lines starting with ``#`` are
    skipped.  Columns past DEPREL are ignored.
    """
    blocks = []
    tokens, lines = [], []
    for lineno, raw in enumerate(text.splitlines(), start=first_line):
        line = raw.rstrip("\r\n")
        if not line.strip():
            if tokens:
                blocks.append((tokens, lines))
                tokens, lines = [], []
            continue
        if line.startswith("#"):
            continue
        cols = _split(line)
        if len(cols) < 8:
            raise ParseError(f"line {lineno}: expected at least 8 columns, found {len(cols)}", lineno)
        try:
            tid, head = int(cols[0]), int(cols[6])
        except ValueError:
            raise ParseError(f"line {lineno}: ID and HEAD must be integers", lineno) from None
        if tid != len(tokens) + 1:
            raise ParseError(f"line {lineno}: token id {tid}, expected {len(tokens) + 1}", lineno)
        tokens.append(ConllToken(tid, cols[1], cols[2], cols[3], cols[4], cols[5], head, cols[7]))
        lines.append(lineno)
    if tokens:
        blocks.append((tokens, lines))
    return blocks


def _opt(value):
    return None if value == "_" else value


def tokens_to_tree(tokens, lines=None) -> OrderedTree:
    labels = [
        NodeLabel(surface=t.form, lemma=_opt(t.lemma), tag=_opt(t.postag), rel=_opt(t.deprel),
                  ctag=_opt(t.cpostag), feats=_opt(t.feats))
        for t in tokens
    ]
    try:
        return build_tree([t.head for t in tokens], labels)
    except TreeError as exc:
        lineno = lines[exc.index - 1] if lines and exc.index else (lines[0] if lines else None)
        where = f"line {lineno}: " if lineno else ""
        raise ParseError(f"{where}{exc}", lineno) from None


def parse_conll(text: str) -> list:
    """One :class:`OrderedTree` per sentence block."""
    return [tokens_to_tree(toks, lines) for toks, lines in read_conll_blocks(text)]


def tree_to_tokens(tree: OrderedTree) -> list:
    by_pos = {tree.positions[i - 1]: i for i in range(1, tree.n + 1)}
    out = []
    for pos in sorted(by_pos):
        i = by_pos[pos]
        lab = tree.label(i)
        head = tree.positions[tree.parent(i) - 1] if tree.parent(i) else 0
        out.append(ConllToken(pos, lab.surface, lab.lemma or "_", lab.ctag or "_",
                              lab.tag or "_", lab.feats or "_", head, lab.rel or "_"))
    return out


def write_conll(trees: Iterable[OrderedTree]) -> str:
    blocks = []
    for tree in trees:
        blocks.append("\n".join("\t".join(t.columns()) for t in tree_to_tokens(tree)))
    return "\n\n".join(blocks) + "\n"


# -- bracket notation ---------------------------------------------------------


def parse_bracket(text: str) -> OrderedTree:
    """Parse ``label`` / ``label(child, child, ...)`` notation.

    Delimiters inside labels are escaped with a backslash.  Whitespace around
    labels is ignored.
    """
    heads, labels = [], []
    pos = 0
    n = len(text)

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def read_label():
        nonlocal pos
        skip_ws()
        start = pos
        buf = []
        while pos < n and text[pos] not in "(),":
            if text[pos] == "\\":
                if pos + 1 >= n:
                    raise ParseError(f"offset {pos}: dangling escape", pos)
                buf.append(text[pos + 1])
                pos += 2
            else:
                buf.append(text[pos])
                pos += 1
        label = "".join(buf).strip()
        if not label:
            raise ParseError(f"offset {start}: empty label", start)
        return label

    # Iterative descent: stack of surface positions of open nodes.
    stack = []
    label = read_label()
    labels.append(label)
    heads.append(0)
    while True:
        skip_ws()
        if pos < n and text[pos] == "(":
            stack.append(len(labels))
            pos += 1
        elif pos < n and text[pos] == "," and stack:
            pos += 1
        elif pos < n and text[pos] == ")" and stack:
            stack.pop()
            pos += 1
            if not stack:
                skip_ws()
                if pos != n:
                    raise ParseError(f"offset {pos}: text after the root", pos)
                break
            continue
        elif pos >= n:
            if stack:
                raise ParseError(f"offset {pos}: unbalanced parentheses, {len(stack)} unclosed", pos)
            break
        else:
            raise ParseError(f"offset {pos}: unexpected {text[pos]!r}", pos)
        labels.append(read_label())
        heads.append(stack[-1])
    return build_tree(heads, [NodeLabel.of(s) for s in labels])


def _escape(label: str) -> str:
    return "".join("\\" + ch if ch in DELIMITERS else ch for ch in label)


def render_bracket(tree: OrderedTree, i: Optional[int] = None) -> str:
    i = tree.root if i is None else i
    head = _escape(tree.label(i).surface)
    kids = tree.kids(i)
    if not kids:
        return head
    return head + "(" + ",".join(render_bracket(tree, c) for c in kids) + ")"


def read_tree_file(path, fmt: str = "auto") -> OrderedTree:
    text = Path(path).read_text(encoding="utf-8")
    if fmt == "auto":
        fmt = "conll" if "\t" in text else "bracket"
    if fmt == "bracket":
        return parse_bracket(text.strip())
    trees = parse_conll(text)
    if len(trees) != 1:
        raise ParseError(f"{path}: expected one sentence, found {len(trees)}")
    return trees[0]


# -- lexicon, stop words, cost overrides ---------------------------------------


def parse_relations(text: str) -> list:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise ParseError(f"line {lineno}: expected word<TAB>relation<TAB>word", lineno)
        a, rel, b = (c.strip() for c in cols)
        if rel not in RELATIONS:
            raise ParseError(f"line {lineno}: unknown relation {rel!r}", lineno)
        out.append((a, rel, b))
    return out


def parse_stopwords(text: str) -> set:
    return {line.strip().casefold() for line in text.splitlines() if line.strip()}


def parse_overrides(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"line {lineno}: expected 'name = number'", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key == "model_kind":
            out[key] = value
            continue
        try:
            out[key] = float(value)
        except ValueError:
            raise ParseError(f"line {lineno}: {value!r} is not a number", lineno) from None
    known = set(CostConfig.__dataclass_fields__)
    unknown = set(out) - known
    if unknown:
        raise ParseError(f"unknown cost parameter(s): {', '.join(sorted(unknown))}")
    return out


def load_lexicon(relations_path=None, stopwords_path=None) -> Lexicon:
    relations = parse_relations(Path(relations_path).read_text(encoding="utf-8")) if relations_path else []
    stop = parse_stopwords(Path(stopwords_path).read_text(encoding="utf-8")) if stopwords_path else set()
    return Lexicon(stopwords=stop, relations=relations)


# -- pair files -----------------------------------------------------------------


def parse_pairs(text: str) -> list:
    """Read a pair file into :class:`tedst.entailment.PairRecord` objects.

    Each pair starts with ``# id=<text> gold=<yes|no>`` followed by the
    premise block and the hypothesis block.
    """
    from tedst.entailment import PairRecord

    records = []
    header = None
    chunk = []

    def flush():
        if header is None:
            if any(line.strip() for line, _ in chunk):
                raise ParseError(f"line {chunk[0][1]}: tokens before the first '# id=' header", chunk[0][1])
            return
        lineno, meta = header
        body = "\n".join(line for line, _ in chunk)
        first = chunk[0][1] if chunk else lineno + 1
        blocks = read_conll_blocks(body, first_line=first)
        if len(blocks) != 2:
            raise ParseError(
                f"line {lineno}: pair {meta.get('id')!r} has {len(blocks)} sentence blocks, expected 2 "
                "(premise and hypothesis)", lineno)
        p, h = (tokens_to_tree(toks, lines) for toks, lines in blocks)
        records.append(PairRecord(meta["id"], p, h, meta["gold"]))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped.startswith("#") and "id=" in stripped:
            flush()
            meta = dict(part.split("=", 1) for part in stripped.lstrip("#").split() if "=" in part)
            if "id" not in meta or meta.get("gold") not in ("yes", "no"):
                raise ParseError(f"line {lineno}: header needs id=<text> gold=<yes|no>", lineno)
            header = (lineno, meta)
            chunk = []
        else:
            chunk.append((raw, lineno))
    flush()
    return records


def write_pairs(records) -> str:
    parts = []
    for rec in records:
        parts.append(f"# id={rec.id} gold={rec.gold}\n" + write_conll([rec.premise, rec.hypothesis]))
    return "\n".join(parts)

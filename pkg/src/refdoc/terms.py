"""Per-class frequent n-gram mining and the wildcard pattern catalog.

The bundled catalog reproduces the published per-type term tables: a
trailing `*` on a pattern word matches any suffix and `[]` matches exactly
one word. Matching runs over lightly normalized raw text (lowercased,
punctuation-stripped words) because the patterns encode their own
stemming.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Dict, List, Tuple

from . import textprep
from .corpus import Dataset, RefactoringType, parse_label
from .errors import InsufficientClass
from .features import Ngram

_WORD_RE = re.compile(r"[a-z0-9]+")
_ANY = object()  # the [] wildcard


@dataclass(frozen=True)
class TermTable:
    label: RefactoringType
    rows: Tuple[Tuple[Ngram, int], ...]  # ranked by doc frequency desc


def frequent_ngrams(dataset: Dataset, label: RefactoringType, n: int,
                    top_k: int) -> TermTable:
    """Most document-frequent n-grams (n = 2 or 3) of one class.

    Frequencies count documents containing the n-gram, not occurrences;
    ties rank lexicographically.
    """
    if n not in (2, 3):
        raise ValueError("n must be 2 or 3")
    docs = [r for r in dataset if r.label == label]
    if not docs:
        raise InsufficientClass(label.value, 0, 1)
    df: Dict[Ngram, int] = {}
    for rec in docs:
        tokens = textprep.preprocess(rec.message)
        grams = {tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1)}
        for gram in grams:
            df[gram] = df.get(gram, 0) + 1
    ranked = sorted(df.items(), key=lambda kv: (-kv[1], kv[0]))
    return TermTable(label=label, rows=tuple(ranked[:max(top_k, 0)]))


def _parse_pattern(text: str):
    """Pattern -> matcher tokens: literal word, prefix, or any-word."""
    tokens = []
    for raw in text.split():
        if raw == "[]":
            tokens.append(_ANY)
            continue
        for piece in re.split(r"[^a-z0-9*]+", raw.lower()):
            if not piece:
                continue
            if piece.endswith("*"):
                tokens.append(("prefix", piece.rstrip("*")))
            else:
                tokens.append(("word", piece))
    return tokens


class PatternCatalog:
    """Per-class wildcard patterns, user-extensible via the data file."""

    def __init__(self, patterns: Dict[RefactoringType, List[str]]):
        self.patterns = patterns
        self._compiled = {
            cls: [(p, _parse_pattern(p)) for p in plist]
            for cls, plist in patterns.items()
        }

    @classmethod
    def from_text(cls, text: str) -> "PatternCatalog":
        patterns: Dict[RefactoringType, List[str]] = {}
        current = None
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("[") and line.endswith("]"):
                current = parse_label(line[1:-1])
                patterns.setdefault(current, [])
                continue
            if current is None:
                raise ValueError("pattern before any class header")
            patterns[current].append(line)
        return cls(patterns)


@lru_cache(maxsize=1)
def load_catalog() -> PatternCatalog:
    text = resources.files("refdoc.data").joinpath("pattern_catalog.txt") \
        .read_text("utf-8")
    return PatternCatalog.from_text(text)


def _match_at(words, start, tokens) -> bool:
    if start + len(tokens) > len(words):
        return False
    for offset, tok in enumerate(tokens):
        word = words[start + offset]
        if tok is _ANY:
            continue
        kind, value = tok
        if kind == "word":
            if word != value:
                return False
        elif not word.startswith(value):
            return False
    return True


def match_patterns(message: str, catalog: PatternCatalog = None) -> Dict:
    """All catalog patterns matching the message, grouped by class."""
    if catalog is None:
        catalog = load_catalog()
    words = _WORD_RE.findall(message.lower())
    hits: Dict[RefactoringType, List[str]] = {}
    for cls, compiled in catalog._compiled.items():
        for text, tokens in compiled:
            if not tokens:
                continue
            if any(_match_at(words, i, tokens)
                   for i in range(len(words) - len(tokens) + 1)):
                hits.setdefault(cls, []).append(text)
    return hits

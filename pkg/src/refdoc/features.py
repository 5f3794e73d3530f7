"""N-gram vocabulary, TF-IDF weighting, Fisher ranking, vectorization.

Weighting is pinned for bit-reproducibility: TF is the raw in-document
count, IDF is ln((1+N)/(1+df)) + 1, and document vectors over the selected
features are L2-normalized. Fisher scores are computed over the
unnormalized count*idf values, accumulating documents in dataset order so
results do not depend on internal chunking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy import sparse

from .errors import EmptyCorpus, SingleClass

Ngram = Tuple[str, ...]
FeatureVector = Dict[int, float]

FISHER_EPS = 1e-12
_BLOCK = 4096


def extract_ngrams(tokens: Sequence[str], n_max: int) -> List[Ngram]:
    """All contiguous n-grams of the doc for n = 1..n_max, in reading order."""
    out = []
    for n in range(1, n_max + 1):
        for i in range(len(tokens) - n + 1):
            out.append(tuple(tokens[i:i + n]))
    return out


def count_ngrams(tokens: Sequence[str], n_max: int) -> Dict[Ngram, int]:
    counts: Dict[Ngram, int] = {}
    for gram in extract_ngrams(tokens, n_max):
        counts[gram] = counts.get(gram, 0) + 1
    return counts


@dataclass
class Vocabulary:
    """N-gram feature space with IDF weights and a Fisher-ranked selection.

    Feature ids are dense 0..V-1 in lexicographic n-gram order. `selected`
    lists the chosen feature ids ranked by Fisher score descending with
    lexicographic tie-breaking; lowering k therefore yields a prefix of the
    higher-k selection.
    """

    ngrams: List[Ngram]
    doc_freq: np.ndarray
    idf: np.ndarray
    fisher: np.ndarray
    selected: np.ndarray
    n_max: int
    k_select: int
    index: Dict[Ngram, int] = field(init=False, repr=False)
    _pos: Dict[int, int] = field(init=False, repr=False)

    def __post_init__(self):
        self.index = {g: i for i, g in enumerate(self.ngrams)}
        self._pos = {int(f): p for p, f in enumerate(self.selected)}

    def __len__(self):
        return len(self.ngrams)

    def position(self, feature_id: int):
        """Dense column position of a selected feature id, or None."""
        return self._pos.get(int(feature_id))

    @property
    def n_selected(self) -> int:
        return len(self.selected)


def _count_matrix(docs, ngrams_index, n_max) -> sparse.csr_matrix:
    """Raw n-gram count matrix (docs x all features)."""
    data, indices, indptr = [], [], [0]
    for tokens in docs:
        counts = count_ngrams(tokens, n_max)
        cols = sorted(ngrams_index[g] for g in counts if g in ngrams_index)
        seen = {ngrams_index[g]: c for g, c in counts.items() if g in ngrams_index}
        indices.extend(cols)
        data.extend(seen[c] for c in cols)
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (np.asarray(data, dtype=np.float64),
         np.asarray(indices, dtype=np.int64),
         np.asarray(indptr, dtype=np.int64)),
        shape=(len(docs), len(ngrams_index)),
    )


def fisher_scores(docs, labels, vocab: Vocabulary) -> np.ndarray:
    """Fisher score of every vocabulary feature over count*idf values.

    score(j) = sum_k n_k (mu_kj - mu_j)^2 / (sum_k n_k var_kj + eps) with
    population variances, eps = 1e-12. Classes are visited in canonical
    label order and documents in dataset order, so the result is exactly
    reproducible by a straightforward loop over the same data.
    """
    if len(docs) == 0:
        raise EmptyCorpus("no documents")
    if len(docs) != len(labels):
        raise ValueError("docs and labels length mismatch")
    classes = sorted(set(labels), key=lambda t: t.value)
    if len(classes) < 2:
        raise SingleClass("need at least two distinct labels")

    counts = _count_matrix(docs, vocab.index, vocab.n_max)
    tfidf = counts.multiply(vocab.idf[np.newaxis, :]).tocsc()
    n_docs = len(docs)
    n_feat = len(vocab.ngrams)
    class_rows = {c: [i for i, lab in enumerate(labels) if lab == c]
                  for c in classes}

    scores = np.empty(n_feat, dtype=np.float64)
    for start in range(0, n_feat, _BLOCK):
        stop = min(start + _BLOCK, n_feat)
        block = np.asarray(tfidf[:, start:stop].todense())
        width = stop - start

        mu_all = np.zeros(width)
        for i in range(n_docs):            # dataset order, sequential
            mu_all += block[i]
        mu_all /= n_docs

        num = np.zeros(width)
        den = np.zeros(width)
        for c in classes:                  # canonical class order
            rows = class_rows[c]
            n_k = len(rows)
            mu_k = np.zeros(width)
            for i in rows:
                mu_k += block[i]
            mu_k /= n_k
            ss = np.zeros(width)
            for i in rows:
                d = block[i] - mu_k
                ss += d * d
            diff = mu_k - mu_all
            num += n_k * (diff * diff)
            den += n_k * (ss / n_k)
        scores[start:stop] = num / (den + FISHER_EPS)
    return scores


def build_vocabulary(docs, labels, n_max: int = 2, k_select: int = 5000) -> Vocabulary:
    """Index every n-gram of the corpus, weight it, and rank-select top k.

    Requires at least two documents and two distinct labels. idf uses the
    smoothed formula ln((1+N)/(1+df)) + 1, so idf >= 1 everywhere and a
    feature present in every document scores exactly 1.0.
    """
    if not 1 <= n_max <= 3:
        raise ValueError("n_max must be 1, 2, or 3")
    docs = list(docs)
    labels = list(labels)
    if not docs:
        raise EmptyCorpus("no documents")
    if len(docs) != len(labels):
        raise ValueError("docs and labels length mismatch")
    if len(set(labels)) < 2:
        raise SingleClass("need at least two distinct labels")

    df: Dict[Ngram, int] = {}
    for tokens in docs:
        for gram in set(extract_ngrams(tokens, n_max)):
            df[gram] = df.get(gram, 0) + 1
    if not df:
        raise EmptyCorpus("every document is empty after preprocessing")

    ngrams = sorted(df)
    doc_freq = np.array([df[g] for g in ngrams], dtype=np.int64)
    n_docs = len(docs)
    idf = np.log((1.0 + n_docs) / (1.0 + doc_freq)) + 1.0

    vocab = Vocabulary(
        ngrams=ngrams, doc_freq=doc_freq, idf=idf,
        fisher=np.zeros(len(ngrams)), selected=np.arange(0),
        n_max=n_max, k_select=k_select,
    )
    fisher = fisher_scores(docs, labels, vocab)

    order = sorted(range(len(ngrams)), key=lambda j: (-fisher[j], ngrams[j]))
    selected = np.array(order[:min(k_select, len(ngrams))], dtype=np.int64)
    return Vocabulary(
        ngrams=ngrams, doc_freq=doc_freq, idf=idf, fisher=fisher,
        selected=selected, n_max=n_max, k_select=k_select,
    )


def vectorize(tokens, vocab: Vocabulary) -> FeatureVector:
    """TF-IDF vector of one preprocessed doc over the selected features.

    weight(g) = count(g in doc) * idf(g) for selected n-grams, then the
    vector is L2-normalized. Out-of-vocabulary and unselected n-grams are
    ignored; an all-zero doc yields the empty vector.
    """
    weights: Dict[int, float] = {}
    for gram, count in count_ngrams(tokens, vocab.n_max).items():
        fid = vocab.index.get(gram)
        if fid is None or vocab.position(fid) is None:
            continue
        weights[fid] = count * float(vocab.idf[fid])
    if not weights:
        return {}
    norm = math.sqrt(math.fsum(w * w for w in weights.values()))
    return {fid: weights[fid] / norm for fid in sorted(weights)}


def vectors_to_csr(vectors, vocab: Vocabulary) -> sparse.csr_matrix:
    """Stack FeatureVectors into a docs x selected positional CSR matrix."""
    data, indices, indptr = [], [], [0]
    for vec in vectors:
        cols = sorted((vocab.position(fid), w) for fid, w in vec.items())
        indices.extend(c for c, _ in cols)
        data.extend(w for _, w in cols)
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (np.asarray(data, dtype=np.float64),
         np.asarray(indices, dtype=np.int64),
         np.asarray(indptr, dtype=np.int64)),
        shape=(len(indptr) - 1, vocab.n_selected),
    )

"""Small reference tables and seeded synthetic corpora."""

from __future__ import annotations

import string
from pathlib import Path

import numpy as np

from .dtm import DocTermMatrix

TOY_TERMS = ("lion", "tiger", "cheetah", "jaguar", "porsche", "ferrari")
TOY_COUNTS = (
    (2, 2, 1, 2, 0, 0),
    (2, 3, 3, 3, 0, 0),
    (1, 1, 1, 1, 0, 0),
    (2, 2, 2, 3, 1, 1),
    (0, 0, 0, 1, 1, 1),
    (0, 0, 0, 2, 1, 2),
)


def toy_matrix() -> DocTermMatrix:
    """Six documents about big cats and sports cars; docs 1-4 are animals."""
    docs = tuple(f"doc{i}" for i in range(1, 7))
    labels = {d: ("animal" if i < 4 else "car") for i, d in enumerate(docs)}
    return DocTermMatrix(docs, TOY_TERMS, np.array(TOY_COUNTS), labels)


def _letters(i: int, width: int = 3) -> str:
    # term names must survive tokenization, so no digits
    out = []
    for _ in range(width):
        i, r = divmod(i, 26)
        out.append(string.ascii_lowercase[r])
    return "".join(reversed(out))


def _fill_empty(counts: np.ndarray, rng: np.random.Generator, cols) -> np.ndarray:
    for i in np.flatnonzero(counts.sum(axis=1) == 0):
        counts[i, rng.choice(cols)] = 1
    return counts


def two_cluster_corpus(n_docs: int = 40, n_terms: int = 20, rate: float = 3.0, seed: int = 0) -> DocTermMatrix:
    """Two categories with disjoint vocabularies and Poisson counts."""
    rng = np.random.default_rng(seed)
    half = n_docs // 2
    terms = tuple(f"a{_letters(j)}" for j in range(n_terms)) + tuple(f"b{_letters(j)}" for j in range(n_terms))
    counts = np.zeros((n_docs, 2 * n_terms), dtype=np.int64)
    for i in range(n_docs):
        cols = slice(0, n_terms) if i < half else slice(n_terms, 2 * n_terms)
        counts[i, cols] = rng.poisson(rate, n_terms)
        if counts[i].sum() == 0:
            counts[i, cols.start] = 1
    docs = tuple(f"d{i:03d}" for i in range(n_docs))
    labels = {d: ("alpha" if i < half else "beta") for i, d in enumerate(docs)}
    return DocTermMatrix(docs, terms, counts, labels)


def category_corpus(
    n_categories: int = 3,
    docs_per_category: int = 50,
    vocab_size: int = 30,
    overlap: float = 0.2,
    zipf_exponent: float = 1.0,
    median_length: float = 60.0,
    length_sigma: float = 0.6,
    seed: int = 0,
) -> DocTermMatrix:
    """Multinomial documents over category vocabularies that partly overlap.

    Every category draws from ``vocab_size`` terms; a fraction ``overlap``
    of them is shared by all categories.  Term probabilities follow a Zipf
    law with the shared terms on the top ranks (in a category-specific
    order), and document lengths are lognormal.
    """
    rng = np.random.default_rng(seed)
    n_shared = int(round(overlap * vocab_size))
    n_own = vocab_size - n_shared
    shared = [f"common{_letters(j)}" for j in range(n_shared)]
    cats = [f"cat{_letters(c, 1)}" for c in range(n_categories)]
    terms = shared + [f"{cat}{_letters(j)}" for cat in cats for j in range(n_own)]
    index = {t: j for j, t in enumerate(terms)}
    zipf = 1.0 / np.arange(1, vocab_size + 1) ** zipf_exponent
    zipf /= zipf.sum()

    rows, docs, labels = [], [], {}
    for c, cat in enumerate(cats):
        ranked = list(rng.permutation(shared)) + [f"{cat}{_letters(j)}" for j in range(n_own)]
        probs = np.zeros(len(terms))
        probs[[index[t] for t in ranked]] = zipf
        lengths = np.maximum(1, np.round(rng.lognormal(np.log(median_length), length_sigma, docs_per_category)))
        for i, n in enumerate(lengths.astype(int)):
            rows.append(rng.multinomial(n, probs))
            doc = f"{cat}{i:03d}"
            docs.append(doc)
            labels[doc] = cat
    counts = np.array(rows, dtype=np.int64)
    keep = counts.sum(axis=0) > 0
    return DocTermMatrix(
        tuple(docs), tuple(t for t, k in zip(terms, keep) if k), counts[:, keep], labels
    )


def write_corpus_dir(m: DocTermMatrix, root: str | Path) -> Path:
    """Write ``m`` as plain-text files ``<root>/<category>/<doc>.txt``.

    Each file repeats every term as often as it is counted, so building a
    matrix from the directory (with a minimum frequency of 1) gives back
    the same counts.
    """
    root = Path(root)
    labels = m.label_list()
    for doc, label, row in zip(m.docs, labels, m.counts):
        folder = root / label
        folder.mkdir(parents=True, exist_ok=True)
        words = [t for t, n in zip(m.terms, row) for _ in range(int(n))]
        (folder / f"{doc}.txt").write_text(" ".join(words) + "\n", encoding="utf-8")
    return root

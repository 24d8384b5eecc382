"""Document-term matrices: construction, persistence and query alignment."""

from __future__ import annotations

import csv
import logging
import re
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    AllDocumentsEmpty,
    DimensionMismatch,
    EmptyMatrix,
    EmptyQuery,
    FormatError,
    MissingLabels,
    ZeroMargin,
)

log = logging.getLogger(__name__)

LABELS_HEADER = ("doc_id", "category")

_PUNCT = re.compile(r"[^\w\s]|_")
_DIGITS = re.compile(r"\d+")


@dataclass(frozen=True)
class PreprocessOptions:
    lowercase: bool = True
    strip_punctuation: bool = True
    strip_numbers: bool = True
    stopwords: frozenset[str] = frozenset()
    min_term_frequency: int = 10

    def __post_init__(self):
        if self.min_term_frequency < 1:
            raise ValueError("min_term_frequency must be at least 1")
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))


def tokenize(text: str, opts: PreprocessOptions = PreprocessOptions()) -> list[str]:
    """Split ``text`` on whitespace after the configured stripping steps."""
    if opts.lowercase:
        text = text.lower()
    if opts.strip_punctuation:
        text = _PUNCT.sub(" ", text)
    if opts.strip_numbers:
        text = _DIGITS.sub(" ", text)
    stop = {w.lower() for w in opts.stopwords} if opts.lowercase else opts.stopwords
    return [tok for tok in text.split() if tok not in stop]


@dataclass(frozen=True, eq=False)
class DocTermMatrix:
    """Nonnegative integer counts, documents by terms.

    ``labels`` optionally maps document ids to category names.  ``dropped``
    lists ids of documents removed during construction because nothing
    was left of them after preprocessing.
    """

    docs: tuple[str, ...]
    terms: tuple[str, ...]
    counts: np.ndarray
    labels: dict[str, str] | None = None
    dropped: tuple[str, ...] = field(default=())

    def __post_init__(self):
        counts = np.asarray(self.counts)
        if counts.ndim != 2 or counts.size == 0:
            raise EmptyMatrix(f"counts must be a nonempty 2-D array, got shape {counts.shape}")
        if counts.shape != (len(self.docs), len(self.terms)):
            raise DimensionMismatch(
                f"counts shape {counts.shape} does not match "
                f"{len(self.docs)} documents x {len(self.terms)} terms"
            )
        if not np.all(np.isfinite(counts)) or np.any(counts < 0) or np.any(counts != np.round(counts)):
            raise FormatError("counts must be nonnegative integers")
        if len(set(self.terms)) != len(self.terms):
            raise FormatError("duplicate terms")
        if len(set(self.docs)) != len(self.docs):
            raise FormatError("duplicate document ids")
        empty = np.flatnonzero(counts.sum(axis=1) == 0)
        if len(empty):
            raise ZeroMargin(f"document {self.docs[empty[0]]!r} has no terms")
        counts = counts.astype(np.int64)
        counts.setflags(write=False)
        object.__setattr__(self, "docs", tuple(self.docs))
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "counts", counts)

    @property
    def shape(self) -> tuple[int, int]:
        return self.counts.shape

    def label_list(self) -> list[str]:
        """Category of every document, in row order."""
        if self.labels is None:
            raise MissingLabels("matrix has no labels")
        missing = [d for d in self.docs if d not in self.labels]
        if missing:
            raise MissingLabels(f"{len(missing)} documents lack a label, e.g. {missing[0]!r}")
        return [self.labels[d] for d in self.docs]

    def subset(self, rows: Sequence[int]) -> DocTermMatrix:
        """Rows ``rows`` of the matrix; the vocabulary is unchanged."""
        rows = np.asarray(rows, dtype=int)
        docs = tuple(self.docs[i] for i in rows)
        labels = None
        if self.labels is not None:
            labels = {d: self.labels[d] for d in docs if d in self.labels}
        return DocTermMatrix(docs, self.terms, self.counts[rows], labels)

    def drop_empty_terms(self) -> DocTermMatrix:
        """Remove terms whose column is all zero."""
        keep = self.counts.sum(axis=0) > 0
        if keep.all():
            return self
        log.warning("removing %d terms with zero frequency", int((~keep).sum()))
        terms = tuple(t for t, k in zip(self.terms, keep) if k)
        return DocTermMatrix(self.docs, terms, self.counts[:, keep], self.labels, self.dropped)


def build_matrix(
    corpus: Iterable[tuple], opts: PreprocessOptions = PreprocessOptions()
) -> DocTermMatrix:
    """Count terms in ``corpus``, a sequence of ``(doc_id, text[, label])``.

    Terms whose total frequency over the corpus is below
    ``opts.min_term_frequency`` are discarded; documents left without any
    term are dropped and listed in ``DocTermMatrix.dropped``.  Terms are
    ordered lexicographically.
    """
    ids, bags, labels = [], [], {}
    for item in corpus:
        doc_id, text = str(item[0]), item[1]
        if len(item) > 2 and item[2] is not None:
            labels[doc_id] = str(item[2])
        ids.append(doc_id)
        bags.append(Counter(tokenize(text, opts)))
    if not ids:
        raise EmptyMatrix("corpus is empty")

    totals = Counter()
    for bag in bags:
        totals.update(bag)
    terms = sorted(t for t, n in totals.items() if n >= opts.min_term_frequency)
    index = {t: j for j, t in enumerate(terms)}

    counts = np.zeros((len(ids), len(terms)), dtype=np.int64)
    for i, bag in enumerate(bags):
        for t, n in bag.items():
            j = index.get(t)
            if j is not None:
                counts[i, j] = n

    nonempty = counts.sum(axis=1) > 0
    if not nonempty.any():
        raise AllDocumentsEmpty("every document is empty after preprocessing")
    dropped = tuple(d for d, ok in zip(ids, nonempty) if not ok)
    if dropped:
        log.warning("dropped %d empty documents out of %d", len(dropped), len(ids))
    docs = tuple(d for d, ok in zip(ids, nonempty) if ok)
    kept_labels = {d: labels[d] for d in docs if d in labels} if labels else None
    return DocTermMatrix(docs, tuple(terms), counts[nonempty], kept_labels, dropped)


def align_query(m, query, opts: PreprocessOptions | None = None) -> np.ndarray:
    """Count vector of ``query`` over the vocabulary of ``m``.

    ``m`` is a matrix or a fitted model; only its ``terms`` are used.

    ``query`` may be raw text (tokenized with ``opts``), a mapping from
    term to count, or a numeric vector already in vocabulary order.
    Out-of-vocabulary terms are ignored.
    """
    if isinstance(query, str):
        tokens = tokenize(query, opts or PreprocessOptions(min_term_frequency=1))
        query = Counter(tokens)
    if isinstance(query, Mapping):
        index = {t: j for j, t in enumerate(m.terms)}
        vec = np.zeros(len(m.terms))
        for t, n in query.items():
            j = index.get(t)
            if j is not None:
                vec[j] += n
    else:
        vec = np.asarray(query, dtype=np.float64).ravel()
        if vec.shape != (len(m.terms),):
            raise DimensionMismatch(f"query has {vec.size} entries, vocabulary has {len(m.terms)}")
    if not np.any(vec):
        raise EmptyQuery("query contains no in-vocabulary terms")
    return vec


def margins(m: DocTermMatrix) -> tuple[np.ndarray, np.ndarray, int]:
    """Row sums, column sums and grand total of the counts."""
    return m.counts.sum(axis=1), m.counts.sum(axis=0), int(m.counts.sum())


def read_corpus_dir(root: str | Path) -> list[tuple[str, str, str]]:
    """Read ``root/<category>/<doc_id>.txt`` files, sorted by category and name."""
    root = Path(root)
    corpus, seen = [], set()
    for category in sorted(p for p in root.iterdir() if p.is_dir()):
        for path in sorted(category.glob("*.txt")):
            if path.stem in seen:
                raise FormatError(f"document id {path.stem!r} occurs twice")
            seen.add(path.stem)
            corpus.append((path.stem, path.read_text(encoding="utf-8"), category.name))
    if not corpus:
        raise EmptyMatrix(f"no documents found under {root}")
    return corpus


def labels_path_for(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".labels.csv")


def save_matrix(m: DocTermMatrix, path: str | Path, labels_path: str | Path | None = None) -> None:
    """Write counts as CSV and, if the matrix is labeled, a labels sidecar."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["", *m.terms])
        for doc, row in zip(m.docs, m.counts):
            writer.writerow([doc, *row.tolist()])
    if m.labels:
        save_labels(m.labels, labels_path or labels_path_for(path), order=m.docs)


def save_labels(labels: Mapping[str, str], path: str | Path, order: Sequence[str] | None = None) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(LABELS_HEADER)
        for doc in order if order is not None else labels:
            if doc in labels:
                writer.writerow([doc, labels[doc]])


def load_labels(path: str | Path) -> dict[str, str]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if rows and tuple(rows[0]) == LABELS_HEADER:
        rows = rows[1:]
    if any(len(r) != 2 for r in rows):
        raise FormatError(f"{path}: label rows must have exactly two cells")
    return {doc: label for doc, label in rows}


def load_matrix(path: str | Path, labels_path: str | Path | None = None) -> DocTermMatrix:
    """Read a matrix CSV; the labels sidecar is picked up when present."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if len(rows) < 2 or len(rows[0]) < 2:
        raise FormatError(f"{path}: expected a header row and at least one document")
    terms = rows[0][1:]
    docs, values = [], []
    for r in rows[1:]:
        if len(r) != len(terms) + 1:
            raise FormatError(f"{path}: row {r[0]!r} has {len(r) - 1} cells, expected {len(terms)}")
        docs.append(r[0])
        try:
            values.append([int(x) for x in r[1:]])
        except ValueError as exc:
            raise FormatError(f"{path}: row {r[0]!r}: {exc}") from None
    labels = None
    if labels_path is None and labels_path_for(path).exists():
        labels_path = labels_path_for(path)
    if labels_path is not None:
        labels = load_labels(labels_path)
    return DocTermMatrix(tuple(docs), tuple(terms), np.array(values, dtype=np.int64), labels)

"""Text serialization of fitted LSA and CA models.

A model file starts with one line of JSON (the header) followed by
numeric blocks.  Each block opens with ``#block <name> <rows> <cols>``
and holds ``rows`` CSV lines of ``%.17g`` numbers, which round-trips
float64 values exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .ca import CaModel
from .errors import FormatError
from .linalg import SvdResult
from .lsa import LsaModel
from .weighting import FittedWeights, WeightSpec

FORMAT = "dtmf-model"
VERSION = 1


def _write_block(fh, name: str, a) -> None:
    a = np.asarray(a, dtype=np.float64)
    a2 = a.reshape(-1, 1) if a.ndim == 1 else a
    fh.write(f"#block {name} {a2.shape[0]} {a2.shape[1]}\n")
    for row in a2:
        fh.write(",".join("%.17g" % x for x in row) + "\n")


def _read_blocks(lines: list[str]) -> dict[str, np.ndarray]:
    blocks, i = {}, 0
    while i < len(lines):
        head = lines[i].split()
        if len(head) != 4 or head[0] != "#block":
            raise FormatError(f"expected a block header, got {lines[i][:40]!r}")
        name, rows, cols = head[1], int(head[2]), int(head[3])
        body = lines[i + 1 : i + 1 + rows]
        if len(body) != rows:
            raise FormatError(f"block {name!r} is truncated")
        try:
            data = np.array([[float(x) for x in r.split(",")] for r in body], dtype=np.float64)
        except ValueError as exc:
            raise FormatError(f"block {name!r}: {exc}") from None
        blocks[name] = data.reshape(rows, cols)
        i += 1 + rows
    return blocks


def save_model(model: LsaModel | CaModel, path: str | Path) -> None:
    header = {
        "format": FORMAT,
        "version": VERSION,
        "docs": list(model.doc_ids),
        "terms": list(model.terms),
        "labels": model.labels,
    }
    if isinstance(model, LsaModel):
        header.update(type="lsa", weights=model.spec.to_json(), k=model.k,
                      effective_rank=model.svd.effective_rank, n_docs=model.weights.n_docs)
        blocks = {"u": model.svd.u, "sigma": model.svd.sigma, "v": model.svd.v,
                  "global_weights": model.weights.global_weights}
        if model.weights.doc_frequencies is not None:
            blocks["doc_frequencies"] = model.weights.doc_frequencies
    elif isinstance(model, CaModel):
        header.update(type="ca", effective_rank=model.rank, total_inertia=model.total_inertia)
        blocks = {"p": model.p, "row_masses": model.row_masses, "col_masses": model.col_masses,
                  "sigma": model.sigma, "u": model.svd.u, "v": model.svd.v}
    else:
        raise TypeError(f"cannot save {type(model).__name__}")
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for name, a in blocks.items():
            _write_block(fh, name, a)


def load_model(path: str | Path) -> LsaModel | CaModel:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    try:
        header = json.loads(lines[0])
    except (IndexError, json.JSONDecodeError):
        raise FormatError(f"{path}: missing JSON header") from None
    if header.get("format") != FORMAT:
        raise FormatError(f"{path}: not a {FORMAT} file")
    b = _read_blocks(lines[1:])
    docs, terms, labels = tuple(header["docs"]), tuple(header["terms"]), header.get("labels")
    try:
        rank = int(header["effective_rank"])
        if header["type"] == "lsa":
            spec = WeightSpec.from_json(header["weights"])
            df = b.get("doc_frequencies")
            weights = FittedWeights(spec, b["global_weights"].ravel(),
                                    None if df is None else df.ravel().astype(np.int64),
                                    int(header["n_docs"]))
            svd = SvdResult(b["u"], b["sigma"].ravel(), b["v"], rank)
            return LsaModel(spec, weights, svd, int(header["k"]), docs, terms, labels)
        if header["type"] == "ca":
            svd = SvdResult(b["u"], b["sigma"].ravel(), b["v"], rank)
            return CaModel(b["p"], b["row_masses"].ravel(), b["col_masses"].ravel(), svd,
                           float(header["total_inertia"]), docs, terms, labels)
    except KeyError as exc:
        raise FormatError(f"{path}: missing field {exc}") from None
    raise FormatError(f"{path}: unknown model type {header.get('type')!r}")

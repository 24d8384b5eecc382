"""Command-line interface: ``dtmf <command> ...``.

Every command wraps one library call.  Failures print a JSON object
``{"error": <code>, "message": <text>}`` on stderr and exit with status 1.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .ca import CaModel, fit_ca
from .classify import GroupDistanceMethod, LabeledEmbedding, distance_table
from .dtm import PreprocessOptions, align_query, build_matrix, load_labels, load_matrix, read_corpus_dir, save_matrix
from .errors import DtmfError, FormatError, MissingLabels
from .evaluate import LOOCV, EvalSpec, KFold, TrainTest, parse_reduction, run_eval, write_report
from .linalg import ENGINES
from .lsa import LsaModel, fit_lsa
from .persist import load_model, save_model
from .svgplot import scatter_svg

REDUCTIONS = ("raw", "lsa-raw", "lsa-nrowl1", "lsa-nrowl2", "lsa-tfidf", "ca")
METHODS = tuple(m.value for m in GroupDistanceMethod)


def parse_dims(text: str) -> list[int]:
    """``"5"`` or an inclusive range ``"151..184"``."""
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi) if sep else int(lo)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected K or A..B, got {text!r}") from None
    if a < 1 or b < a:
        raise argparse.ArgumentTypeError(f"invalid dimension range {text!r}")
    return list(range(a, b + 1))


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _write_text(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _coords_csv(ids, coords: np.ndarray) -> str:
    lines = [",".join(["id"] + [f"dim{j + 1}" for j in range(coords.shape[1])])]
    for name, row in zip(ids, coords):
        lines.append(",".join([name] + ["%.17g" % x for x in row]))
    return "\n".join(lines) + "\n"


def read_coords(path: str | Path) -> tuple[list[str], np.ndarray]:
    """Inverse of the coordinate CSV written by ``coords`` and ``project``."""
    with Path(path).open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if len(rows) < 2 or rows[0][0] != "id":
        raise FormatError(f"{path}: not a coordinate file")
    try:
        return [r[0] for r in rows[1:]], np.array([[float(x) for x in r[1:]] for r in rows[1:]])
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None


def _preprocess(args) -> PreprocessOptions:
    stop = frozenset()
    if getattr(args, "stopwords", None):
        stop = frozenset(Path(args.stopwords).read_text(encoding="utf-8").split())
    return PreprocessOptions(stopwords=stop, min_term_frequency=getattr(args, "min_term_freq", 1))


def _read_queries(model, path: str, opts: PreprocessOptions) -> tuple[list[str], np.ndarray]:
    """Queries from a count CSV (matrix format) or one plain-text document."""
    p = Path(path)
    if p.suffix.lower() == ".csv":
        qm = load_matrix(p)
        items = [(d, dict(zip(qm.terms, row.tolist()))) for d, row in zip(qm.docs, qm.counts)]
    else:
        items = [(p.stem, p.read_text(encoding="utf-8"))]
    vectors = [align_query(model, q, opts) for _, q in items]
    return [d for d, _ in items], np.vstack(vectors)


def _model_coords(model, side: str, kind: str, k: int | None) -> tuple[tuple[str, ...], np.ndarray]:
    if isinstance(model, CaModel):
        return (model.doc_ids if side == "rows" else model.terms), model.coordinates(side, kind, k)
    if side == "rows":
        return model.doc_ids, model.doc_coordinates(k, kind)
    return model.terms, model.term_coordinates(k, kind)


def _max_dim(model) -> int:
    return model.rank if isinstance(model, CaModel) else model.svd.p


# commands ----------------------------------------------------------------


def cmd_build(args) -> None:
    opts = _preprocess(args)
    m = build_matrix(read_corpus_dir(args.corpus_dir), opts)
    save_matrix(m, args.output)
    print(json.dumps({"docs": m.shape[0], "terms": m.shape[1], "dropped": list(m.dropped)}, sort_keys=True))


def cmd_fit(args) -> None:
    m = load_matrix(args.matrix, args.labels)
    reduction = parse_reduction(args.reduction, args.log_base)
    if reduction == "raw":
        raise ValueError("the raw reduction has no model to fit; use it with 'evaluate'")
    model = fit_ca(m, engine=args.engine) if reduction == "ca" else fit_lsa(m, reduction, args.k, engine=args.engine)
    save_model(model, args.output)


def cmd_coords(args) -> None:
    model = load_model(args.model)
    ids, coords = _model_coords(model, args.side, args.kind, args.k)
    _write_text(_coords_csv(ids, coords), args.output)


def cmd_project(args) -> None:
    model = load_model(args.model)
    ids, q = _read_queries(model, args.query, _preprocess(args))
    _write_text(_coords_csv(ids, model.project(q, args.k)), args.output)


def cmd_classify(args) -> None:
    model: LsaModel | CaModel = load_model(args.model)
    labels = load_labels(args.labels) if args.labels else model.labels
    if not labels:
        raise MissingLabels("model carries no labels; pass --labels")
    missing = [d for d in model.doc_ids if d not in labels]
    if missing:
        raise MissingLabels(f"{len(missing)} training documents lack a label, e.g. {missing[0]!r}")
    dims = args.dims or [args.k or _max_dim(model)]
    top = dims[-1]
    ids, q = _read_queries(model, args.query, _preprocess(args))
    _, train = _model_coords(model, "rows", "principal", top)
    emb = LabeledEmbedding(train, tuple(labels[d] for d in model.doc_ids))
    classes, table = distance_table(model.project(q, top), emb, args.method, dims)
    mean = table.mean(axis=1)  # average over the dimension range
    verdicts = []
    for name, row in zip(ids, mean):
        best = min(range(len(classes)), key=lambda c: (row[c], classes[c]))
        verdicts.append({
            "id": name,
            "verdict": classes[best],
            "distances": {c: float(d) for c, d in zip(classes, row)},
        })
    out = {"method": args.method, "dims": [dims[0], dims[-1]], "results": verdicts}
    _write_text(json.dumps(out, indent=2, sort_keys=True) + "\n", args.output)


def cmd_evaluate(args) -> None:
    m = load_matrix(args.matrix, args.labels)
    if args.protocol == "loocv":
        protocol = LOOCV()
    elif args.protocol == "kfold":
        protocol = KFold(args.folds, args.seed)
    else:
        if not args.test_ids:
            raise ValueError("--protocol train-test needs --test-ids FILE")
        protocol = TrainTest(tuple(Path(args.test_ids).read_text(encoding="utf-8").split()))
    spec = EvalSpec(parse_reduction(args.reduction, args.log_base), args.method, args.dims, protocol, args.engine)
    report = run_eval(m, spec)
    csv_path, json_path = write_report(report, args.output)
    print(json.dumps({"max_accuracy": report.max_accuracy, "min_optimal_k": report.min_optimal_k,
                      "csv": csv_path, "json": json_path}, sort_keys=True))


def cmd_plot(args) -> None:
    ids, coords = read_coords(args.coords)
    labels = load_labels(args.labels) if args.labels else None
    _write_text(scatter_svg(ids, coords, labels, args.title), args.output)


# parser ------------------------------------------------------------------


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # report bad arguments through the same JSON channel as other failures
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dtmf", description="LSA and correspondence analysis for text categorization.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_text_opts(p, min_freq):
        p.add_argument("--min-term-freq", type=positive_int, default=min_freq,
                       help=f"minimum corpus frequency of a term (default {min_freq})")
        p.add_argument("--stopwords", metavar="FILE", help="whitespace-separated stopword list")

    def add_reduction(p, choices=REDUCTIONS):
        p.add_argument("--reduction", choices=choices, required=True)
        p.add_argument("--log-base", type=float, default=2.0, help="logarithm base of the TF-IDF global weight")
        p.add_argument("--engine", choices=sorted(ENGINES), default="jacobi", help="SVD backend")

    p = sub.add_parser("build", help="document-term matrix from <dir>/<category>/<doc>.txt")
    p.add_argument("corpus_dir")
    p.add_argument("-o", "--output", required=True, help="matrix CSV; labels go to <stem>.labels.csv")
    add_text_opts(p, 10)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("fit", help="fit an LSA or CA model")
    p.add_argument("matrix")
    p.add_argument("--labels", help="labels CSV (default: sidecar of the matrix)")
    add_reduction(p, REDUCTIONS[1:])
    p.add_argument("--k", type=positive_int, help="default view dimension of an LSA model")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("coords", help="export row or column coordinates as CSV")
    p.add_argument("model")
    p.add_argument("--side", choices=("rows", "cols"), default="rows")
    p.add_argument("--kind", choices=("principal", "standard"), default="principal")
    p.add_argument("--k", type=positive_int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_coords)

    p = sub.add_parser("project", help="coordinates of out-of-sample documents")
    p.add_argument("model")
    p.add_argument("query", help="count CSV in matrix format, or a plain-text document")
    p.add_argument("--k", type=positive_int)
    add_text_opts(p, 1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("classify", help="assign out-of-sample documents to the nearest category")
    p.add_argument("model")
    p.add_argument("query", help="count CSV in matrix format, or a plain-text document")
    p.add_argument("--labels", help="labels CSV for the training documents")
    p.add_argument("--method", choices=METHODS, default="centroid")
    dims = p.add_mutually_exclusive_group()
    dims.add_argument("--k", type=positive_int)
    dims.add_argument("--dims", type=parse_dims, metavar="A..B", help="average distances over this range")
    add_text_opts(p, 1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evaluate", help="accuracy sweep over dimensions")
    p.add_argument("matrix")
    p.add_argument("--labels")
    add_reduction(p)
    p.add_argument("--method", choices=METHODS, default="centroid")
    p.add_argument("--dims", type=parse_dims, metavar="A..B")
    p.add_argument("--protocol", choices=("kfold", "loocv", "train-test"), default="kfold")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--test-ids", metavar="FILE", help="held-out document ids for train-test")
    p.add_argument("-o", "--output", required=True, help="prefix for <prefix>.csv and <prefix>.json")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("plot", help="SVG scatter of the first two coordinates")
    p.add_argument("coords")
    p.add_argument("--labels")
    p.add_argument("--title", default="")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_plot)
    return parser


def _fail(code: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": code, "message": message}, sort_keys=True) + "\n")
    return 1


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _fail("usage", str(exc))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except DtmfError as exc:
        return _fail(exc.code, str(exc))
    except OSError as exc:
        return _fail("io_error", str(exc))
    except ValueError as exc:
        return _fail("invalid_argument", str(exc))
    return 0


if __name__ == "__main__":
    sys.exit(main())

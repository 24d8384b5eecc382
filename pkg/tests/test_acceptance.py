"""Acceptance gate: one test (and one PASS/FAIL line) per criterion."""

import itertools
import os
import time
from pathlib import Path

import numpy as np
import pytest

from dtmf import linalg
from dtmf.ca import chi2_distance, fit_ca, standardized_residuals
from dtmf.classify import GroupDistanceMethod, LabeledEmbedding, classify, distance_table, group_distance
from dtmf.dtm import DocTermMatrix, align_query, load_matrix
from dtmf.evaluate import LOOCV, EvalSpec, run_eval
from dtmf.lsa import fit_lsa
from dtmf.synthetic import category_corpus, toy_matrix
from dtmf.weighting import WeightKind, WeightSpec, apply_weights, fit_weights

from conftest import skip_criterion
from oracles import (
    CA_INERTIA,
    CA_PROPORTIONS,
    CA_SIGMA,
    DOC5_DOC6_2D,
    DOC5_DOC6_FULL,
    L2_ROWS,
    PSSSV,
    RESIDUALS,
    ROW_PROFILES,
    SIGMA,
    TFIDF_BASE2,
)

TOY_BUDGET = 1.0
PROPERTY_BUDGET = 30.0
DESK_BUDGET = 120.0
_clock = {"toy": 0.0, "property": 0.0}


def within(actual, expected, tol):
    err = float(np.max(np.abs(np.asarray(actual, dtype=float) - np.asarray(expected, dtype=float))))
    return err <= tol, f"max deviation {err:.2e}, tolerance {tol:g}"


def timed(bucket):
    class _Timer:
        def __enter__(self):
            self.t = time.perf_counter()

        def __exit__(self, *exc):
            _clock[bucket] += time.perf_counter() - self.t

    return _Timer()


# toy-table reproduction --------------------------------------------------


def test_ac01_raw_singular_values(criterion):
    with timed("toy"):
        model = fit_lsa(toy_matrix(), WeightSpec("raw"))
        props = model.explained_proportions()
    ok1, d1 = within(model.svd.sigma[:5], SIGMA["raw"], 5e-4)
    ok2, d2 = within(props[0], PSSSV["raw"][0], 5e-4)
    criterion("AC1 LSA-RAW singular values and first PSSSV", ok1 and ok2, f"{d1}; {d2}")


def test_ac02_weighted_singular_values(criterion):
    devs, oks = [], []
    with timed("toy"):
        for kind in ("nrowl1", "nrowl2", "tfidf"):
            ok, d = within(fit_lsa(toy_matrix(), WeightSpec(kind)).svd.sigma[:5], SIGMA[kind], 5e-4)
            oks.append(ok)
            devs.append(f"{kind}: {d}")
    criterion("AC2 LSA-NROWL1/NROWL2/TFIDF singular values", all(oks), "; ".join(devs))


def test_ac03_weighted_matrices(criterion):
    m = toy_matrix()
    checks = []
    with timed("toy"):
        for kind, table in (("nrowl1", ROW_PROFILES), ("nrowl2", L2_ROWS), ("tfidf", TFIDF_BASE2)):
            checks.append((kind, *within(apply_weights(m, fit_weights(m, WeightSpec(kind, 2.0))), table, 5e-4)))
    criterion(
        "AC3 weighted matrices equal the L1, L2 and TF-IDF tables",
        all(ok for _, ok, _ in checks),
        "; ".join(f"{k}: {d}" for k, _, d in checks),
    )


def test_ac04_correspondence_analysis(criterion):
    with timed("toy"):
        m = toy_matrix()
        model = fit_ca(m)
        parts = [
            within(standardized_residuals(m), RESIDUALS, 5e-4),
            within(model.sigma, CA_SIGMA, 5e-4),
            within(model.inertia, CA_INERTIA, 5e-4),
            within(model.proportions, CA_PROPORTIONS, 5e-4),
        ]
    ok = all(p[0] for p in parts) and model.rank == 4
    criterion(
        "AC4 CA residuals, singular values, inertia, proportions, rank 4",
        ok,
        f"rank {model.rank}; " + "; ".join(p[1] for p in parts),
    )


def test_ac05_distance_facts(criterion):
    with timed("toy"):
        model = fit_lsa(toy_matrix())
        full = np.linalg.norm(toy_matrix().counts[4] - toy_matrix().counts[5])
        c2 = model.doc_coordinates(2)
        two = np.linalg.norm(c2[4] - c2[5])
        c5 = model.doc_coordinates(5)
        full_coords = np.linalg.norm(c5[4] - c5[5])
    ok1, d1 = within([full, full_coords], [DOC5_DOC6_FULL] * 2, 1e-3)
    ok2, d2 = within(two, DOC5_DOC6_2D, 5e-3)
    criterion("AC5 doc5-doc6 distance 1.414 in full space and 1.279 in two dimensions", ok1 and ok2, f"{d1}; {d2}")


def test_ac05b_toy_runtime(criterion):
    criterion(
        "AC1-5 toy-table runtime under 1 s",
        _clock["toy"] < TOY_BUDGET,
        f"{_clock['toy']:.3f} s",
    )


# property suites ---------------------------------------------------------


def _random_positive(rng):
    rows, cols = int(rng.integers(2, 13)), int(rng.integers(2, 16))
    counts = rng.integers(1, 30, (rows, cols))
    return DocTermMatrix(tuple(f"d{i}" for i in range(rows)), tuple(f"t{j}" for j in range(cols)), counts)


def test_ac06_random_matrix_properties(criterion):
    rng = np.random.default_rng(20240601)
    worst = {"svd": 0.0, "centering/orthonormality": 0.0, "transition": 0.0, "chi2": 0.0}
    monotone = True
    with timed("property"):
        for _ in range(200):
            m = _random_positive(rng)
            for kind in WeightKind:
                w = apply_weights(m, fit_weights(m, WeightSpec(kind)))
                s = linalg.svd(w)
                scale = max(1.0, np.abs(w).max())
                worst["svd"] = max(
                    worst["svd"],
                    np.abs(linalg.reconstruct(s) - w).max() / scale,
                    np.abs(s.u.T @ s.u - np.eye(s.p)).max(),
                    np.abs(s.v.T @ s.v - np.eye(s.p)).max(),
                )
                c = s.u * s.sigma
                prev = np.zeros((m.shape[0], m.shape[0]))
                for k in range(1, s.p + 1):
                    d = np.linalg.norm(c[:, None, :k] - c[None, :, :k], axis=-1)
                    monotone &= bool(np.all(d >= prev - 1e-12))
                    prev = d
                exact = np.linalg.norm(w[:, None] - w[None], axis=-1)
                monotone &= bool(np.all(prev <= exact + 1e-9))
            model = fit_ca(m)
            if model.rank == 0:
                continue
            worst["centering/orthonormality"] = max(worst["centering/orthonormality"], model.constraint_violation())
            worst["transition"] = max(worst["transition"], model.transition_check())
            rows = model.coordinates("rows", "principal")
            for a, b in itertools.combinations(range(m.shape[0]), 2):
                gap = abs(np.linalg.norm(rows[a] - rows[b]) - chi2_distance(m, "rows", a, b))
                worst["chi2"] = max(worst["chi2"], gap)
    ok = max(worst.values()) <= 1e-9 and monotone
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f", monotone {monotone}"
    criterion("AC6 200 random positive matrices: SVD, CA constraints, chi2, monotone LSA", ok, detail)


def test_ac07_independence(criterion):
    rng = np.random.default_rng(7)
    worst = 0.0
    with timed("property"):
        for _ in range(200):
            a = rng.integers(1, 9, int(rng.integers(2, 13)))
            b = rng.integers(1, 9, int(rng.integers(2, 16)))
            counts = np.outer(a, b)
            m = DocTermMatrix(tuple(f"d{i}" for i in range(len(a))), tuple(f"t{j}" for j in range(len(b))), counts)
            worst = max(worst, fit_ca(m).total_inertia)
    criterion("AC7 rank-1 tables have CA total inertia at most 1e-12", worst <= 1e-12, f"max inertia {worst:.1e}")


def test_ac08_supplementary_points(criterion):
    rng = np.random.default_rng(8)
    worst = {"lsa rows": 0.0, "ca rows": 0.0, "unit profile": 0.0}
    with timed("property"):
        for _ in range(100):
            m = _random_positive(rng)
            counts = m.counts.astype(float)
            for kind in WeightKind:
                model = fit_lsa(m, WeightSpec(kind))
                worst["lsa rows"] = max(worst["lsa rows"], np.abs(model.project(counts) - model.doc_coordinates()).max())
            ca = fit_ca(m)
            if ca.rank == 0:
                continue
            worst["ca rows"] = max(worst["ca rows"], np.abs(ca.project(counts) - ca.coordinates("rows", "principal")).max())
            unit = np.eye(m.shape[1])
            worst["unit profile"] = max(
                worst["unit profile"], np.abs(ca.project(unit) - ca.coordinates("cols", "standard")).max()
            )
    criterion(
        "AC8 supplementary-point identities for LSA and CA",
        max(worst.values()) <= 1e-9,
        ", ".join(f"{k} {v:.1e}" for k, v in worst.items()),
    )


def test_ac09_classifier_orderings(criterion):
    rng = np.random.default_rng(9)
    violations = 0
    with timed("property"):
        for _ in range(1000):
            dim = int(rng.integers(1, 8))
            point = rng.normal(size=dim) * rng.uniform(0.1, 5)
            group = rng.normal(size=(int(rng.integers(1, 10)), dim)) * rng.uniform(0.1, 5)
            d = {m: group_distance(point, group, m) for m in GroupDistanceMethod}
            violations += not (
                d[GroupDistanceMethod.SINGLE] <= d[GroupDistanceMethod.AVERAGE] + 1e-12
                and d[GroupDistanceMethod.AVERAGE] <= d[GroupDistanceMethod.COMPLETE] + 1e-12
                and d[GroupDistanceMethod.CENTROID] <= d[GroupDistanceMethod.AVERAGE] + 1e-12
            )
        # exact ties resolve to the lexicographically smallest label, every time
        tie = LabeledEmbedding([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]], ("zeta", "beta", "mu", "alpha"))
        verdicts = {classify([0.0, 0.0], tie, m)[0] for m in GroupDistanceMethod for _ in range(5)}
    ok = violations == 0 and verdicts == {"alpha"}
    criterion("AC9 SINGLE <= AVERAGE <= COMPLETE and CENTROID <= AVERAGE, deterministic ties", ok,
              f"{violations} violations in 1000 draws, tie verdicts {sorted(verdicts)}")


def test_ac09b_property_runtime(criterion):
    criterion("AC6-9 property-suite runtime under 30 s", _clock["property"] < PROPERTY_BUDGET,
              f"{_clock['property']:.1f} s")


# desk-scale end-to-end ---------------------------------------------------


def test_ac10_desk_scale_loocv(criterion):
    start = time.perf_counter()
    m = category_corpus(n_categories=3, docs_per_category=50, overlap=0.2, seed=0)
    ca = run_eval(m, EvalSpec("ca", "centroid", protocol=LOOCV()))
    lsa = {
        kind.value: run_eval(m, EvalSpec(WeightSpec(kind), "centroid", protocol=LOOCV())).max_accuracy
        for kind in WeightKind
    }
    elapsed = time.perf_counter() - start
    ok = ca.max_accuracy >= 0.95 and all(ca.max_accuracy >= a for a in lsa.values()) and elapsed < DESK_BUDGET
    detail = (
        f"CA {ca.max_accuracy:.4f} at k={ca.min_optimal_k}; "
        + ", ".join(f"LSA-{k.upper()} {a:.4f}" for k, a in lsa.items())
        + f"; {m.shape[0]} docs x {m.shape[1]} terms; {elapsed:.1f} s"
    )
    criterion("AC10 desk-scale CA + centroid LOOCV >= 0.95 and >= every LSA variant", ok, detail)


# optional: published author-attribution data -------------------------------


def test_ac11_wilhelmus_optional(criterion):
    root = os.environ.get("DTMF_WILHELMUS")
    label = "AC11 six-author LOOCV 0.930 at k=151 and query centroid distances"
    if not root:
        skip_criterion(label, "set DTMF_WILHELMUS to a directory with authors.csv and wilhelmus.csv")
    root = Path(root)
    m = load_matrix(root / "authors.csv")
    report = run_eval(m, EvalSpec("ca", "centroid", protocol=LOOCV()))
    model = fit_ca(m)
    qm = load_matrix(root / "wilhelmus.csv")
    q = align_query(model, dict(zip(qm.terms, qm.counts[0].tolist())))
    dims = list(range(151, 185))
    emb = LabeledEmbedding(model.coordinates("rows", "principal", 184), tuple(m.label_list()))
    classes, table = distance_table(model.project(q, 184)[None], emb, "centroid", dims)
    mean = dict(zip(classes, table[0].mean(axis=0)))
    expected = {"Datheen": 0.825, "Haecht": 0.880, "Marnix": 0.939, "Heere": 1.015, "Fruytiers": 1.064,
                "Coornhert": 1.253}
    dist_ok = all(abs(mean.get(k, np.inf) - v) <= 0.005 for k, v in expected.items())
    ok = abs(report.max_accuracy - 0.930) <= 0.01 and report.min_optimal_k == 151 and dist_ok
    criterion(label, ok, f"accuracy {report.max_accuracy:.3f} at k={report.min_optimal_k}; distances {mean}")

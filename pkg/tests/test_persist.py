import numpy as np
import pytest
from numpy.testing import assert_array_equal

from dtmf.ca import fit_ca
from dtmf.errors import FormatError
from dtmf.lsa import fit_lsa
from dtmf.persist import load_model, save_model
from dtmf.synthetic import category_corpus, toy_matrix
from dtmf.weighting import WeightKind, WeightSpec


@pytest.mark.parametrize("kind", list(WeightKind))
def test_lsa_round_trip_is_exact(tmp_path, kind):
    model = fit_lsa(category_corpus(docs_per_category=6, seed=1), WeightSpec(kind, 3.0), k=4)
    save_model(model, tmp_path / "m.txt")
    back = load_model(tmp_path / "m.txt")
    assert back.spec == model.spec and back.k == 4 and back.rank == model.rank
    assert back.doc_ids == model.doc_ids and back.terms == model.terms and back.labels == model.labels
    for a, b in [(model.svd.u, back.svd.u), (model.svd.sigma, back.svd.sigma), (model.svd.v, back.svd.v)]:
        assert_array_equal(a, b)
    assert_array_equal(model.weights.global_weights, back.weights.global_weights)
    q = np.arange(len(model.terms), dtype=float) + 1
    assert_array_equal(model.project(q), back.project(q))


def test_ca_round_trip_is_exact(tmp_path):
    model = fit_ca(toy_matrix())
    save_model(model, tmp_path / "m.txt")
    back = load_model(tmp_path / "m.txt")
    assert back.rank == 4 and back.total_inertia == model.total_inertia
    for a, b in [(model.p, back.p), (model.phi, back.phi), (model.gamma, back.gamma), (model.sigma, back.sigma)]:
        assert_array_equal(a, b)


def test_output_is_byte_stable(tmp_path):
    model = fit_ca(toy_matrix())
    save_model(model, tmp_path / "a.txt")
    save_model(load_model(tmp_path / "a.txt"), tmp_path / "b.txt")
    assert (tmp_path / "a.txt").read_bytes() == (tmp_path / "b.txt").read_bytes()


@pytest.mark.parametrize(
    "text",
    ["", "not json\n", '{"format": "other"}\n', '{"format": "dtmf-model", "type": "ca"}\n#block p 2 2\n1,2\n'],
)
def test_rejects_malformed(tmp_path, text):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(FormatError):
        load_model(path)

import json

import numpy as np
import pytest

import neural_prune as npr


KG = json.dumps(
    {
        "entities": [
            {"id": "e1", "text": "opacity", "label": "observation"},
            {"id": "e2", "text": "left lower lobe", "label": "anatomy"},
            {"id": "e3", "text": "effusion", "label": "observation"},
        ],
        "relations": [
            {"src": "e1", "dst": "e2", "label": "located_at"},
            {"src": "e3", "dst": "e2", "label": "located_at"},
        ],
    }
)


def test_tile_and_pgm_roundtrip():
    rng = np.random.default_rng(0)
    image = np.round(rng.random((32, 48)) * 255) / 255
    grid = npr.tile_image(image, 8)
    assert grid.shape == (4, 6, npr.PATCH_FEATURE_DIM)
    back = npr.decode_pgm(npr.encode_pgm(image))
    np.testing.assert_array_equal(back, image)


def test_salience_and_pruning():
    weights = np.array([[0.5, 0.3, 0.2], [0.1, 0.1, 0.8]])
    np.testing.assert_allclose(npr.aggregate_salience(weights), [0.6, 0.4, 1.0])
    salience = npr.aggregate_salience(npr.synth_attention(3, 30, 870, 0.2))
    kept = npr.prune_topk(salience, 0.023)
    assert len(kept) == 20 and kept == sorted(kept)
    assert npr.compression_ratio(len(kept), 870) == pytest.approx(0.977, abs=1e-4)
    assert npr.prune_threshold(np.array([0.1, 0.5, 0.9]), 0.5) == [2]


def test_attention_bytes():
    w = npr.synth_attention(1, 4, 10, 0.5)
    back = npr.load_attention(npr.save_attention(w))
    np.testing.assert_allclose(back, w, atol=1e-7)


def test_typed_errors():
    with pytest.raises(npr.NeuralError) as info:
        npr.load_attention(b"ATTX" + bytes(10))
    assert info.value.code == "BadMagic"
    with pytest.raises(npr.NeuralError) as info:
        npr.prune_topk(np.array([0.1, 0.2]), 0.0)
    assert info.value.code == "InvalidFraction"


def test_betweenness():
    assert npr.betweenness_centrality(5, [(0, 1), (1, 2), (2, 3), (3, 4)]) == [0, 3, 4, 3, 0]


def test_graph_build_and_codec():
    rng = np.random.default_rng(1)
    image = np.round(rng.random((32, 32)) * 255) / 255
    attention = npr.synth_attention(5, 6, 16, 0.3)
    blob = npr.build_graph(image, attention, KG, top_k=0.25)
    graph = npr.decode(blob)
    assert graph["dim"] == 66
    assert len(graph["nodes"]) == 4 + 3
    assert npr.encode(graph) == blob


def test_metrics():
    assert npr.auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]) == 0.75
    assert npr.bleu2("the cat sat", ["the cat sat down"]) == pytest.approx(0.7165, abs=1e-4)


def test_train_and_predict(tmp_path):
    fp = npr.write_synthetic_corpus(str(tmp_path), seed=4, count=12, image_size=32, patch_size=8)
    assert isinstance(fp, int)
    labels = [l.split(",") for l in (tmp_path / "labels.csv").read_text().splitlines()[1:]]
    data = []
    for name, label in labels:
        image = npr.decode_pgm((tmp_path / f"{name}.pgm").read_bytes())
        attention = npr.load_attention((tmp_path / f"{name}.attn").read_bytes())
        kg = (tmp_path / f"{name}.kg.json").read_text()
        data.append((npr.build_graph(image, attention, kg, top_k=0.25), int(label)))
    model = npr.Model.create(66, layers=2, hidden=8, seed=1)
    trained = npr.train(model, data, epochs=2, learning_rate=0.05, seed=1)
    assert npr.Model.load(trained.save()) == trained
    p = trained.predict(data[0][0])
    assert 0.0 < p < 1.0

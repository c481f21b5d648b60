"""Attention-guided patch pruning, graph fusion and MPNN classification."""

import json

from ._core import (
    PATCH_FEATURE_DIM,
    Model,
    NeuralError,
    aggregate_salience,
    auc,
    betweenness_centrality,
    bleu2,
    build_graph,
    compression_ratio,
    decode_pgm,
    encode_pgm,
    entity_embedding,
    load_attention,
    normalize_knowledge_graph,
    prune_threshold,
    prune_topk,
    save_attention,
    synth_attention,
    tile_image,
    topk_count,
    train,
    write_synthetic_corpus,
)
from ._core import decode_json as _decode_json
from ._core import encode_json as _encode_json

__version__ = "1.0.0"


def decode(data: bytes) -> dict:
    """Decode NRLG bytes into a graph dict (dim, bridge, nodes, edges)."""
    return json.loads(_decode_json(data))


def encode(graph: dict) -> bytes:
    """Encode a graph dict as NRLG bytes."""
    return _encode_json(json.dumps(graph))


__all__ = [name for name in dir() if not name.startswith("_") and name != "json"]

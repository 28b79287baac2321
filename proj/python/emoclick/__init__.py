"""Emotion-aware clickbait corpus analysis: curiosity-gap scoring,
semantic alignment, and detector-degradation metrics.

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports its public surface.
"""

from emoclick._core import (
    EmoclickError,
    Framing,
    VadLexicon,
    VadVector,
    classify_framing,
    cosine_similarity,
    curiosity_gap,
    delta_cg,
    hash_embed,
    map_emotion_to_vad,
    metrics_from_counts,
    one_to_one_align,
    one_to_one_align_matrix,
    style_distribution,
    styles,
    top1_align,
    vad_drift,
)

__all__ = [
    "EmoclickError",
    "Framing",
    "VadLexicon",
    "VadVector",
    "classify_framing",
    "cosine_similarity",
    "curiosity_gap",
    "delta_cg",
    "hash_embed",
    "map_emotion_to_vad",
    "metrics_from_counts",
    "one_to_one_align",
    "one_to_one_align_matrix",
    "style_distribution",
    "styles",
    "top1_align",
    "vad_drift",
]

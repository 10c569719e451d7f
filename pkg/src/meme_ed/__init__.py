"""meme_ed: clinical pseudo-note serialization of tabular ED data, modality
embeddings, and attention-based disposition/decompensation classifiers."""

from .modalities import CANONICAL_ORDER, MSEM_KEY, Modality

__version__ = "0.1.0"

__all__ = ["CANONICAL_ORDER", "MSEM_KEY", "Modality", "__version__"]

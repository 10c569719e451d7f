"""Text embedding: tokenizer, truncation, hash embedder, and the store."""

from .hashing import HashEmbedder, hash_embed
from .pipeline import build_store, default_embedder, embed_visit, modality_keys
from .store import (
    BadMagic,
    DimensionMismatch,
    EmbeddingStore,
    StoreFormatError,
    TruncatedFile,
    VersionUnsupported,
    export_store,
    export_store_csv,
    import_store,
    import_store_csv,
)
from .tokenize import DEFAULT_TOKEN_LIMIT, TokenBudget, tokenize_approx, truncate

__all__ = [
    "BadMagic",
    "DEFAULT_TOKEN_LIMIT",
    "DimensionMismatch",
    "EmbeddingStore",
    "HashEmbedder",
    "StoreFormatError",
    "TokenBudget",
    "TruncatedFile",
    "VersionUnsupported",
    "build_store",
    "default_embedder",
    "embed_visit",
    "export_store",
    "export_store_csv",
    "hash_embed",
    "import_store",
    "import_store_csv",
    "modality_keys",
    "tokenize_approx",
    "truncate",
]

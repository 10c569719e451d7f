"""Per-visit embedding: six modality vectors (MEME) or one joined vector (MSEM)."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence

import numpy as np

from ..errors import DataError
from ..modalities import CANONICAL_ORDER, MSEM_KEY
from ..pseudonote.render import PseudoNote
from .hashing import HashEmbedder
from .store import EmbeddingStore
from .tokenize import TokenBudget, truncate

Embedder = Callable[[str], np.ndarray]


def embed_visit(
    notes: Sequence[PseudoNote],
    embedder: Embedder,
    budget: TokenBudget | None = None,
    mode: str = "meme",
) -> list[np.ndarray]:
    """Embed one visit's notes.

    MEME: each of the six notes is truncated to the budget independently and
    embedded separately. MSEM: the notes are joined (they arrive pre-joined
    or as six parts), truncated once, and embedded as one vector.
    """
    budget = budget or TokenBudget()
    if mode == "meme":
        if len(notes) != len(CANONICAL_ORDER):
            raise DataError(f"MEME mode expects 6 notes, got {len(notes)}")
        for note, modality in zip(notes, CANONICAL_ORDER):
            if note.modality is not modality:
                raise DataError(
                    f"notes out of canonical order: expected {modality.value}, "
                    f"got {note.modality_name}"
                )
        return [embedder(truncate(n.text, budget)) for n in notes]
    if mode == "msem":
        if len(notes) == 1:
            joined = notes[0].text
        else:
            joined = " ".join(n.text for n in notes)
        return [embedder(truncate(joined, budget))]
    raise DataError(f"unknown embedding mode {mode!r}")


def _group_notes(notes: Iterable[PseudoNote]) -> dict[str, dict[str, str]]:
    grouped: dict[str, dict[str, str]] = {}
    for note in notes:
        grouped.setdefault(note.visit_id, {})[note.modality_name] = note.text
    return grouped


def build_store(
    notes: Iterable[PseudoNote],
    embedder: Embedder,
    budget: TokenBudget | None = None,
    mode: str = "meme",
    d: int | None = None,
    jobs: int = 1,
) -> EmbeddingStore:
    """Embed a whole note stream into a store.

    MEME keys each vector by its modality; MSEM joins each visit's six notes
    in canonical order and keys the single vector under "msem". With jobs>1
    visits embed in a thread pool; insertion order (and thus file bytes) is
    independent of the worker count.
    """
    budget = budget or TokenBudget()
    if d is None:
        d = getattr(embedder, "d", None)
        if d is None:
            raise DataError("store dimension required when embedder does not expose .d")
    grouped = _group_notes(notes)
    store = EmbeddingStore(d=d, source=getattr(embedder, "source", "hash"))

    def embed_one(item: tuple[str, dict[str, str]]) -> list[tuple[str, str, np.ndarray]]:
        visit_id, texts = item
        if mode == "msem":
            parts = [texts[m.value] for m in CANONICAL_ORDER if m.value in texts]
            joined = " ".join(parts)
            return [(visit_id, MSEM_KEY, embedder(truncate(joined, budget)))]
        out = []
        for modality in CANONICAL_ORDER:
            text = texts.get(modality.value)
            if text is None:
                raise DataError(f"visit {visit_id} lacks a {modality.value} note")
            out.append((visit_id, modality.value, embedder(truncate(text, budget))))
        return out

    items = list(grouped.items())
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(embed_one, items))
    else:
        results = [embed_one(item) for item in items]
    for entries in results:
        for visit_id, modality, vec in entries:
            store.put(visit_id, modality, vec)
    return store


def default_embedder(d: int = 256, seed: int = 0) -> HashEmbedder:
    return HashEmbedder(d=d, seed=seed)


def modality_keys(mode: str) -> list[str]:
    if mode == "msem":
        return [MSEM_KEY]
    return [m.value for m in CANONICAL_ORDER]

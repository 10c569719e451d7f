"""The six EHR concept groups attached to every ED visit.

The canonical ordering below is used everywhere a modality sequence is
needed (note rendering, vector concatenation, store keys), so changing it
invalidates trained checkpoints and golden files.
"""

from __future__ import annotations

from enum import Enum


class Modality(str, Enum):
    ARRIVAL = "arrival"
    TRIAGE = "triage"
    MEDRECON = "medrecon"
    PYXIS = "pyxis"
    VITALS = "vitals"
    CODES = "codes"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


CANONICAL_ORDER: tuple[Modality, ...] = (
    Modality.ARRIVAL,
    Modality.TRIAGE,
    Modality.MEDRECON,
    Modality.PYXIS,
    Modality.VITALS,
    Modality.CODES,
)

#: Pseudo-modality key used by stores to hold the single joined-note vector.
MSEM_KEY = "msem"


def parse_modality(name: str) -> Modality:
    try:
        return Modality(name.strip().lower())
    except ValueError:
        raise KeyError(f"unknown modality: {name!r}") from None

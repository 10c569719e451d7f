"""Synthetic ED visit generator with plantable label signal.

Stands in for credentialed data at desk scale. Labels are drawn first; a
signal spec then injects label-correlated vocabulary into chosen modalities,
which makes the tasks separable by construction and gives training a known
learnability oracle. Everything is driven by one rng, so a (config, seed)
pair always yields byte-identical serialized datasets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import DataError
from ..modalities import CANONICAL_ORDER, Modality, parse_modality
from .types import Dataset, LabelKind, LabelSet, Provenance, Row, VisitRecord


class InvalidConfig(DataError):
    pass


@dataclass(frozen=True)
class SignalSpec:
    """Where and how strongly label-correlated tokens are planted."""

    modalities: tuple[Modality, ...] = (Modality.TRIAGE, Modality.CODES)
    strength: float = 0.9  # probability a labeled visit receives its tokens
    task: LabelKind = LabelKind.DISPOSITION
    tokens_per_hit: int = 2


@dataclass(frozen=True)
class SynthConfig:
    n_visits: int = 100
    admit_rate: float = 0.4
    discharge_home_rate: float = 0.45
    icu_rate: float = 0.2
    mortality_rate: float = 0.1
    missingness: dict[Modality, float] = field(default_factory=dict)
    row_counts: dict[Modality, tuple[int, int]] = field(default_factory=dict)
    signal: SignalSpec | None = field(default_factory=SignalSpec)

    def validate(self) -> None:
        if self.n_visits < 1:
            raise InvalidConfig("n_visits must be >= 1")
        for name in ("admit_rate", "discharge_home_rate", "icu_rate", "mortality_rate"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InvalidConfig(f"{name} must be in [0, 1], got {v}")
        for m, rate in self.missingness.items():
            if not 0.0 <= rate <= 1.0:
                raise InvalidConfig(f"missingness[{m.value}] must be in [0, 1], got {rate}")
        for m, (lo, hi) in self.row_counts.items():
            if lo < 1 or hi < lo:
                raise InvalidConfig(f"row_counts[{m.value}] must satisfy 1 <= lo <= hi")
        if self.signal is not None and not 0.0 <= self.signal.strength <= 1.0:
            raise InvalidConfig("signal strength must be in [0, 1]")


def config_from_json(obj: dict) -> SynthConfig:
    signal_obj = obj.get("signal")
    signal: SignalSpec | None
    if signal_obj is None:
        signal = None
    else:
        signal = SignalSpec(
            modalities=tuple(parse_modality(m) for m in signal_obj.get("modalities", ["triage", "codes"])),
            strength=float(signal_obj.get("strength", 0.9)),
            task=LabelKind(signal_obj.get("task", "disposition")),
            tokens_per_hit=int(signal_obj.get("tokens_per_hit", 2)),
        )
    return SynthConfig(
        n_visits=int(obj.get("n_visits", 100)),
        admit_rate=float(obj.get("admit_rate", 0.4)),
        discharge_home_rate=float(obj.get("discharge_home_rate", 0.45)),
        icu_rate=float(obj.get("icu_rate", 0.2)),
        mortality_rate=float(obj.get("mortality_rate", 0.1)),
        missingness={parse_modality(m): float(r) for m, r in obj.get("missingness", {}).items()},
        row_counts={
            parse_modality(m): (int(lo), int(hi))
            for m, (lo, hi) in obj.get("row_counts", {}).items()
        },
        signal=signal,
    )


def load_synth_config(path: str | Path) -> SynthConfig:
    return config_from_json(json.loads(Path(path).read_text(encoding="utf-8")))


# Signal vocabularies are disjoint from the background vocabularies below so
# planted separability cannot leak through ordinary fields.
POSITIVE_SIGNAL_TOKENS = ("hypotensive", "obtunded", "septicemia", "exsanguinating", "intubated")
NEGATIVE_SIGNAL_TOKENS = ("wellappearing", "reassuring", "selflimited", "ambulatory", "resolved")

_GENDERS = ("female", "male")
_RACES = ("white", "black", "asian", "hispanic", "other")
_TRANSPORT = ("ambulance", "walk in", "helicopter", "unknown transport")
_MARITAL = ("single", "married", "widowed", "divorced")
_INSURANCE = ("medicare", "medicaid", "other", "private")
_LANGUAGE = ("english", "spanish", "mandarin", "russian")
_COMPLAINTS = (
    "abd pain",
    "chest pain",
    "dyspnea",
    "fever",
    "headache",
    "syncope",
    "n/v/d",
    "back pain",
    "dizziness",
    "leg swelling",
)
_MED_NAMES = (
    "albuterol sulfate",
    "furosemide",
    "metoprolol tartrate",
    "lisinopril",
    "atorvastatin",
    "insulin glargine",
    "omeprazole",
    "acetaminophen",
    "ondansetron",
    "morphine",
    "ceftriaxone",
    "heparin",
)
_MED_CATEGORIES = (
    "beta 2-adrenergic agents, inhaled",
    "diuretic - loop",
    "beta-adrenergic blocking agents",
    "ace inhibitors",
    "hmg coa reductase inhibitors",
    "insulins",
    "proton pump inhibitors",
    "analgesics - nonopioid",
    "antiemetic - serotonin receptor antagonist",
    "analgesics - opioid",
    "cephalosporins - 3rd generation",
    "anticoagulants",
)
_ICD_TITLES = (
    "essential hypertension",
    "type 2 diabetes mellitus",
    "acute kidney failure",
    "chronic obstructive pulmonary disease",
    "atrial fibrillation",
    "pneumonia organism unspecified",
    "urinary tract infection site not specified",
    "congestive heart failure",
    "other ascites",
    "cirrhosis of liver nos",
)
_DISCHARGE_NOT_HOME = ("SNF", "REHAB", "HOSPICE", "ACUTE HOSPITAL")


def _choice(rng: np.random.Generator, options: tuple[str, ...]) -> str:
    return options[int(rng.integers(0, len(options)))]


def _timestamp(rng: np.random.Generator) -> str:
    return (
        f"213{int(rng.integers(0, 10))}-"
        f"{int(rng.integers(1, 13)):02d}-"
        f"{int(rng.integers(1, 29)):02d} "
        f"{int(rng.integers(0, 24)):02d}:{int(rng.integers(0, 60)):02d}:00"
    )


def _signal_tokens(rng: np.random.Generator, positive: bool, count: int) -> list[str]:
    vocab = POSITIVE_SIGNAL_TOKENS if positive else NEGATIVE_SIGNAL_TOKENS
    return [_choice(rng, vocab) for _ in range(count)]


def _label_value(labels: LabelSet, kind: LabelKind) -> int:
    value = labels.get(kind)
    return 0 if value is None else value


def synth_generate(config: SynthConfig, seed: int) -> Dataset:
    """Generate a labeled synthetic dataset, deterministic per (config, seed)."""
    config.validate()
    rng = np.random.default_rng(seed)
    sig = config.signal
    visits: list[VisitRecord] = []

    for i in range(config.n_visits):
        vid = f"SYN{i + 1:06d}"
        admitted = bool(rng.random() < config.admit_rate)
        if admitted:
            labels = LabelSet(
                disposition=1,
                discharge_home=int(rng.random() < config.discharge_home_rate),
                icu=int(rng.random() < config.icu_rate),
                mortality=int(rng.random() < config.mortality_rate),
            )
        else:
            labels = LabelSet(disposition=0)

        inject: list[str] | None = None
        if sig is not None and sig.modalities and rng.random() < sig.strength:
            positive = _label_value(labels, sig.task) == 1
            inject = _signal_tokens(rng, positive, sig.tokens_per_hit)

        rows: dict[Modality, list[Row]] = {}
        for modality in CANONICAL_ORDER:
            if rng.random() < config.missingness.get(modality, 0.0):
                rows[modality] = []
                continue
            rows[modality] = _make_rows(rng, modality, vid, labels, config)
            if inject is not None and modality in sig.modalities and rows[modality]:
                _inject_signal(rng, modality, rows[modality], inject)
        visits.append(VisitRecord(visit_id=vid, modality_rows=rows, labels=labels))

    return Dataset(visits=visits, provenance=Provenance(source="synthetic", schema_version=1))


def _count(rng: np.random.Generator, config: SynthConfig, m: Modality, default: tuple[int, int]) -> int:
    lo, hi = config.row_counts.get(m, default)
    return int(rng.integers(lo, hi + 1))


def _make_rows(
    rng: np.random.Generator,
    modality: Modality,
    vid: str,
    labels: LabelSet,
    config: SynthConfig,
) -> list[Row]:
    if modality is Modality.ARRIVAL:
        row: Row = {
            "visit_id": vid,
            "patient_id": f"{int(rng.integers(10_000_000, 20_000_000))}",
            "age": str(int(rng.integers(18, 95))),
            "gender": _choice(rng, _GENDERS),
            "race": _choice(rng, _RACES),
            "arrival_transport": _choice(rng, _TRANSPORT),
            "intime": _timestamp(rng),
            "marital_status": _choice(rng, _MARITAL),
            "insurance": _choice(rng, _INSURANCE),
            "language": _choice(rng, _LANGUAGE),
            "disposition": "ADMITTED" if labels.disposition == 1 else "HOME",
        }
        if labels.disposition == 1:
            row["discharge_location"] = (
                "HOME" if labels.discharge_home == 1 else _choice(rng, _DISCHARGE_NOT_HOME)
            )
            row["icu"] = str(labels.icu)
            row["mortality"] = str(labels.mortality)
        return [row]

    if modality is Modality.TRIAGE:
        return [
            {
                "visit_id": vid,
                "temperature": f"{rng.normal(98.2, 1.0):.1f}",
                "pulse": str(int(rng.integers(50, 130))),
                "respirations": str(int(rng.integers(10, 30))),
                "o2sat": str(int(rng.integers(88, 101))),
                "sbp": str(int(rng.integers(90, 180))),
                "dbp": str(int(rng.integers(50, 110))),
                "pain": str(int(rng.integers(0, 11))),
                "chiefcomplaint": _choice(rng, _COMPLAINTS),
                "acuity": str(int(rng.integers(1, 6))),
            }
        ]

    if modality is Modality.MEDRECON:
        n = _count(rng, config, modality, (1, 4))
        out = []
        for _ in range(n):
            k = int(rng.integers(0, len(_MED_NAMES)))
            out.append({"visit_id": vid, "name": _MED_NAMES[k], "category": _MED_CATEGORIES[k]})
        return out

    if modality is Modality.PYXIS:
        n = _count(rng, config, modality, (1, 3))
        out = [
            {"visit_id": vid, "charttime": _timestamp(rng), "name": _choice(rng, _MED_NAMES)}
            for _ in range(n)
        ]
        out.sort(key=lambda r: r["charttime"])  # ISO strings sort chronologically
        return out

    if modality is Modality.VITALS:
        n = _count(rng, config, modality, (1, 3))
        out = [
            {
                "visit_id": vid,
                "charttime": _timestamp(rng),
                "temperature": f"{rng.normal(98.2, 1.0):.1f}",
                "pulse": str(int(rng.integers(50, 130))),
                "respirations": str(int(rng.integers(10, 30))),
                "o2sat": str(int(rng.integers(88, 101))),
                "sbp": str(int(rng.integers(90, 180))),
                "dbp": str(int(rng.integers(50, 110))),
                "pain": str(int(rng.integers(0, 11))),
            }
            for _ in range(n)
        ]
        out.sort(key=lambda r: r["charttime"])
        return out

    assert modality is Modality.CODES
    n = _count(rng, config, modality, (1, 4))
    out = []
    for _ in range(n):
        version = _choice(rng, ("9", "10"))
        code = f"{int(rng.integers(100, 1000))}.{int(rng.integers(0, 10))}"
        out.append(
            {
                "visit_id": vid,
                "icd_version": version,
                "icd_code": code,
                "icd_title": _choice(rng, _ICD_TITLES),
            }
        )
    return out


def _inject_signal(
    rng: np.random.Generator, modality: Modality, rows: list[Row], tokens: list[str]
) -> None:
    """Append signal tokens where the modality's template will render them."""
    joined = " ".join(tokens)
    if modality is Modality.ARRIVAL:
        rows[0]["arrival_transport"] = f"{rows[0].get('arrival_transport', 'unknown')} {joined}"
    elif modality is Modality.TRIAGE:
        base = rows[0].get("chiefcomplaint", "")
        rows[0]["chiefcomplaint"] = f"{base}, {joined}" if base else joined
    elif modality is Modality.MEDRECON:
        for tok in tokens:
            rows.append({"visit_id": rows[0]["visit_id"], "name": tok, "category": "study drug"})
    elif modality is Modality.PYXIS:
        stamp = rows[-1].get("charttime", _timestamp(rng))
        for tok in tokens:
            rows.append({"visit_id": rows[0]["visit_id"], "charttime": stamp, "name": tok})
    elif modality is Modality.VITALS:
        rows[-1]["pain"] = f"{rows[-1].get('pain', 'unknown')} {joined}"
    else:
        for tok in tokens:
            rows.append(
                {
                    "visit_id": rows[0]["visit_id"],
                    "icd_version": "10",
                    "icd_code": "Z00.0",
                    "icd_title": tok,
                }
            )

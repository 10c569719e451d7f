import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

from meme_ed.ingest.jsonl import visit_from_obj

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def reference_visit():
    obj = json.loads((GOLDEN_DIR / "reference_visit.json").read_text(encoding="utf-8"))
    obj.pop("_comment", None)
    return visit_from_obj(obj)


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN_DIR

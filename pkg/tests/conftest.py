import json
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

from hypertoric_data import HypertoricData, cotangent_projective_space, rank_two_arrangement  # noqa: E402

GOLDEN = ROOT / 'golden'


@pytest.fixture
def tp1():
    return cotangent_projective_space(2)


@pytest.fixture
def tp2():
    return cotangent_projective_space(3)


@pytest.fixture
def rank2():
    return rank_two_arrangement()


@pytest.fixture(params=['tp1', 'tp2', 'rank2'])
def arrangement(request):
    with open(GOLDEN / f"{request.param}.json", 'r', encoding='utf-8') as f:
        return HypertoricData.from_document(json.load(f))


@pytest.fixture(autouse=True)
def isolated_outputs(tmp_path, monkeypatch):
    """Cache, exports and the log file go to a temporary directory"""
    monkeypatch.chdir(tmp_path)

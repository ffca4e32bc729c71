import json
import pathlib

import pytest
from hypothesis import HealthCheck, settings

from evolalg.field import gf

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def frozen_counts():
    raw = json.loads((DATA / "classification_counts.json").read_text())
    return {int(p): {int(k): v for k, v in c.items()} for p, c in raw.items()}


@pytest.fixture(params=[2, 3, 5], ids=lambda p: f"gf{p}")
def small_field(request):
    return gf(request.param)

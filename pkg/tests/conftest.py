from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

finite = st.floats(min_value=-100, max_value=100, allow_nan=False, allow_infinity=False)


def vectors(dim):
    return arrays(np.float64, dim, elements=finite)


@st.composite
def vector_pairs(draw, min_dim=1, max_dim=8):
    dim = draw(st.integers(min_dim, max_dim))
    return draw(vectors(dim)), draw(vectors(dim))


@pytest.fixture
def configs_dir():
    return CONFIGS

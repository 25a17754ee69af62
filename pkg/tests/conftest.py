import numpy as np
import pytest
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def joint_states(min_m=2, max_m=5, allow_zeros=True):
    """Hypothesis strategy for normalized square joint matrices."""
    # entries are exact zeros or bounded away from zero
    elements = st.floats(1e-3, 1.0)
    if allow_zeros:
        elements = st.one_of(st.just(0.0), elements)

    @st.composite
    def build(draw):
        m = draw(st.integers(min_m, max_m))
        raw = draw(arrays(np.float64, (m, m), elements=elements))
        if raw.sum() == 0:
            raw[0, 0] = 1.0
        return raw / raw.sum()

    return build()

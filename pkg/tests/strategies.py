"""Hypothesis strategies that draw a seed and build instances from numpy.

Drawing seeds keeps shrinking cheap and instances reproducible.
"""

import numpy as np
from hypothesis import strategies as st

seeds = st.integers(min_value=0, max_value=2**32 - 1)
small_dims = st.integers(min_value=1, max_value=4)
bipartite_dims = st.tuples(st.integers(2, 3), st.integers(1, 3))


def rng_of(seed):
    return np.random.default_rng(seed)


def random_hermitian(d, rng):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (a + a.conj().T) / 2

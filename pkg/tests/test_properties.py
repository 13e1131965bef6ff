"""Randomized invariants."""

import json

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from tomokraus import (
    RayGrid,
    apply_channel_oracle,
    apply_kernel,
    random_density_matrix,
    random_kraus_set,
    symbol_from_operator,
    tomogram_from_density,
    total_kernel,
)
from tomokraus.io.config import canonical, dumps

GRID = RayGrid(8.0, 129, 16)
seeds = st.integers(0, 2 ** 32 - 1)
settings.register_profile("tomo", max_examples=20, deadline=None)
settings.load_profile("tomo")


@given(seeds, st.integers(2, 6), st.floats(0.2, 4.0), st.booleans())
def test_homogeneity(seed, dim, lam, flip):
    t = tomogram_from_density(random_density_matrix(dim, rng=seed), GRID)
    lam = -lam if flip else lam
    i, j = seed % GRID.n_theta, 20 + seed % 80
    th, x = GRID.theta[i], GRID.x[j]
    v = t.evaluate(lam * x, lam * np.cos(th), lam * np.sin(th))
    assert abs(v * abs(lam) - t.values[i, j]) <= 1e-12 * max(1.0, t.values[i, j])


@given(seeds, st.integers(2, 6))
def test_symbol_conjugation(seed, dim):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    lhs = symbol_from_operator(a.conj().T, GRID).values
    rhs = symbol_from_operator(a, GRID).values.conj()
    assert np.max(np.abs(lhs - rhs)) < 1e-12


@given(seeds, st.integers(2, 5), st.integers(1, 3))
def test_channel_preserves_trace_and_positivity(seed, dim, rank):
    rng = np.random.default_rng(seed)
    kraus = random_kraus_set(dim, rank, rng)
    rho = random_density_matrix(dim, rng=rng)
    out = apply_kernel(tomogram_from_density(rho, GRID), total_kernel(kraus))
    assert np.max(np.abs(out.normalization() - 1)) < 1e-5
    assert out.values.min() > -1e-8
    ref = tomogram_from_density(apply_channel_oracle(rho, kraus).state, GRID)
    assert np.max(np.abs(out.values - ref.values)) < 1e-5


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_canonical_float_stable(x):
    once = canonical(x)
    assert canonical(once) == once
    assert json.loads(dumps({"v": x}))["v"] == once
    assert abs(once - x) <= 1e-11 * abs(x)

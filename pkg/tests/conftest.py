"""Shared fixtures: the bundled iris data and small deterministic blob sets."""

import numpy as np
import pytest

from conivat import FeatureMatrix, load_iris, normalize_minmax


@pytest.fixture(scope="session")
def iris() -> FeatureMatrix:
    return load_iris()


@pytest.fixture(scope="session")
def iris_norm(iris) -> FeatureMatrix:
    return normalize_minmax(iris)


@pytest.fixture()
def two_blobs() -> FeatureMatrix:
    """Two tight, well-separated 2-D clusters of 10 points each."""
    rng = np.random.default_rng(11)
    a = rng.normal([0.0, 0.0], 0.3, (10, 2))
    b = rng.normal([8.0, 0.0], 0.3, (10, 2))
    return FeatureMatrix(np.vstack([a, b]), np.array([0] * 10 + [1] * 10))

import numpy as np
import pytest

from apps.splines.services.basis import BasisSpec
from apps.splines.services.knots import KnotVector


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def worked_knots():
    """Clamped cubic knots with uneven interior spacing"""
    return KnotVector([0, 0, 0, 0, 1, 3, 4, 4, 4, 4], 4)


@pytest.fixture
def uneven_basis():
    t = np.r_[[0.0] * 4, 0.05, 0.1, 0.3, 0.35, 0.6, 0.9, [1.0] * 4]
    return BasisSpec(KnotVector(t, 4))


@pytest.fixture
def api_client():
    from rest_framework.test import APIClient

    return APIClient()

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("suite")

from seqfpp.backend import available_backends  # noqa: E402


@pytest.fixture(params=sorted(available_backends()))
def kernel(request):
    """Run a test under every importable kernel backend."""
    return available_backends()[request.param]


@pytest.fixture
def gen():
    return np.random.Generator(np.random.PCG64(20240817))

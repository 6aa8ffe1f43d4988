import numpy as np
import pytest
from hypothesis import settings

from hybrid_bsqi import _kernels

# the first call into a numba kernel may load or compile it
settings.register_profile("default", deadline=None)
settings.load_profile("default")


@pytest.fixture(params=_kernels.available())
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

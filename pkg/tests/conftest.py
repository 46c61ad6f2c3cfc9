import numpy as np
import pytest

from flatbary import make_context


@pytest.fixture
def ctx2():
    return make_context(2, "real")


@pytest.fixture
def ctx2c():
    return make_context(2, "complex")


@pytest.fixture
def ctx3():
    return make_context(3, "real")


@pytest.fixture
def ctx3c():
    return make_context(3, "complex")


@pytest.fixture(params=[(2, "real"), (2, "complex"), (3, "real"), (3, "complex")],
                ids=["2r", "2c", "3r", "3c"])
def any_ctx(request):
    n, field = request.param
    return make_context(n, field)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

import numpy as np
import pytest

from hartogs.domains import hartogs_ball, hartogs_polydisc

NK_GRID = [(1, 1), (1, 2), (2, 1), (2, 2)]
HARTOGS_SPECS = [f(n, k) for n, k in NK_GRID for f in (hartogs_polydisc, hartogs_ball)]


def spec_id(spec):
    return f"{spec.kind.value}-n{spec.n}-k{spec.k}"


@pytest.fixture(params=HARTOGS_SPECS, ids=spec_id)
def hspec(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

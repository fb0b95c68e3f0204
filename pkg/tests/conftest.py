import math

import numpy as np
import pytest

from mmswave.modes import find_branch
from mmswave.susceptibility import Lorentz, Toy

PRESET_CASES = {
    "toy": (Toy(gamma=5.0, a=20.0), 2 * math.pi),
    "lorentz_uv": (Lorentz(a=-1.0, b=-1.0, c=100.0), 8.0),
    "lorentz_ir": (Lorentz(a=-0.25, b=-10.0, c=1.0), 2 * math.pi),
}


@pytest.fixture(params=sorted(PRESET_CASES))
def case(request):
    model, k0 = PRESET_CASES[request.param]
    return request.param, model, k0, find_branch(model, k0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

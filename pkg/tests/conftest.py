import math

import pytest

from idjcm.model import ModelConfig, evolve_closed_form
from idjcm.phase_space import build_grid, sample_qfield

TWO_PI = 2 * math.pi


@pytest.fixture(scope="session")
def sampled():
    """Cached ``(qf, grid)`` factory keyed by (alpha, T, n_r, n_theta)."""
    cache = {}

    def get(alpha, t, n_r=200, n_theta=256):
        key = (alpha, t, n_r, n_theta)
        if key not in cache:
            cfg = ModelConfig(alpha_mag=alpha)
            g = build_grid(cfg, n_r, n_theta)
            cache[key] = (sample_qfield(evolve_closed_form(cfg, t), g), g)
        return cache[key]

    return get


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import sys

import numpy as np
import pytest

from pdesel import CandidateLibrary, RunConfig, build_library, discovery_sweep, simulate_burgers


def random_library(n, m, seed=0, xi=None, intercept=0.0, noise=0.0):
    rng = np.random.default_rng(seed)
    Phi = rng.standard_normal((n, m))
    if xi is None:
        xi = rng.standard_normal(m)
    y = Phi @ np.asarray(xi, dtype=float) + intercept + noise * rng.standard_normal(n)
    return CandidateLibrary(Phi, [f"c{j}" for j in range(m)], y)


@pytest.fixture
def lib30x5():
    return random_library(30, 5, seed=11, intercept=0.7, noise=0.3)


@pytest.fixture(scope="session")
def default_config():
    return RunConfig()


@pytest.fixture(scope="session")
def burgers_field(default_config):
    c = default_config
    return simulate_burgers(c.nu, c.domain, c.initial, c.seed, c.field_noise)


@pytest.fixture(scope="session")
def burgers_library(burgers_field, default_config):
    c = default_config
    return build_library(burgers_field, c.library_spec(), c.n_samples, c.seed, c.target_noise)


@pytest.fixture(scope="session")
def burgers_sweep(burgers_library, default_config):
    return discovery_sweep(burgers_library, default_config.max_size, default_config.sweep_config())


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)

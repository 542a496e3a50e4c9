import math

import numpy as np
import pytest


def random_frame(rng, sign=None, cond_max=50.0):
    """Random 2x2 zweibein, optionally with a prescribed orientation."""
    while True:
        m = rng.uniform(-2.0, 2.0, size=(2, 2))
        d = np.linalg.det(m)
        if abs(d) < 0.2 or np.linalg.cond(m) > cond_max:
            continue
        if sign is not None and np.sign(d) != sign:
            m[:, [0, 1]] = m[:, [1, 0]]
        return m


def random_pair(rng, same_orientation=True):
    k = random_frame(rng)
    s = np.sign(np.linalg.det(k))
    l = random_frame(rng, sign=s if same_orientation else -s)
    return k, l


def random_spd(rng):
    a = rng.uniform(-3.0, 3.0, size=(2, 2))
    y = a @ a.T + rng.uniform(0.05, 1.0) * np.eye(2)
    y[1, 0] = y[0, 1]
    return y


def rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_failed = rep.failed

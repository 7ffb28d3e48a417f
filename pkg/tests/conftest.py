from collections import defaultdict

import numpy as np
import pytest

from dgvar.spectral import DeltaGammaModel, Normal, StudentT

# criterion -> [(ok, detail)], one entry per checked cell
ACCEPTANCE = defaultdict(list)


def one_factor(lam, b, dist=None, theta=0.0, dt=1.0):
    return DeltaGammaModel([[1.0]], [b], [[lam]], theta=theta, dt=dt,
                           dist=Normal() if dist is None else dist)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def acceptance_report():
    def record(criterion, ok, detail):
        ACCEPTANCE[criterion].append((bool(ok), detail))
        return ok
    return record


def acceptance_lines():
    lines = []
    for crit in sorted(ACCEPTANCE):
        cells = ACCEPTANCE[crit]
        bad = [d for ok, d in cells if not ok]
        tag = "FAIL" if bad else "PASS"
        lines.append(f"[{tag}] criterion {crit}: {len(cells) - len(bad)}/{len(cells)} checks passed")
        lines.extend(f"    {'ok  ' if ok else 'FAIL'} {d}" for ok, d in cells)
    return lines


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines():
            terminalreporter.write_line(line)

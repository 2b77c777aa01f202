"""Shared fixtures plus a session-wide conservation recorder.

Every ``JointDecisionDistribution`` built while the suite runs, and every pair
array summarized by the sweep, is recorded here so the acceptance module can
assert conservation over the whole session. Acceptance tests are moved to the
end of the run so the record is complete when they execute.
"""

import numpy as np
import pytest

from asymphoton import distribution as _distribution
from asymphoton import sweep as _sweep

CONSERVATION = {"distributions": 0, "max_distribution_error": 0.0, "sweep_rows": 0, "max_sweep_error": 0.0}


def _install_recorders():
    cls = _distribution.JointDecisionDistribution
    original_init = cls.__post_init__

    def recording_post_init(self):
        original_init(self)
        CONSERVATION["distributions"] += 1
        err = abs(float(np.sum(self.p)) + float(self.loss) - 1.0)
        CONSERVATION["max_distribution_error"] = max(CONSERVATION["max_distribution_error"], err)

    cls.__post_init__ = recording_post_init

    original_summarize = _sweep.summarize

    def recording_summarize(p):
        rows = original_summarize(p)
        CONSERVATION["sweep_rows"] += len(rows)
        # the raw pair mass plus the emitted loss column must close to 1
        total = np.asarray(p).sum(axis=(1, 2)) + rows[:, 2]
        CONSERVATION["max_sweep_error"] = max(CONSERVATION["max_sweep_error"], float(np.max(np.abs(total - 1.0))))
        return rows

    _sweep.summarize = recording_summarize


_install_recorders()


def pytest_collection_modifyitems(config, items):
    items.sort(key=lambda item: item.fspath.basename == "test_acceptance.py")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_unit(rng, K):
    v = rng.normal(size=K)
    return v / np.linalg.norm(v)


def random_oam_config(rng, K=2):
    from asymphoton.oam import OamSystemConfig

    theta = rng.uniform(0, 2 * np.pi)
    return OamSystemConfig.build(
        np.cos(theta), np.sin(theta), random_unit(rng, K), random_unit(rng, K),
        rng.uniform(0, 2 * np.pi, K), rng.uniform(0, 2 * np.pi, K),
    )


# --- acceptance report ------------------------------------------------------------

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line[1])

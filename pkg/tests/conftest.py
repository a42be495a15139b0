import numpy as np
import pytest

from marginalfs.rankstats import LabeledSample
from marginalfs.streams import StreamKey, make_stream

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return make_stream(StreamKey(12345))


def null_sample(stream, n0, n1):
    labels = stream.permutation(np.array([0] * n0 + [1] * n1, dtype=np.int8))
    return LabeledSample(labels, stream.normal(size=n0 + n1))

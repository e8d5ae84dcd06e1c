import pytest

from paretointerp.model import (BranchingSpec, FeatureSpec, InterpretationClassSpec, Predicate,
                                Sample)
from paretointerp.toy import random_toy_instance


def thresholds_pred(pid, column, cuts, weight=0):
    return Predicate.make(pid, FeatureSpec.projection(column), BranchingSpec.thresholds(cuts),
                          weight=weight)


@pytest.fixture
def tiny_spec():
    """Two slots, two binary predicates over two inputs."""
    return InterpretationClassSpec(
        predicates=(thresholds_pred("p", 0, [0.5], weight=10),
                    thresholds_pred("q", 1, [0.5], weight=5)),
        labels=("a", "b"), node_bound=2, unused_weights=(40, 40), input_dim=2,
    )


@pytest.fixture
def xor_samples():
    return tuple(
        Sample((x, y), "a" if (x > 0.5) == (y > 0.5) else "b")
        for x in (0.2, 0.8) for y in (0.3, 0.7)
    )


@pytest.fixture(scope="session")
def toy_instances():
    return [random_toy_instance(seed) for seed in range(8)]


# acceptance results, one line per criterion, echoed after the run
ACCEPTANCE: dict[int, str] = {}


def record(number: int, ok: bool, detail: str):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])

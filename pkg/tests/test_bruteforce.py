from fractions import Fraction
from itertools import product

import pytest

from paretointerp.bruteforce import (best_correctness_at, count_class, enumerate_class,
                                     exact_front, measure_table)
from paretointerp.errors import InputError
from paretointerp.model import (InterpretationClassSpec, MeasurePair, Sample, max_preceq,
                                measures, validate_diagram)
from paretointerp.toy import random_toy_instance

from conftest import thresholds_pred


def recursive_count(spec, i=1):
    """Second counting implementation: choices for slot i times the rest."""
    if i > spec.node_bound:
        return 1
    targets = spec.node_bound - i + len(spec.labels)
    here = 0
    for p in spec.predicates:
        here += targets ** p.arity
    return here * recursive_count(spec, i + 1)


def test_single_node_binary_class_has_four_diagrams():
    spec = InterpretationClassSpec((thresholds_pred("p", 0, [0.5]),), ("a", "b"), 1, 0, 1)
    ds = list(enumerate_class(spec))
    assert len(ds) == 4 == count_class(spec)


def test_enumeration_is_duplicate_free_and_valid(tiny_spec):
    ds = list(enumerate_class(tiny_spec))
    assert len(ds) == len(set(ds)) == count_class(tiny_spec) == recursive_count(tiny_spec)
    assert all(validate_diagram(d, tiny_spec) == [] for d in ds)


def test_counts_agree_on_mixed_arity():
    spec = InterpretationClassSpec(
        (thresholds_pred("p", 0, [0.5]), thresholds_pred("q", 0, [0.2, 0.4])), ("a", "b"), 2, 0, 1)
    assert sum(1 for _ in enumerate_class(spec)) == recursive_count(spec) == count_class(spec)


def test_guard_rejects_large_classes():
    spec = InterpretationClassSpec(
        tuple(thresholds_pred(f"p{k}", 0, [0.1, 0.2, 0.3, 0.4, 0.5]) for k in range(3)),
        ("a", "b"), 3, 0, 1)
    with pytest.raises(InputError):
        next(enumerate_class(spec))


def test_single_diagram_class():
    spec = InterpretationClassSpec((thresholds_pred("p", 0, [0.5], 30),), ("a",), 1, 0, 1)
    samples = [Sample((0.2,), "a"), Sample((0.9,), "a")]
    front = exact_front(spec, samples)
    assert set(front) == {MeasurePair(Fraction(1), 30)}


@pytest.mark.parametrize("seed", range(6))
def test_vectorized_matches_naive(seed):
    toy = random_toy_instance(seed, max_nodes=2, max_samples=15)
    fast = measure_table(toy.spec, toy.samples)
    slow = measure_table(toy.spec, toy.samples, method="naive")
    assert set(fast) == set(slow)
    for pair, d in fast.items():
        assert measures(d, toy.spec, toy.samples) == pair


def test_dominated_pair_never_changes_front(toy_instances):
    toy = toy_instances[0]
    table = measure_table(toy.spec, toy.samples)
    front = max_preceq(table)
    for m in front:
        if m.correctness > 0 and m.explainability > 0:
            worse = MeasurePair(m.correctness - Fraction(1, 1000), m.explainability - 1)
            assert max_preceq(set(table) | {worse}) == front


def test_best_correctness_at(tiny_spec, xor_samples):
    table = measure_table(tiny_spec, xor_samples)
    best = best_correctness_at(table)
    for e, c in best.items():
        assert all(m.correctness <= c for m in table if m.explainability == e)
        assert MeasurePair(c, e) in table


def test_unknown_method(tiny_spec, xor_samples):
    with pytest.raises(InputError):
        measure_table(tiny_spec, xor_samples, method="magic")

import json
import random
from fractions import Fraction

import pytest

from paretointerp.bruteforce import best_correctness_at, exact_front, measure_table
from paretointerp.errors import ConsistencyError, InputError, SolverError
from paretointerp.explorer import (ExplorationAborted, Region, explore_poi, front_report,
                                   quint_synt)
from paretointerp.model import (InterpretationClassSpec, MeasurePair, Sample, dominates,
                                max_preceq, preceq)
from paretointerp.toy import random_toy_instance

from conftest import thresholds_pred


def single_diagram_class():
    spec = InterpretationClassSpec((thresholds_pred("p", 0, [0.5], 40),), ("only",), 1, 0, 1)
    return spec, [Sample((0.1,), "only"), Sample((0.7,), "only")]


def test_region_emptiness():
    assert Region(5, 4).empty and not Region(4, 4).empty
    assert Region(0, 3, Fraction(1, 2)).to_dict() == {"e_low": 0, "e_high": 3, "c_floor": "1/2"}


def test_single_diagram_front():
    spec, samples = single_diagram_class()
    front = explore_poi(spec, samples)
    assert front.pairs() == {MeasurePair(Fraction(1), 40)}
    rep = front_report(front)
    assert rep["PO"] == 1 and rep["TNP"] >= 1
    assert rep["solve_min"] >= 0 and rep["solve_max"] >= rep["solve_min"]


def test_quint_synt_interval_cases(tiny_spec, xor_samples):
    table = measure_table(tiny_spec, xor_samples)
    achievable = {m.explainability for m in table}
    best = best_correctness_at(table)
    full = quint_synt(tiny_spec, xor_samples, 0, 100)
    assert full.measures in max_preceq(table)
    gap = next(e for e in range(101) if e not in achievable)
    assert quint_synt(tiny_spec, xor_samples, gap, gap) is None
    assert quint_synt(tiny_spec, xor_samples, 10, 9) is None
    for e in achievable:
        got = quint_synt(tiny_spec, xor_samples, e, e)
        assert got.measures == MeasurePair(best[e], e)
    with pytest.raises(InputError):
        quint_synt(tiny_spec, xor_samples, -1, 5)
    with pytest.raises(InputError):
        quint_synt(tiny_spec, xor_samples, 0, 101)


def test_quint_synt_result_is_pareto_within_interval(toy_instances):
    for toy in toy_instances[:4]:
        table = measure_table(toy.spec, toy.samples)
        for lo, hi in ((0, 50), (30, 80), (60, 100)):
            got = quint_synt(toy.spec, toy.samples, lo, hi)
            inside = [m for m in table if lo <= m.explainability <= hi]
            if not inside:
                assert got is None
                continue
            assert not any(dominates(m, got.measures) for m in inside)


@pytest.mark.parametrize("seed", range(5))
def test_front_matches_bruteforce_both_orders(seed):
    toy = random_toy_instance(100 + seed)
    truth = set(exact_front(toy.spec, toy.samples))
    lifo = explore_poi(toy.spec, toy.samples)
    fifo = explore_poi(toy.spec, toy.samples, order="fifo")
    assert lifo.pairs() == truth == fifo.pairs()
    assert len(lifo.entries) == len(truth)
    pairs = [e.measures for e in lifo.entries]
    for a in pairs:
        for b in pairs:
            assert a == b or not preceq(a, b)
    assert lifo.pops <= 2 * 101 and len(lifo.entries) <= lifo.pops


def test_trace_records_every_pop(tiny_spec, xor_samples, tmp_path):
    front = explore_poi(tiny_spec, xor_samples)
    assert [r["pop"] for r in front.trace] == list(range(front.pops))
    for r in front.trace:
        assert r["outcome"] in ("pareto", "dominated", "none")
        for push in r["pushes"]:
            assert push["e_low"] <= push["e_high"]
            assert push["e_high"] - push["e_low"] < r["region"]["e_high"] - r["region"]["e_low"] + 1
    front.write_trace(tmp_path / "t.jsonl")
    lines = (tmp_path / "t.jsonl").read_text().splitlines()
    assert len(lines) == front.pops and json.loads(lines[0])["pop"] == 0
    doc = front.to_dict()
    assert doc["PO"] == len(front.entries)
    es = [e["explainability"]["grid"] for e in doc["entries"]]
    assert es == sorted(es, reverse=True)


def test_universality_on_tiny(tiny_spec, xor_samples):
    table = measure_table(tiny_spec, xor_samples)
    front = explore_poi(tiny_spec, xor_samples).pairs()
    rng = random.Random(0)
    for _ in range(50):
        w1, w2 = rng.uniform(0.01, 10), rng.uniform(0.01, 10)
        best = max(table, key=lambda m: w1 * float(m.correctness) + w2 * m.explainability / 100)
        assert best in front


def test_backend_failure_aborts_with_partial_trace(tiny_spec, xor_samples):
    calls = []

    def flaky(inst):
        calls.append(1)
        if len(calls) > 1:
            raise SolverError("boom")
        from paretointerp.maxsat import solve
        return solve(inst)

    with pytest.raises(ExplorationAborted) as info:
        explore_poi(tiny_spec, xor_samples, backend=flaky)
    partial = info.value.partial
    assert len(partial.entries) == 1 and partial.trace[-1]["outcome"] == "error"


def test_pop_cap_and_order_validation(tiny_spec, xor_samples):
    with pytest.raises(ConsistencyError):
        explore_poi(tiny_spec, xor_samples, max_pops=1)
    with pytest.raises(InputError):
        explore_poi(tiny_spec, xor_samples, order="random")

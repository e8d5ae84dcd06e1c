import math
import sys
from collections import Counter
from itertools import product

import mpmath
import numpy as np
import pytest

from paretointerp.blackbox import (Dimension, OracleSpec, PacParams, class_size_upper_bound,
                                   draw_samples, load_samples_csv, output_token, pac_sample_size,
                                   query_oracle, write_samples_csv)
from paretointerp.bruteforce import count_class
from paretointerp.errors import InputError, OracleError
from paretointerp.model import InterpretationClassSpec

from conftest import thresholds_pred


def exact_pac(size, delta, eps, realizable=True):
    """High-precision reference for the two closed-form bounds."""
    mpmath.mp.dps = 50
    d, e = mpmath.mpf(delta), mpmath.mpf(eps)
    if realizable:
        return int(mpmath.ceil(mpmath.log(size / d) / e))
    return int(mpmath.ceil(2 * mpmath.log(2 * size / d) / e ** 2))


def test_worked_sample_sizes():
    assert pac_sample_size(PacParams(0.05, 0.05, True, 20)) == 120
    assert pac_sample_size(PacParams(0.05, 0.1, False, 20)) == 1337
    assert exact_pac(1, 0.5, 0.5) == 2
    assert pac_sample_size(PacParams(0.5, 0.5, True, 1)) == 2


def test_pac_validation():
    for bad in ((0, 0.1), (1, 0.1), (0.1, 0), (0.1, 1.5)):
        with pytest.raises(InputError):
            PacParams(*bad)
    with pytest.raises(InputError):
        PacParams(0.1, 0.1, True, 0)


def test_pac_matches_high_precision_and_is_monotone():
    grid = [0.01, 0.05, 0.1, 0.3, 0.5]
    sizes = [1, 20, 10 ** 3, 10 ** 6, 5 * 10 ** 9]
    for d, e, n in product(grid, grid, sizes):
        for r in (True, False):
            m = pac_sample_size(PacParams(d, e, r, n))
            assert m == exact_pac(n, d, e, r)
        real = pac_sample_size(PacParams(d, e, True, n))
        assert pac_sample_size(PacParams(d, e, False, n)) >= real


def test_class_size_bounds():
    one = InterpretationClassSpec((thresholds_pred("p", 0, [0.5]),), ("a", "b"), 1, 0, 1)
    assert class_size_upper_bound(one) == 4
    two = InterpretationClassSpec(
        (thresholds_pred("p", 0, [0.5]), thresholds_pred("q", 0, [0.2])), ("a", "b"), 2, 0, 1)
    assert class_size_upper_bound(two) == 144
    three = InterpretationClassSpec(
        (thresholds_pred("p", 0, [0.5]), thresholds_pred("q", 0, [0.2, 0.4])), ("a", "b"), 3, 0, 1)
    assert class_size_upper_bound(three) >= count_class(three)


def test_constant_oracle():
    o = OracleSpec("builtin", (Dimension("x", 0, 1),), name="constant", params={"value": "z"})
    samples = draw_samples(o, 10, seed=3)
    assert len(samples) == 10 and {s.label for s in samples} == {"z"}


def test_determinism():
    o = OracleSpec("builtin", (Dimension("x", 0, 1), Dimension("c", values=(0, 1, 2))),
                   name="linear", seed=4, params={"noise": 0.2})
    assert draw_samples(o, 50, seed=8) == draw_samples(o, 50, seed=8)
    assert draw_samples(o, 50, seed=8) != draw_samples(o, 50, seed=9)
    cats = {s.input[1] for s in draw_samples(o, 200, seed=1)}
    assert cats == {0.0, 1.0, 2.0}


def test_dataset_oracle_with_replacement(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("x,y,out\n0,0,1\n1,0,0\n1,1,1\n")
    o = OracleSpec("dataset", (), labeler={"0": "no", "1": "yes"}, path=str(path))
    samples = draw_samples(o, 3000, seed=0)
    counts = Counter(s.input for s in samples)
    assert set(counts) == {(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)}
    for c in counts.values():
        assert abs(c / 3000 - 1 / 3) < 0.04
    assert all(s.label == ("yes" if s.input != (1.0, 0.0) else "no") for s in samples)


def test_unmappable_output_names_input(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("x,out\n0.5,7\n")
    o = OracleSpec("dataset", (), labeler={"0": "no"}, path=str(path))
    with pytest.raises(OracleError, match="0.5"):
        draw_samples(o, 1)


def test_subprocess_oracle(tmp_path):
    script = tmp_path / "bb.py"
    script.write_text(
        "import sys\n"
        "for line in sys.stdin:\n"
        "    x = [float(v) for v in line.split(',')]\n"
        "    print(1 if sum(x) > 1 else 0, flush=True)\n"
    )
    dom = (Dimension("a", 0, 1), Dimension("b", 0, 1))
    o = OracleSpec("subprocess", dom, labeler={"0": "lo", "1": "hi"},
                   command=(sys.executable, str(script)))
    samples = draw_samples(o, 20, seed=2)
    assert all(s.label == ("hi" if sum(s.input) > 1 else "lo") for s in samples)


def test_subprocess_failure_is_oracle_error(tmp_path):
    script = tmp_path / "bad.py"
    script.write_text("import sys\nsys.stdin.readline()\nsys.exit(3)\n")
    o = OracleSpec("subprocess", (Dimension("a", 0, 1),), command=(sys.executable, str(script)))
    with pytest.raises(OracleError):
        draw_samples(o, 2)
    with pytest.raises(OracleError):
        draw_samples(OracleSpec("subprocess", (Dimension("a", 0, 1),), command=("/no/such/bin",)), 1)


def test_builtin_models_run():
    rng = np.random.default_rng(0)
    air = OracleSpec("builtin", (Dimension("h", 0, 24), Dimension("c", values=range(6)),
                                 Dimension("p", -5, 5)), name="airplane")
    raw = query_oracle(air, np.column_stack([rng.uniform(0, 24, 50), rng.integers(0, 6, 50),
                                             rng.uniform(-5, 5, 50)]))
    assert set(map(output_token, raw)) <= {"0", "1"}
    with pytest.raises(InputError):
        OracleSpec("builtin", name="nope")
    with pytest.raises(InputError):
        draw_samples(air, 0)


def test_output_tokens():
    assert output_token(1.0) == "1" == output_token(np.int64(1)) == output_token(True)
    assert output_token(0.25) == "0.25" and output_token(" yes ") == "yes"


def test_csv_round_trip(tmp_path):
    o = OracleSpec("builtin", (Dimension("x", 0, 1), Dimension("y", -1, 1)), name="linear",
                   labeler={"0": "neg", "1": "pos"})
    samples = draw_samples(o, 30, seed=5)
    write_samples_csv(samples, tmp_path / "s.csv", ("x", "y"))
    assert load_samples_csv(tmp_path / "s.csv", o) == samples
    assert load_samples_csv(tmp_path / "s.csv") == samples
    with pytest.raises(InputError):
        load_samples_csv(tmp_path / "missing.csv")

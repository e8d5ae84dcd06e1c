import os
import shutil
import stat
import sys

import numpy as np
import pytest

from paretointerp.cnf import WcnfInstance
from paretointerp.errors import ExternalSolverError, InputError
from paretointerp.maxsat import (OPTIMAL, SOLVER_ENV, UNSAT_HARD, check_model, get_backend,
                                 parse_solver_output, solve, solve_external)

from helpers import brute_force_optimum, random_wcnf

STRATEGIES = ["core", "binary", "linear"]
RC2_CMD = shutil.which("rc2.py")


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_small_examples(strategy):
    out = solve(WcnfInstance(2, [(1, 2)], [(2, (-1,)), (1, (-2,))]), strategy)
    assert out.status == OPTIMAL and out.optimum == 2
    assert out.model[1] is False and out.model[2] is True
    assert solve(WcnfInstance(1, [], [(1, (1,)), (2, (-1,))]), strategy).optimum == 2
    assert solve(WcnfInstance(1, [(1,), (-1,)], [(1, (1,))]), strategy).status == UNSAT_HARD
    assert solve(WcnfInstance(1, [()], []), strategy).status == UNSAT_HARD
    assert solve(WcnfInstance(0), strategy).optimum == 0


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_random_instances_against_enumeration(strategy):
    rng = np.random.default_rng(1234)
    for _ in range(40):
        inst = random_wcnf(rng, int(rng.integers(1, 13)))
        expect = brute_force_optimum(inst)
        out = solve(inst, strategy)
        if expect is None:
            assert out.status == UNSAT_HARD
        else:
            assert out.optimum == expect
            assert check_model(inst, out.model) == (True, out.optimum)


def test_unknown_strategy():
    with pytest.raises(InputError):
        solve(WcnfInstance(1), "greedy")


def test_check_model_empty_and_forms():
    assert check_model(WcnfInstance(0), {}) == (True, 0)
    inst = WcnfInstance(2, [(1,)], [(3, (2,)), (1, (-2,))])
    assert check_model(inst, {1: True, 2: True}) == (True, 3)
    assert check_model(inst, [-1, 2]) == (False, 3)


def test_monotonicity():
    rng = np.random.default_rng(9)
    for _ in range(20):
        inst = random_wcnf(rng, 8)
        base = solve(inst)
        more_soft = WcnfInstance(inst.nvars, inst.hard, inst.soft + [(3, (1,))])
        if base.optimal:
            assert solve(more_soft).optimum >= base.optimum
        more_hard = WcnfInstance(inst.nvars, inst.hard + [(1, -2)], inst.soft)
        tighter = solve(more_hard)
        if tighter.optimal:
            assert base.optimal and tighter.optimum <= base.optimum


def test_parse_output_formats():
    status, cost, model = parse_solver_output("c hi\no 5\no 3\ns OPTIMUM FOUND\nv 1 -2 3 0\n", 3)
    assert status == "OPTIMUM FOUND" and cost == 3 and model == (None, True, False, True)
    _, _, model = parse_solver_output("s OPTIMUM FOUND\nv 101\n", 3)
    assert model == (None, True, False, True)
    with pytest.raises(ExternalSolverError):
        parse_solver_output("o x\n", 1)


def fake_solver(tmp_path, body, code=0):
    script = tmp_path / "fake.py"
    script.write_text(f"import sys\nprint('''{body}''')\nsys.exit({code})\n")
    return [sys.executable, str(script)]


def test_cost_conversion(tmp_path):
    inst = WcnfInstance(2, [], [(4, (1,)), (3, (-1,)), (3, (2,))])
    out = solve_external(inst, fake_solver(tmp_path, "o 3\ns OPTIMUM FOUND\nv 1 2", 30))
    assert out.optimum == 10 - 3 == 7


def test_external_model_is_reverified(tmp_path):
    inst = WcnfInstance(2, [(1,)], [(1, (2,))])
    with pytest.raises(ExternalSolverError):
        solve_external(inst, fake_solver(tmp_path, "s OPTIMUM FOUND\nv -1 2"))
    with pytest.raises(ExternalSolverError):
        solve_external(inst, fake_solver(tmp_path, "o 0\ns OPTIMUM FOUND\nv 1 -2"))
    with pytest.raises(ExternalSolverError):
        solve_external(inst, fake_solver(tmp_path, "s OPTIMUM FOUND\nv 1 2", code=3))
    with pytest.raises(ExternalSolverError):
        solve_external(inst, fake_solver(tmp_path, "s UNKNOWN"))
    with pytest.raises(ExternalSolverError):
        solve_external(inst, ["/nonexistent/solver"])
    assert solve_external(inst, fake_solver(tmp_path, "s UNSATISFIABLE", 20)).status == UNSAT_HARD


@pytest.mark.skipif(RC2_CMD is None, reason="rc2.py not installed")
def test_external_rc2_matches_builtin():
    rng = np.random.default_rng(77)
    for _ in range(10):
        inst = random_wcnf(rng)
        a, b = solve(inst), solve_external(inst, f"{RC2_CMD} -vv")
        assert a.status == b.status and a.optimum == b.optimum


def test_backend_resolution(monkeypatch):
    assert get_backend("builtin") is solve
    monkeypatch.setenv(SOLVER_ENV, "builtin")
    assert get_backend(None) is solve
    inst = WcnfInstance(1, [], [(2, (1,))])
    assert get_backend("builtin-linear")(inst).optimum == 2
    assert get_backend(lambda i: "x")(inst) == "x"

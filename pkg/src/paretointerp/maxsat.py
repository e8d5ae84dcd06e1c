"""Weighted partial MaxSAT: satisfy every hard clause, maximise satisfied soft weight.

:func:`solve` offers three strategies behind one contract:

``"core"`` (default)
    core-guided search (RC2 from ``python-sat``), which copes with the
    hundreds of sample soft clauses of realistic runs;
``"binary"`` / ``"linear"``
    SAT-based search on the objective.  Each soft clause gets an indicator
    literal; a ripple-carry adder (the same gadgets used for explainability
    thresholds) sums the weighted indicators and a comparator output, passed
    as an assumption, asks the SAT oracle for "satisfied weight >= B".

Every returned model is re-checked clause by clause, and the reported
optimum is recomputed from it.  Satisfiability itself is delegated to a CDCL
engine from ``python-sat``.
"""
from __future__ import annotations

import os
import shlex
import subprocess
import tempfile
from dataclasses import dataclass
from typing import Callable, Sequence

from pysat.examples.rc2 import RC2
from pysat.formula import WCNF
from pysat.solvers import Solver

from .circuits import Gates, const_word, gated_word, greater_than, sum_words
from .cnf import VarPool, WcnfInstance, clause_satisfied
from .errors import ExternalSolverError, InputError, SolverError

OPTIMAL = "optimal"
UNSAT_HARD = "unsatisfiable-hard"

DEFAULT_SAT_ENGINE = "glucose4"
SOLVER_ENV = "PARETOINTERP_MAXSAT"


@dataclass(frozen=True)
class SolveOutcome:
    status: str
    model: tuple | None = None
    optimum: int | None = None

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL

    def value(self, var: int) -> bool:
        return self.model[var]


def _normalise(assignment, nvars: int) -> tuple:
    """Return a tuple ``m`` with ``m[v]`` the truth value of variable ``v`` (``m[0]`` unused)."""
    vals = [False] * (nvars + 1)
    if isinstance(assignment, dict):
        for v, b in assignment.items():
            if 1 <= v <= nvars:
                vals[v] = bool(b)
    elif len(assignment) == nvars + 1 and all(isinstance(b, bool) for b in assignment[1:]):
        vals[1:] = assignment[1:]
    else:
        for lit in assignment:
            if 1 <= abs(lit) <= nvars:
                vals[abs(lit)] = lit > 0
    vals[0] = None
    return tuple(vals)


def check_model(inst: WcnfInstance, assignment) -> tuple[bool, int]:
    """Exact clause-by-clause evaluation: (all hard satisfied, satisfied soft weight)."""
    model = _normalise(assignment, inst.nvars)
    hard_ok = all(clause_satisfied(c, model) for c in inst.hard)
    weight = sum(w for w, c in inst.soft if clause_satisfied(c, model))
    return hard_ok, weight


STRATEGIES = ("core", "binary", "linear")


def solve(inst: WcnfInstance, strategy: str = "core", engine: str = DEFAULT_SAT_ENGINE
          ) -> SolveOutcome:
    """Proven optimum of ``inst``.

    ``strategy`` is ``"core"`` (core-guided), ``"binary"`` (bisect on the
    bound) or ``"linear"`` (SAT-UNSAT: ask for one more than the current
    model's weight).
    """
    if strategy not in STRATEGIES:
        raise InputError(f"unknown search strategy {strategy!r}")
    if any(len(c) == 0 for c in inst.hard):
        return SolveOutcome(UNSAT_HARD)
    if strategy == "core":
        return _solve_core(inst, engine)
    pool = VarPool()
    pool.top = inst.nvars
    extra: list = []
    g = Gates(pool, extra)
    indicators = []
    for w, clause in inst.soft:
        if len(clause) == 1:
            indicators.append((w, clause[0]))
        elif len(clause) == 0:
            continue
        else:
            r = pool.new("relax")
            extra.append((-r, *clause))
            indicators.append((w, r))
    total = sum(w for w, _ in indicators)

    with Solver(name=engine, bootstrap_with=[list(c) for c in inst.hard]) as sat:
        if not sat.solve():
            return SolveOutcome(UNSAT_HARD)
        best = _normalise(sat.get_model() or [], inst.nvars)
        _, lo = check_model(inst, best)
        hi = total
        if lo < hi:
            width = max(total.bit_length(), 1)
            words = [gated_word(g, w, width, lit) for w, lit in indicators]
            acc = sum_words(g, words, width)
        while lo < hi:
            bound = (lo + hi + 1) // 2 if strategy == "binary" else lo + 1
            flag = greater_than(g, acc, const_word(bound - 1, width))
            for c in extra:
                sat.add_clause(list(c))
            extra.clear()
            if flag is False:
                hi = bound - 1
                continue
            assumptions = [] if flag is True else [flag]
            if sat.solve(assumptions=assumptions):
                model = _normalise(sat.get_model(), inst.nvars)
                ok, weight = check_model(inst, model)
                if not ok or weight < bound:
                    raise SolverError("SAT oracle returned a model violating the encoding")
                best, lo = model, weight
            else:
                hi = bound - 1
    ok, weight = check_model(inst, best)
    if not ok or weight != lo:
        raise SolverError("returned model does not satisfy the hard clauses")
    return SolveOutcome(OPTIMAL, best, lo)


_RC2_ENGINES = {"glucose4": "g4", "glucose3": "g3", "cadical153": "cd15", "minisat22": "m22"}


def _solve_core(inst: WcnfInstance, engine: str) -> SolveOutcome:
    wcnf = WCNF()
    for c in inst.hard:
        wcnf.append(list(c))
    reachable = 0
    for w, c in inst.soft:
        if c:  # an empty soft clause can never be satisfied
            wcnf.append(list(c), weight=w)
            reachable += w
    with RC2(wcnf, solver=_RC2_ENGINES.get(engine, engine)) as rc2:
        raw = rc2.compute()
        cost = rc2.cost
    if raw is None:
        return SolveOutcome(UNSAT_HARD)
    model = _normalise(raw, inst.nvars)
    ok, weight = check_model(inst, model)
    if not ok or weight != reachable - cost:
        raise SolverError("core-guided search returned a model violating the instance")
    return SolveOutcome(OPTIMAL, model, weight)


def parse_solver_output(text: str, nvars: int) -> tuple[str | None, int | None, tuple | None]:
    """Parse MaxSAT-evaluation output into (status line, last cost, model)."""
    status = cost = None
    v_tokens: list[str] = []
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("s "):
            status = line[2:].strip()
        elif line.startswith("o "):
            try:
                cost = int(line.split()[1])
            except (IndexError, ValueError):
                raise ExternalSolverError(f"malformed cost line {line!r}") from None
        elif line.startswith("v ") or line == "v":
            v_tokens.extend(line.split()[1:])
    model = None
    if v_tokens:
        if len(v_tokens) == 1 and set(v_tokens[0]) <= {"0", "1"} and v_tokens[0] not in ("0",):
            bits = v_tokens[0]
            model = _normalise({k + 1: b == "1" for k, b in enumerate(bits)}, nvars)
        else:
            try:
                lits = [int(t) for t in v_tokens]
            except ValueError:
                raise ExternalSolverError("malformed v line") from None
            model = _normalise([l for l in lits if l != 0], nvars)
    return status, cost, model


def solve_external(inst: WcnfInstance, command: str | Sequence[str], timeout: float | None = None
                   ) -> SolveOutcome:
    """Run an external MaxSAT solver on a temporary WCNF file and re-verify its answer.

    The command receives the file path as its last argument.  Exit codes 0,
    10, 20 and 30 (the MaxSAT-evaluation conventions) are accepted; anything
    else is an error.
    """
    argv = shlex.split(command) if isinstance(command, str) else list(command)
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "instance.wcnf")
        inst.write(path)
        try:
            proc = subprocess.run(argv + [path], capture_output=True, text=True, timeout=timeout)
        except (OSError, subprocess.TimeoutExpired) as exc:
            raise ExternalSolverError(f"could not run {argv[0]!r}: {exc}") from exc
    if proc.returncode not in (0, 10, 20, 30):
        raise ExternalSolverError(
            f"{argv[0]!r} exited with {proc.returncode}: {proc.stderr.strip()[:200]}"
        )
    status, cost, model = parse_solver_output(proc.stdout, inst.nvars)
    if status == "UNSATISFIABLE":
        return SolveOutcome(UNSAT_HARD)
    if status != "OPTIMUM FOUND":
        raise ExternalSolverError(f"external solver did not report an optimum (status {status!r})")
    if model is None:
        raise ExternalSolverError("external solver printed no model (v line)")
    ok, weight = check_model(inst, model)
    if not ok:
        raise ExternalSolverError("external model violates hard clauses")
    if cost is not None and inst.soft_total - cost != weight:
        raise ExternalSolverError(
            f"reported cost {cost} disagrees with the model's cost {inst.soft_total - weight}"
        )
    return SolveOutcome(OPTIMAL, model, weight)


Backend = Callable[[WcnfInstance], SolveOutcome]


def get_backend(name: str | Backend | None = None) -> Backend:
    """Resolve a backend name or an external command line to a solve function.

    Names: ``"builtin"`` (core-guided), ``"builtin-binary"``,
    ``"builtin-linear"``.  Anything else is run as an external solver command.

    ``None`` consults the ``PARETOINTERP_MAXSAT`` environment variable and
    falls back to the built-in solver.
    """
    if callable(name):
        return name
    if name is None:
        name = os.environ.get(SOLVER_ENV, "builtin")
    if name == "builtin":
        return solve
    if name in ("builtin-binary", "builtin-linear"):
        strategy = name.split("-")[1]
        return lambda inst: solve(inst, strategy=strategy)
    return lambda inst: solve_external(inst, name)

"""Independent oracles shared by the unit and acceptance tests."""
from itertools import product

import numpy as np
from pysat.solvers import Solver

from paretointerp.circuits import Gates, const_word, greater_than, less_than, ripple_add
from paretointerp.cnf import VarPool, WcnfInstance

W = 7


class Circuit:
    """Two 7-bit input words ``x`` and ``y`` feeding a gate network.

    Outputs are read by unit propagation from the inputs; gates define their
    outputs in both directions, so propagation alone fixes every output bit.
    """

    def __init__(self):
        self.pool = VarPool()
        self.clauses = []
        self.g = Gates(self.pool, self.clauses)
        self.x = [self.pool.new("x") for _ in range(W)]
        self.y = [self.pool.new("y") for _ in range(W)]

    def inputs(self, xv, yv):
        return [v if xv >> k & 1 else -v for k, v in enumerate(self.x)] + \
               [v if yv >> k & 1 else -v for k, v in enumerate(self.y)]

    def solver(self):
        return Solver(name="glucose4", bootstrap_with=[list(c) for c in self.clauses])


def bit_value(bit, implied):
    if isinstance(bit, bool):
        return bit
    if bit in implied:
        return True
    if -bit in implied:
        return False
    raise AssertionError(f"output literal {bit} not fixed by propagation")


def adder_mismatches():
    """All x + y <= 127 through the ripple-carry adder; returns the mismatch list."""
    c = Circuit()
    out = ripple_add(c.g, c.x, c.y, W)
    bad = []
    with c.solver() as s:
        for xv in range(128):
            for yv in range(128 - xv):
                ok, implied = s.propagate(assumptions=c.inputs(xv, yv))
                implied = set(implied)
                got = sum(1 << k for k, b in enumerate(out) if bit_value(b, implied))
                if not ok or got != xv + yv:
                    bad.append((xv, yv, got))
    return bad


def comparator_mismatches():
    """All (value, bound) in 0..127 squared, for both chains, with variable and constant bounds."""
    c = Circuit()
    lt = less_than(c.g, c.x, c.y)
    gt = greater_than(c.g, c.x, c.y)
    bad = []
    with c.solver() as s:
        for xv, yv in product(range(128), repeat=2):
            ok, implied = s.propagate(assumptions=c.inputs(xv, yv))
            implied = set(implied)
            if not ok or bit_value(lt, implied) != (xv < yv) or bit_value(gt, implied) != (xv > yv):
                bad.append(("var", xv, yv))
    # constant bounds, as the threshold encoding uses them
    c = Circuit()
    consts = {b: (less_than(c.g, c.x, const_word(b, W)), greater_than(c.g, c.x, const_word(b, W)))
              for b in range(128)}
    with c.solver() as s:
        for xv in range(128):
            ok, implied = s.propagate(assumptions=c.inputs(xv, 0)[:W])
            implied = set(implied)
            for b, (lt_b, gt_b) in consts.items():
                if not ok or bit_value(lt_b, implied) != (xv < b) or bit_value(gt_b, implied) != (xv > b):
                    bad.append(("const", xv, b))
    return bad


def random_wcnf(rng: np.random.Generator, nvars: int | None = None) -> WcnfInstance:
    n = int(nvars or rng.integers(1, 21))
    inst = WcnfInstance(n)

    def clause(maxlen):
        k = int(rng.integers(1, maxlen + 1))
        vs = rng.choice(np.arange(1, n + 1), size=min(k, n), replace=False)
        return tuple(int(v) if rng.random() < 0.5 else -int(v) for v in vs)

    inst.add_hard([clause(3) for _ in range(int(rng.integers(0, 2 * n)))])
    for _ in range(int(rng.integers(1, 2 * n + 2))):
        inst.add_soft(int(rng.integers(1, 10)), clause(2 if rng.random() < 0.3 else 1))
    return inst


def brute_force_optimum(inst: WcnfInstance):
    """Exhaustive scan of all 2**n assignments with numpy; None if no assignment is feasible."""
    n = inst.nvars
    idx = np.arange(1 << n, dtype=np.int64)
    vals = ((idx[:, None] >> np.arange(n)) & 1).astype(bool)  # vals[a, v-1]

    def sat(clause):
        acc = np.zeros(len(idx), dtype=bool)
        for lit in clause:
            col = vals[:, abs(lit) - 1]
            acc |= col if lit > 0 else ~col
        return acc

    feasible = np.ones(len(idx), dtype=bool)
    for c in inst.hard:
        feasible &= sat(c)
    if not feasible.any():
        return None
    score = np.zeros(len(idx), dtype=np.int64)
    for w, c in inst.soft:
        score += w * sat(c)
    return int(score[feasible].max())

"""
Weighted partial MaxSAT
=======================

A tiny instance solved with each built-in strategy, then written as WCNF.
"""
import sys

from paretointerp.cnf import WcnfInstance
from paretointerp.maxsat import STRATEGIES, solve

inst = WcnfInstance(3)
inst.add_hard([(1, 2), (-1, -3)])  # x1 or x2, not both x1 and x3
inst.add_soft(5, (1,))
inst.add_soft(4, (3,))
inst.add_soft(2, (-2,))

for strategy in STRATEGIES:
    out = solve(inst, strategy=strategy)
    print(f"{strategy:>7}: satisfied weight {out.optimum} of {inst.soft_total}, model {out.model[1:]}")

sys.stdout.write(inst.to_wcnf())

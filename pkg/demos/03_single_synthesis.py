"""
One Pareto-optimal diagram per explainability interval
======================================================

Draw samples from the airplane-like config and ask for the most correct
diagram in a few explainability windows.
"""
from pathlib import Path

from paretointerp.blackbox import draw_samples
from paretointerp.config import load_config
from paretointerp.decode import diagram_to_dict
from paretointerp.explorer import quint_synt

cfg = load_config(Path(__file__).resolve().parent.parent / "configs" / "airplane.json")
samples = draw_samples(cfg.oracle, 150, seed=1)

for lo, hi in [(0, 100), (0, 60), (80, 100), (96, 100)]:
    found = quint_synt(cfg.spec, samples, lo, hi)
    if found is None:
        print(f"[{lo}, {hi}]: nothing")
        continue
    print(f"[{lo}, {hi}]: {found.measures} in {found.seconds:.2f}s")
    print("   ", diagram_to_dict(found.diagram.pruned()))

"""
How many samples?
=================

PAC sample sizes for the shipped configs under both assumptions.
"""
from pathlib import Path

from paretointerp.blackbox import PacParams, class_size_upper_bound, pac_sample_size
from paretointerp.config import load_config

configs = Path(__file__).resolve().parent.parent / "configs"
for path in sorted(configs.glob("*.json")):
    cfg = load_config(path)
    size = class_size_upper_bound(cfg.spec)
    real = pac_sample_size(PacParams(0.05, 0.05, True, size))
    agn = pac_sample_size(PacParams(0.05, 0.05, False, size))
    print(f"{cfg.name:>15}: |E| <= {size:.3e}, realizable {real}, agnostic {agn}")

# the realizable bound grows with log |E| only
for size in (10, 10 ** 3, 10 ** 6, 10 ** 9):
    print(size, pac_sample_size(PacParams(0.05, 0.05, True, size)))

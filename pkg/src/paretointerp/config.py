"""JSON configuration: interpretation class, label mapping and black-box description.

Layout::

    {
      "name": "airplane",
      "inputs": [{"name": "hours", "low": 0, "high": 12}, {"name": "clouds", "values": [0, 1, 2]}],
      "labels": ["trusted", "alert"],
      "labeler": {"0": "trusted", "1": "alert"},
      "nodeBound": 3,
      "predicates": [
        {"id": "time", "feature": {"kind": "projection", "input": "hours"},
         "branching": {"kind": "thresholds", "cuts": [4, 10]}}
      ],
      "weights": {"predicates": {"time": 25}, "unusedNode": 30},
      "oracle": {"kind": "builtin", "name": "airplane", "seed": 0},
      "sampling": {"delta": 0.05, "epsilon": 0.05, "agnostic": false}
    }

Features name their input by ``"input"`` (a name) or ``"column"`` (an
index).  ``unusedNode`` is one integer for every slot or a list with one per
slot.  Relative dataset paths resolve against the config file's directory.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .blackbox import Dimension, OracleSpec, PacParams
from .errors import ConfigError, InputError
from .model import BranchingSpec, FeatureSpec, InterpretationClassSpec, Predicate


@dataclass(frozen=True)
class Config:
    name: str
    spec: InterpretationClassSpec
    oracle: OracleSpec | None
    delta: float = 0.05
    epsilon: float = 0.05
    agnostic: bool = False
    path: str | None = None

    def pac(self, delta: float | None = None, epsilon: float | None = None,
            agnostic: bool | None = None, class_size: int = 1) -> PacParams:
        return PacParams(
            self.delta if delta is None else delta,
            self.epsilon if epsilon is None else epsilon,
            not (self.agnostic if agnostic is None else agnostic),
            class_size,
        )


def _column(ref, names: list[str], where: str) -> int:
    if isinstance(ref, bool):
        raise ConfigError(f"{where}: bad input reference {ref!r}")
    if isinstance(ref, int):
        if not 0 <= ref < len(names):
            raise ConfigError(f"{where}: column {ref} out of range")
        return ref
    if ref not in names:
        raise ConfigError(f"{where}: unknown input {ref!r}; inputs are {names}")
    return names.index(ref)


def _feature(raw: dict, names: list[str], where: str) -> FeatureSpec:
    kind = raw.get("kind", "projection")
    if kind in ("projection", "abs_projection"):
        ref = raw.get("input", raw.get("column"))
        return FeatureSpec(kind, column=_column(ref, names, where))
    if kind == "affine":
        coef = raw.get("coefficients")
        if isinstance(coef, dict):
            vec = [0.0] * len(names)
            for ref, c in coef.items():
                vec[_column(ref, names, where)] = float(c)
            coef = vec
        return FeatureSpec.affine(coef or (), raw.get("offset", 0.0))
    raise ConfigError(f"{where}: unknown feature kind {kind!r}")


def _branching(raw: dict, where: str) -> BranchingSpec:
    kind = raw.get("kind")
    if kind == "thresholds":
        return BranchingSpec.thresholds(raw.get("cuts", ()))
    if kind == "categorical":
        mapping = raw.get("map", {})
        try:
            pairs = [(float(k), int(v)) for k, v in mapping.items()]
        except (TypeError, ValueError, AttributeError) as exc:
            raise ConfigError(f"{where}: categorical map must be value -> branch: {exc}") from exc
        return BranchingSpec.categorical(pairs, int(raw.get("default", 0)))
    raise ConfigError(f"{where}: unknown branching kind {kind!r}")


def _dimension(raw: dict, k: int) -> Dimension:
    name = raw.get("name", f"x{k}")
    if "values" in raw:
        return Dimension(name, values=tuple(raw["values"]))
    return Dimension(name, raw.get("low"), raw.get("high"))


def _oracle(raw: dict | None, domain, labeler, base: Path) -> OracleSpec | None:
    if raw is None:
        return None
    kind = raw.get("kind")
    path = raw.get("path")
    if path is not None and not Path(path).is_absolute():
        path = str(base / path)
    command = raw.get("command", ())
    if isinstance(command, list):
        command = tuple(command)
    return OracleSpec(kind, domain, labeler=labeler, path=path, command=command,
                      name=raw.get("name"), seed=int(raw.get("seed", 0)),
                      params=dict(raw.get("params", {})))


def config_from_dict(data: dict, base: Path | str = ".", path: str | None = None) -> Config:
    """Validate and build a :class:`Config`; every problem raises :class:`ConfigError`."""
    base = Path(base)
    try:
        inputs = data["inputs"]
        names = [d.get("name", f"x{k}") for k, d in enumerate(inputs)]
        domain = tuple(_dimension(d, k) for k, d in enumerate(inputs))
        labels = tuple(str(lab) for lab in data["labels"])
        weights = data.get("weights", {})
        pweights = weights.get("predicates", {})
        predicates = []
        for k, raw in enumerate(data["predicates"]):
            pid = str(raw.get("id", f"p{k}"))
            where = f"predicate {pid!r}"
            predicates.append(Predicate.make(
                pid, _feature(raw.get("feature", {}), names, where),
                _branching(raw.get("branching", {}), where),
                weight=pweights.get(pid, raw.get("weight", 0)),
                arity=raw.get("arity"),
            ))
        unknown = set(pweights) - {p.id for p in predicates}
        if unknown:
            raise ConfigError(f"weights given for unknown predicates {sorted(unknown)}")
        n = data["nodeBound"]
        unused = weights.get("unusedNode", 0)
        spec = InterpretationClassSpec(tuple(predicates), labels, n,
                                       unused if isinstance(unused, int) else tuple(unused),
                                       len(names), tuple(names))
        labeler = data.get("labeler")
        if labeler is not None:
            labeler = {str(k): str(v) for k, v in labeler.items()}
            bad = set(labeler.values()) - set(labels)
            if bad:
                raise ConfigError(f"labeler maps to undeclared labels {sorted(bad)}")
        oracle = _oracle(data.get("oracle"), domain, labeler, base)
        sampling = data.get("sampling", {})
        cfg = Config(str(data.get("name", Path(path).stem if path else "config")), spec, oracle,
                     float(sampling.get("delta", 0.05)), float(sampling.get("epsilon", 0.05)),
                     bool(sampling.get("agnostic", False)), path)
        cfg.pac()  # validates delta and epsilon
        return cfg
    except ConfigError:
        raise
    except KeyError as exc:
        raise ConfigError(f"missing config section {exc}") from exc
    except (InputError, TypeError, ValueError, AttributeError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path) -> Config:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{p}: top level must be an object")
    try:
        return config_from_dict(data, p.parent, str(p))
    except ConfigError as exc:
        raise ConfigError(f"{p}: {exc}") from exc

"""Black-box oracles, sample acquisition and PAC sample sizes.

Three oracle kinds are supported:

* ``dataset``: rows of a labelled CSV file, drawn uniformly with replacement;
* ``subprocess``: a child process answering one query per line on stdin/stdout;
* ``builtin``: a named scripted rule model (stand-ins for trained networks).

Inputs for the non-dataset kinds are drawn i.i.d. from the uniform product
distribution over the declared input domain.
"""
from __future__ import annotations

import csv
import math
import shlex
import struct
import subprocess
import threading
import zlib
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import InputError, OracleError
from .model import InterpretationClassSpec, Sample


# ---------------------------------------------------------------------------
# PAC bounds


@dataclass(frozen=True)
class PacParams:
    delta: float
    epsilon: float
    realizable: bool = True
    class_size: int = 1

    def __post_init__(self):
        for name in ("delta", "epsilon"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise InputError(f"{name} must lie strictly inside (0, 1), got {v}")
        if isinstance(self.class_size, bool) or not isinstance(self.class_size, int) or self.class_size < 1:
            raise InputError(f"class size must be a positive integer, got {self.class_size!r}")


def pac_sample_size(p: PacParams) -> int:
    """Number of i.i.d. samples for confidence ``1 - delta`` and error ``epsilon``.

    Realizable: ``ceil(ln(|E| / delta) / epsilon)``.
    Agnostic:   ``ceil(2 ln(2 |E| / delta) / epsilon**2)``.
    """
    if p.realizable:
        return math.ceil((math.log(p.class_size) - math.log(p.delta)) / p.epsilon)
    return math.ceil(2 * (math.log(2 * p.class_size) - math.log(p.delta)) / p.epsilon ** 2)


def class_size_upper_bound(spec: InterpretationClassSpec) -> int:
    """Over-count of syntactic diagrams: prod_i |P| * (n - i + |L|) ** cmax."""
    n, P, L = spec.node_bound, len(spec.predicates), len(spec.labels)
    out = 1
    for i in range(1, n + 1):
        out *= P * (n - i + L) ** spec.cmax
    return out


# ---------------------------------------------------------------------------
# oracle description


@dataclass(frozen=True)
class Dimension:
    """Sampling domain of one input: a real range ``[low, high)`` or a finite value set."""

    name: str
    low: float | None = None
    high: float | None = None
    values: tuple[float, ...] = ()

    def __post_init__(self):
        if self.values:
            object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        elif self.low is None or self.high is None or not self.low <= self.high:
            raise InputError(f"input {self.name!r} needs low <= high or a value set")

    def draw(self, rng: np.random.Generator, m: int) -> np.ndarray:
        if self.values:
            return np.asarray(self.values)[rng.integers(0, len(self.values), m)]
        return rng.uniform(self.low, self.high, m)


@dataclass(frozen=True)
class OracleSpec:
    kind: str
    domain: tuple[Dimension, ...] = ()
    labeler: dict | None = field(default=None, hash=False)
    path: str | None = None
    command: tuple[str, ...] = ()
    name: str | None = None
    seed: int = 0
    params: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if self.kind not in ("dataset", "subprocess", "builtin"):
            raise InputError(f"unknown oracle kind {self.kind!r}")
        if self.kind == "dataset" and not self.path:
            raise InputError("dataset oracle needs a path")
        if self.kind == "subprocess" and not self.command:
            raise InputError("subprocess oracle needs a command")
        if self.kind == "builtin" and self.name not in BUILTIN_MODELS:
            raise InputError(f"unknown builtin model {self.name!r}; known: {sorted(BUILTIN_MODELS)}")
        if isinstance(self.command, str):
            object.__setattr__(self, "command", tuple(shlex.split(self.command)))
        object.__setattr__(self, "domain", tuple(self.domain))

    @property
    def dim(self) -> int:
        return len(self.domain)

    def label_of(self, raw) -> str:
        token = output_token(raw)
        if self.labeler is None:
            return token
        try:
            return self.labeler[token]
        except KeyError:
            if token in self.labeler.values():
                return token
            raise


def output_token(raw) -> str:
    """Canonical text for a raw black-box output (``1.0`` and ``1`` both give ``"1"``)."""
    if isinstance(raw, (bool, np.bool_)):
        return str(int(raw))
    if isinstance(raw, (int, np.integer)):
        return str(int(raw))
    if isinstance(raw, (float, np.floating)):
        return str(int(raw)) if float(raw).is_integer() else repr(float(raw))
    return str(raw).strip()


# ---------------------------------------------------------------------------
# builtin scripted models


def _hash_uniform(X: np.ndarray, seed: int) -> np.ndarray:
    """Deterministic pseudo-random number in [0, 1) per input row."""
    out = np.empty(len(X))
    prefix = struct.pack("<q", seed)
    for k, row in enumerate(np.asarray(X, dtype=np.float64)):
        out[k] = zlib.crc32(prefix + row.tobytes()) / 2 ** 32
    return out


def _flip(y: np.ndarray, X: np.ndarray, seed: int, noise: float) -> np.ndarray:
    if noise <= 0:
        return y
    return np.where(_hash_uniform(X, seed) < noise, 1 - y, y)


def _constant(X, seed, params):
    return np.full(len(X), params.get("value", 0), dtype=object)


def _linear(X, seed, params):
    """Half-space ``coef . x + offset > 0``; by default a random plane through the unit-cube centre."""
    rng = np.random.default_rng(seed)
    coef = np.asarray(params.get("coefficients") or rng.normal(size=X.shape[1]))
    offset = params.get("offset")
    if offset is None:
        offset = -0.5 * float(coef.sum())
    y = (X @ coef + offset > 0).astype(int)
    return _flip(y, X, seed, params.get("noise", 0.0))


def _boxes(X, seed, params):
    """1 inside any of the axis-aligned boxes ``[[lo, hi] per dim], ...``, else 0."""
    y = np.zeros(len(X), dtype=int)
    for box in params["boxes"]:
        inside = np.ones(len(X), dtype=bool)
        for d, (lo, hi) in enumerate(box):
            inside &= (X[:, d] >= lo) & (X[:, d] < hi)
        y |= inside
    return _flip(y, X, seed, params.get("noise", 0.0))


def _airplane(X, seed, params):
    # inputs: hours since 8am, cloud type 0..5, signed offset from the centerline
    hours, clouds, pos = X[:, 0], X[:, 1], np.abs(X[:, 2])
    morning = hours < 4
    trusted = (
        (pos < 0.5)
        | ((pos < 2.5) & morning & (clouds <= 3))
        | ((pos < 2.0) & (hours < 10) & (clouds <= 1))
        | ((pos < 3.0) & morning & (clouds == 0))
    )
    alert = (~trusted).astype(int)
    return _flip(alert, X, seed, params.get("noise", 0.03))


def _bank_loan(X, seed, params):
    age, income, credit, deps = X[:, 0], X[:, 1], X[:, 2], X[:, 3]
    deny = ((age >= 18) & (age < 30)) | ((age >= 30) & (age < 50) & (income < 6000))
    deny |= (credit < 450) & (deps >= 3)
    return _flip(deny.astype(int), X, seed, params.get("noise", 0.04))


def _theorem_prover(X, seed, params):
    f1, f10 = X[:, 0], X[:, 1]
    solvable = (f1 >= 0.3) | ((f10 < 2.2) & (f1 >= 0.08)) | ((f10 >= 3.5) & (f1 >= 0.2))
    return _flip(solvable.astype(int), X, seed, params.get("noise", 0.04))


BUILTIN_MODELS: dict[str, Callable] = {
    "constant": _constant,
    "linear": _linear,
    "boxes": _boxes,
    "airplane": _airplane,
    "bank_loan": _bank_loan,
    "theorem_prover": _theorem_prover,
}


# ---------------------------------------------------------------------------
# oracle handles


class SubprocessOracle:
    """Line protocol: one comma-separated input per line in, one output token per line out.

    Queries on one handle are serialised by a lock.
    """

    def __init__(self, command: Sequence[str]):
        self.command = list(command)
        self._lock = threading.Lock()
        try:
            self._proc = subprocess.Popen(
                self.command, stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, bufsize=1
            )
        except OSError as exc:
            raise OracleError(f"cannot start oracle {self.command[0]!r}: {exc}") from exc

    def query(self, x: Sequence[float]) -> str:
        line = ",".join(repr(float(v)) for v in x)
        with self._lock:
            try:
                self._proc.stdin.write(line + "\n")
                self._proc.stdin.flush()
                answer = self._proc.stdout.readline()
            except (BrokenPipeError, OSError) as exc:
                raise OracleError(f"oracle died on input [{line}]: {exc}") from exc
            if not answer:
                code = self._proc.poll()
                raise OracleError(f"oracle gave no answer for input [{line}] (exit code {code})")
            return answer.strip()

    def close(self):
        if self._proc.poll() is None:
            self._proc.stdin.close()
            code = self._proc.wait(timeout=10)
        else:
            code = self._proc.returncode
        if code:
            raise OracleError(f"oracle {self.command[0]!r} exited with code {code}")

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_dataset(path) -> tuple[list[str], np.ndarray, list[str]]:
    """Header, feature matrix and raw output tokens of a sample CSV."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InputError(f"cannot read sample file {path}: {exc}") from exc
    if len(rows) < 2:
        raise InputError(f"sample file {path} has no data rows")
    header, body = rows[0], [r for r in rows[1:] if r]
    try:
        X = np.array([[float(v) for v in r[:-1]] for r in body], dtype=float)
    except ValueError as exc:
        raise InputError(f"non-numeric feature in {path}: {exc}") from exc
    return header, X, [r[-1].strip() for r in body]


def _labels(oracle: OracleSpec, X: np.ndarray, raw) -> list[str]:
    out = []
    for x, r in zip(X, raw):
        try:
            out.append(oracle.label_of(r))
        except KeyError:
            raise OracleError(
                f"output {output_token(r)!r} for input {list(map(float, x))} has no label"
            ) from None
    return out


def query_oracle(oracle: OracleSpec, X: np.ndarray) -> list:
    """Raw outputs of a non-dataset oracle on the rows of ``X``."""
    X = np.asarray(X, dtype=float)
    if oracle.kind == "builtin":
        return list(BUILTIN_MODELS[oracle.name](X, oracle.seed, oracle.params))
    if oracle.kind == "subprocess":
        with SubprocessOracle(oracle.command) as proc:
            return [proc.query(x) for x in X]
    raise InputError("dataset oracles cannot be queried at arbitrary inputs")


def draw_samples(oracle: OracleSpec, m: int, seed: int = 0, weight: int = 1) -> tuple[Sample, ...]:
    """``m`` labelled samples; identical for identical ``(oracle, m, seed)``."""
    if m < 1:
        raise InputError(f"need at least one sample, got m={m}")
    rng = np.random.default_rng(seed)
    if oracle.kind == "dataset":
        _, table, tokens = read_dataset(oracle.path)
        idx = rng.integers(0, len(table), m)
        X, raw = table[idx], [tokens[k] for k in idx]
    else:
        if not oracle.domain:
            raise InputError("oracle has no input domain to sample from")
        X = np.column_stack([d.draw(rng, m) for d in oracle.domain])
        raw = query_oracle(oracle, X)
    labels = _labels(oracle, X, raw)
    return tuple(Sample(tuple(x), lab, weight) for x, lab in zip(X.tolist(), labels))


def load_samples_csv(path, oracle: OracleSpec | None = None, weight: int = 1) -> tuple[Sample, ...]:
    """Samples from a CSV whose last column is a raw output (mapped) or a label."""
    _, X, tokens = read_dataset(path)
    labels = _labels(oracle, X, tokens) if oracle is not None else tokens
    return tuple(Sample(tuple(x), lab, weight) for x, lab in zip(X.tolist(), labels))


def write_samples_csv(samples: Sequence[Sample], path, input_names: Sequence[str] = ()):
    dim = len(samples[0].input) if samples else len(input_names)
    header = list(input_names) or [f"x{k}" for k in range(dim)]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header + ["output"])
        for s in samples:
            w.writerow([repr(v) for v in s.input] + [s.label])

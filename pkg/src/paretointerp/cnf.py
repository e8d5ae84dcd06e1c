"""Variable pools and weighted CNF instances (WDIMACS text format)."""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .errors import ConsistencyError, InputError

Clause = tuple[int, ...]


class VarPool:
    """Allocates CNF variables and remembers which named map owns each one.

    Variables live in groups (``"lam"``, ``"tau"``, ``"match"`` ...) keyed by
    arbitrary hashable tuples.  :meth:`var` is get-or-create; :meth:`new`
    always creates and refuses duplicate keys.  Keys passed as ``None`` get a
    per-group running counter, which is how Tseitin auxiliaries are named.
    """

    def __init__(self):
        self.top = 0
        self.maps: dict[str, dict[Hashable, int]] = defaultdict(dict)
        self._owner: dict[int, tuple[str, Hashable]] = {}
        self._counters: dict[str, itertools.count] = defaultdict(itertools.count)

    def new(self, group: str, key: Hashable = None) -> int:
        if key is None:
            key = next(self._counters[group])
        table = self.maps[group]
        if key in table:
            raise ConsistencyError(f"variable {group}{key!r} allocated twice")
        self.top += 1
        table[key] = self.top
        self._owner[self.top] = (group, key)
        return self.top

    def var(self, group: str, key: Hashable) -> int:
        v = self.maps[group].get(key)
        return v if v is not None else self.new(group, key)

    def get(self, group: str, key: Hashable) -> int:
        try:
            return self.maps[group][key]
        except KeyError:
            raise ConsistencyError(f"no variable {group}{key!r}") from None

    def owner(self, v: int) -> tuple[str, Hashable]:
        return self._owner[abs(v)]

    def group(self, group: str) -> dict[Hashable, int]:
        return self.maps.get(group, {})

    # named accessors for the diagram encoding
    def lam(self, i, p):
        return self.get("lam", (i, p))

    def tau(self, i, c, j):
        return self.get("tau", (i, c, j))

    def match(self, node, s):
        return self.get("match", (node, s))

    def used(self, i):
        return self.get("used", i)

    def lam_used(self, i, p):
        return self.get("lam_used", (i, p))


@dataclass
class WcnfInstance:
    """Hard clauses plus weighted soft clauses; weights are positive integers."""

    nvars: int = 0
    hard: list[Clause] = field(default_factory=list)
    soft: list[tuple[int, Clause]] = field(default_factory=list)

    def __post_init__(self):
        self.hard = [tuple(c) for c in self.hard]
        self.soft = [(int(w), tuple(c)) for w, c in self.soft]
        for w, _ in self.soft:
            if w <= 0:
                raise InputError(f"soft clause weight must be positive, got {w}")
        used = max((abs(l) for c in self.hard for l in c), default=0)
        used = max(used, max((abs(l) for _, c in self.soft for l in c), default=0))
        self.nvars = max(self.nvars, used)

    @property
    def soft_total(self) -> int:
        return sum(w for w, _ in self.soft)

    @property
    def top(self) -> int:
        return 1 + self.soft_total

    def add_hard(self, clauses: Iterable[Sequence[int]]):
        for c in clauses:
            c = tuple(c)
            self.hard.append(c)
            self.nvars = max(self.nvars, max((abs(l) for l in c), default=0))

    def add_soft(self, weight: int, clause: Sequence[int]):
        if weight <= 0:
            raise InputError(f"soft clause weight must be positive, got {weight}")
        clause = tuple(clause)
        self.soft.append((int(weight), clause))
        self.nvars = max(self.nvars, max((abs(l) for l in clause), default=0))

    def to_wcnf(self) -> str:
        top = self.top
        lines = [f"p wcnf {self.nvars} {len(self.hard) + len(self.soft)} {top}"]
        lines += [" ".join(map(str, (top, *c, 0))) for c in self.hard]
        lines += [" ".join(map(str, (w, *c, 0))) for w, c in self.soft]
        return "\n".join(lines) + "\n"

    def write(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_wcnf())


def parse_wcnf(text: str) -> WcnfInstance:
    """Parse classic ``p wcnf`` files as well as the newer ``h``-prefixed format."""
    inst = WcnfInstance()
    top = None
    pending: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) < 4 or parts[1] != "wcnf":
                raise InputError(f"bad WCNF header {line!r}")
            inst.nvars = int(parts[2])
            top = int(parts[4]) if len(parts) > 4 else None
            continue
        pending.extend(line.split())
        if pending[-1] != "0":
            continue
        head, *lits = pending[:-1]
        pending = []
        clause = tuple(int(l) for l in lits)
        if head == "h" or (top is not None and int(head) >= top):
            inst.add_hard([clause])
        else:
            inst.add_soft(int(head), clause)
    if pending:
        raise InputError("WCNF clause without terminating 0")
    return inst


def read_wcnf(path) -> WcnfInstance:
    with open(path) as fh:
        return parse_wcnf(fh.read())


def clause_satisfied(clause: Clause, assignment) -> bool:
    """``assignment`` maps variable -> bool (dict or 1-indexed sequence)."""
    for lit in clause:
        val = assignment[abs(lit)]
        if val == (lit > 0):
            return True
    return False

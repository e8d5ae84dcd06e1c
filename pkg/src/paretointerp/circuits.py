"""Boolean gadgets over bit-vectors: constant words, ripple-carry adders, comparators.

A *bit* is either a CNF literal (``int``) or a Python ``bool`` constant;
gates fold constants so that adding a constant word or comparing against a
constant bound costs no extra variables.  Bit-vectors are little-endian
(index 0 is the least significant bit).  Every gate output variable is fully
defined (both implication directions), so each circuit is a function of its
inputs in every model.
"""
from __future__ import annotations

from typing import Sequence, Union

from .cnf import VarPool

Bit = Union[int, bool]


def neg(b: Bit) -> Bit:
    return (not b) if isinstance(b, bool) else -b


def int_to_bits(value: int, width: int) -> list[bool]:
    if value < 0 or value >= 1 << width:
        raise ValueError(f"{value} does not fit in {width} bits")
    return [bool(value >> k & 1) for k in range(width)]


def bits_to_int(bits: Sequence[bool]) -> int:
    return sum(1 << k for k, b in enumerate(bits) if b)


class Gates:
    """Emits defining clauses for gate outputs into ``clauses``.

    ``group`` names the :class:`VarPool` map new outputs are registered under;
    callers switch it with :meth:`named` to keep adder, carry and comparator
    bits in separate maps.
    """

    def __init__(self, pool: VarPool, clauses: list, group: str = "aux"):
        self.pool = pool
        self.clauses = clauses
        self.group = group
        self._key = None

    def named(self, group: str, key=None) -> "Gates":
        self.group = group
        self._key = key
        return self

    def _out(self) -> int:
        key, self._key = self._key, None
        return self.pool.new(self.group, key)

    def assert_bit(self, b: Bit):
        if isinstance(b, bool):
            if not b:
                self.clauses.append(())
        else:
            self.clauses.append((b,))

    def and2(self, a: Bit, b: Bit) -> Bit:
        if a is False or b is False:
            return False
        if a is True:
            return b
        if b is True:
            return a
        if a == b:
            return a
        if a == -b:
            return False
        v = self._out()
        self.clauses += [(-v, a), (-v, b), (v, -a, -b)]
        return v

    def or2(self, a: Bit, b: Bit) -> Bit:
        return neg(self.and2(neg(a), neg(b)))

    def xor2(self, a: Bit, b: Bit) -> Bit:
        if isinstance(a, bool):
            return neg(b) if a else b
        if isinstance(b, bool):
            return neg(a) if b else a
        if a == b:
            return False
        if a == -b:
            return True
        v = self._out()
        self.clauses += [(-v, a, b), (-v, -a, -b), (v, -a, b), (v, a, -b)]
        return v

    def xor3(self, a: Bit, b: Bit, c: Bit) -> Bit:
        consts = [x for x in (a, b, c) if isinstance(x, bool)]
        if consts:
            lits = [x for x in (a, b, c) if not isinstance(x, bool)]
            flip = sum(consts) % 2 == 1
            r = self.xor2(*lits) if len(lits) == 2 else (lits[0] if lits else False)
            return neg(r) if flip else r
        v = self._out()
        for sa in (1, -1):
            for sb in (1, -1):
                for sc in (1, -1):
                    # parity of negated literals decides the sign of v
                    odd = (sa < 0) + (sb < 0) + (sc < 0)
                    sv = -1 if odd % 2 == 0 else 1
                    self.clauses.append((sv * v, sa * a, sb * b, sc * c))
        return v

    def maj3(self, a: Bit, b: Bit, c: Bit) -> Bit:
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            if isinstance(x, bool):
                return self.or2(y, z) if x else self.and2(y, z)
        v = self._out()
        self.clauses += [
            (-v, a, b), (-v, a, c), (-v, b, c),
            (v, -a, -b), (v, -a, -c), (v, -b, -c),
        ]
        return v


def const_word(value: int, width: int) -> list[Bit]:
    return list(int_to_bits(value, width))


def gated_word(g: Gates, value: int, width: int, enable: Bit) -> list[Bit]:
    """Word equal to ``value`` when ``enable`` holds and to zero otherwise."""
    return [enable if bit else False for bit in int_to_bits(value, width)]


def ripple_add(g: Gates, x: Sequence[Bit], y: Sequence[Bit], width: int | None = None,
               stage=None) -> list[Bit]:
    """``x + y`` truncated to ``width`` bits (default: the wider operand).

    Sum bit ``k`` is ``x_k xor y_k xor carry_k``; ``carry_{k+1}`` is the
    majority of the three.  The carry out of the top bit is dropped, so the
    caller must size ``width`` so that no overflow can occur.
    """
    width = width or max(len(x), len(y))
    x = list(x) + [False] * (width - len(x))
    y = list(y) + [False] * (width - len(y))
    carry: Bit = False
    out = []
    for k in range(width):
        out.append(g.named("adder_bits", None if stage is None else (*stage, k)).xor3(x[k], y[k], carry))
        if k + 1 < width:
            carry = g.named("carry", None if stage is None else (*stage, k + 1)).maj3(x[k], y[k], carry)
    g.named("aux")
    return out


def less_than(g: Gates, x: Sequence[Bit], y: Sequence[Bit], tag=None) -> Bit:
    """Output bit true iff ``x < y`` as unsigned integers.

    Chain from the least significant bit: ``smaller_k`` holds iff the low
    ``k + 1`` bits of ``x`` are below those of ``y``;
    ``smaller_k = maj(not x_k, y_k, smaller_{k-1})``.
    """
    width = max(len(x), len(y))
    x = list(x) + [False] * (width - len(x))
    y = list(y) + [False] * (width - len(y))
    s: Bit = False
    for k in range(width):
        s = g.named("smaller", None if tag is None else (tag, k)).maj3(neg(x[k]), y[k], s)
    g.named("aux")
    return s


def greater_than(g: Gates, x: Sequence[Bit], y: Sequence[Bit], tag=None) -> Bit:
    """Output bit true iff ``x > y``; ``larger_k = maj(x_k, not y_k, larger_{k-1})``."""
    width = max(len(x), len(y))
    x = list(x) + [False] * (width - len(x))
    y = list(y) + [False] * (width - len(y))
    s: Bit = False
    for k in range(width):
        s = g.named("larger", None if tag is None else (tag, k)).maj3(x[k], neg(y[k]), s)
    g.named("aux")
    return s


def sum_words(g: Gates, words: Sequence[Sequence[Bit]], width: int, family=None) -> list[Bit]:
    """Left-to-right ripple sum of ``words`` starting from an all-zero accumulator."""
    acc: list[Bit] = [False] * width
    for k, w in enumerate(words):
        acc = ripple_add(g, acc, w, width, stage=None if family is None else (k + 1, family))
    return acc

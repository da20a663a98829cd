"""
Finite halting tables standing in for an enumeration of Turing machines.

File format, one entry per line (`#` comments):
    INDEX halts AT_STEP
    INDEX never
    default never
"""
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from quasiminimal.errors import ParseError
from quasiminimal.ruler import ruler_value


@dataclass(frozen=True)
class HaltsAt:
    step: int


@dataclass(frozen=True)
class NeverHalts:
    pass


NEVER = NeverHalts()


@dataclass(frozen=True, eq=False)
class HaltingOracle:
    table: dict = field(default_factory=dict)
    dovetail: Callable = ruler_value    # infinite-to-one h : N -> N

    def __post_init__(self):
        for j, status in self.table.items():
            if j < 0 or not isinstance(status, (HaltsAt, NeverHalts)):
                raise ValueError(f"bad oracle entry {j}: {status!r}")
            if isinstance(status, HaltsAt) and status.step < 0:
                raise ValueError(f"machine {j} halts at a negative step")

    def status(self, j):
        return self.table.get(j, NEVER)

    def halts(self, j):
        return isinstance(self.status(j), HaltsAt)

    def step(self, j):
        s = self.status(j)
        return s.step if isinstance(s, HaltsAt) else None

    def halts_before(self, j, i):
        s = self.step(j)
        return s is not None and s < i

    def halts_within(self, j, i):
        s = self.step(j)
        return s is not None and s <= i

    def h(self, i):
        return self.dovetail(i)

    def halting_indices(self):
        return sorted(j for j in self.table if self.halts(j))

    def with_dovetail(self, dovetail):
        return HaltingOracle(dict(self.table), dovetail)

    @staticmethod
    def never():
        return HaltingOracle({})

    @staticmethod
    def random(rng, size=20, p_halt=0.5, max_step=8, start=0):
        """Table over indices start..start+size-1 drawn from a numpy Generator."""
        table = {}
        for j in range(start, start + size):
            if rng.random() < p_halt:
                table[j] = HaltsAt(int(rng.integers(0, max_step + 1)))
            else:
                table[j] = NEVER
        return HaltingOracle(table)


def parse_oracle(text):
    table = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        if line == ["default", "never"]:
            continue
        try:
            if len(line) == 3 and line[1] == "halts":
                entry = int(line[0]), HaltsAt(int(line[2]))
            elif len(line) == 2 and line[1] == "never":
                entry = int(line[0]), NEVER
            else:
                raise ValueError
        except ValueError:
            raise ParseError(f"expected `INDEX halts STEP` or `INDEX never`, got {raw.strip()!r}",
                             line=lineno) from None
        j, status = entry
        if j < 0 or (isinstance(status, HaltsAt) and status.step < 0):
            raise ParseError("indices and steps must be non-negative", line=lineno)
        if j in table:
            raise ParseError(f"duplicate entry for machine {j}", line=lineno)
        table[j] = status
    return HaltingOracle(table)


def format_oracle(o):
    lines = []
    for j in sorted(o.table):
        s = o.table[j]
        lines.append(f"{j} halts {s.step}" if isinstance(s, HaltsAt) else f"{j} never")
    lines.append("default never")
    return "\n".join(lines) + "\n"


def oracle_frame(o, indices):
    """Status per index as a small structured array (index, halts, step or -1)."""
    out = np.zeros(len(indices), dtype=[("index", "i8"), ("halts", "?"), ("step", "i8")])
    for n, j in enumerate(indices):
        s = o.step(j)
        out[n] = (j, s is not None, -1 if s is None else s)
    return out

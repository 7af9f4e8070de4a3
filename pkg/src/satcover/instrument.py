"""Elementary-operation counting and deterministic structured tracing.

The counter tracks three kinds of elementary operations: assignments (array
or scalar writes), arithmetic (integer add/sub), and comparisons (read-and-
compare of a cell or scalar).  Loop control is not counted.  Vectorized steps
charge the number of elementary operations the element-wise procedure would
perform, so totals are deterministic and independent of implementation
batching.

The trace is an append-only list of (kind, payload ints..., counter reading)
events; identical input and configuration yield byte-identical serialized
traces.
"""
from __future__ import annotations

import hashlib
import json
from typing import List, Tuple


class OpCounter:
    """Mutable elementary-operation tally."""

    __slots__ = ("assignments", "arithmetic", "comparisons")

    def __init__(self, assignments: int = 0, arithmetic: int = 0, comparisons: int = 0):
        self.assignments = assignments
        self.arithmetic = arithmetic
        self.comparisons = comparisons

    @property
    def total(self) -> int:
        return self.assignments + self.arithmetic + self.comparisons

    def assign(self, k: int = 1) -> None:
        if k < 0:
            raise ValueError("operation count must be non-negative")
        self.assignments += k

    def arith(self, k: int = 1) -> None:
        if k < 0:
            raise ValueError("operation count must be non-negative")
        self.arithmetic += k

    def cmp(self, k: int = 1) -> None:
        if k < 0:
            raise ValueError("operation count must be non-negative")
        self.comparisons += k

    def count(self, op_kind: str, k: int = 1) -> "OpCounter":
        """Generic instrumentation hook."""
        if op_kind == "assign":
            self.assign(k)
        elif op_kind == "arith":
            self.arith(k)
        elif op_kind == "cmp":
            self.cmp(k)
        else:
            raise ValueError(f"unknown op kind {op_kind!r}")
        return self

    def as_dict(self) -> dict:
        return {
            "assignments": self.assignments,
            "arithmetic": self.arithmetic,
            "comparisons": self.comparisons,
        }


class _DisabledOpCounter(OpCounter):
    """Counting switched off: identical call surface, nothing recorded."""

    def assign(self, k: int = 1) -> None:  # noqa: ARG002
        pass

    def arith(self, k: int = 1) -> None:  # noqa: ARG002
        pass

    def cmp(self, k: int = 1) -> None:  # noqa: ARG002
        pass


DISABLED_OPS = _DisabledOpCounter()


class Trace:
    """Deterministic event log; each event snapshots the counter total."""

    __slots__ = ("events", "_ops")

    def __init__(self, ops: OpCounter = DISABLED_OPS):
        self.events: List[Tuple] = []
        self._ops = ops

    def emit(self, kind: str, *payload: int) -> None:
        self.events.append((kind, payload, self._ops.total))

    def serialize(self) -> bytes:
        doc = [
            [kind, [int(p) for p in payload], int(reading)]
            for kind, payload, reading in self.events
        ]
        return json.dumps(doc, separators=(",", ":")).encode("ascii")

    def sha256(self) -> str:
        return hashlib.sha256(self.serialize()).hexdigest()

    def kinds(self) -> List[str]:
        return [kind for kind, _, _ in self.events]

    def events_without_readings(self) -> List[Tuple]:
        return [(kind, payload) for kind, payload, _ in self.events]


class _NullTrace(Trace):
    """Tracing switched off."""

    def emit(self, kind: str, *payload: int) -> None:  # noqa: ARG002
        pass


NO_TRACE = _NullTrace()

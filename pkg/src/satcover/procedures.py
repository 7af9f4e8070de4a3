"""Graph mutation procedures: removal cascades, cleaning, incompatibility
elimination, and extension.

Removing a vertex means deciding its row will not be swapped.  The cascade
walks backwards over incoming edges (a source loses an obligatory or last
remaining follow-up and must go too: an "ancestor") and forwards over
outgoing edges (a non-root vertex whose live indegree drops to zero has lost
every justification: a "generation").  Removing the last live main vertex of
a column would leave that column uncoverable, so the whole cascade aborts as
non-removable instead.

Elimination scans uncovered columns of the swapped matrix, tries the cascade
on each blocking vertex under a snapshot (each vertex at most once per whole
solve), and when nothing is removable collects never-formed rows that could
cover the column on the second side into an extension plan.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set

import numpy as np

from .decomposition import (
    DecompositionPair,
    StructuralError,
    apply_swaps,
)
from .graph import PointingGraph
from .instrument import DISABLED_OPS, NO_TRACE


@dataclass(frozen=True)
class RemovalOutcome:
    removable: bool
    removed_vertices: tuple  # in removal order


@dataclass(frozen=True)
class IncompatibleSet:
    """Live vertices whose alpha rows held the 1s of a now-uncovered column."""

    column: int
    vertices: tuple


@dataclass
class ExtensionPlan:
    """Rows to form as additional main vertices, with justifying columns."""

    new_main_vertices: List[int]
    columns: List[int]  # parallel to new_main_vertices

    def entries(self):
        return list(zip(self.new_main_vertices, self.columns))


@dataclass(frozen=True)
class Eliminated:
    pass


@dataclass(frozen=True)
class NeedsExtension:
    plan: ExtensionPlan


@dataclass(frozen=True)
class Unreachable:
    column: int


@dataclass
class StateSnapshot:
    """Deep copy of the complete mutable graph state."""

    vertex_order: List[int]
    formed: np.ndarray
    removed: np.ndarray
    main: np.ndarray
    useless: np.ndarray
    examined: np.ndarray
    final: np.ndarray
    main_columns: List[List[int]]
    indegree: np.ndarray
    multiplicity: np.ndarray
    graph_edges: np.ndarray
    edge_in: np.ndarray
    dis_edges: np.ndarray

    _ARRAYS = (
        "formed",
        "removed",
        "main",
        "useless",
        "examined",
        "final",
        "indegree",
        "multiplicity",
        "graph_edges",
        "edge_in",
        "dis_edges",
    )

    @classmethod
    def capture(cls, graph: PointingGraph) -> "StateSnapshot":
        return cls(
            vertex_order=list(graph.vertex_order),
            main_columns=[list(cols) for cols in graph.main_columns],
            **{name: getattr(graph, name).copy() for name in cls._ARRAYS},
        )

    def restore(self, graph: PointingGraph) -> None:
        graph.vertex_order[:] = self.vertex_order
        for i in range(graph.n):
            graph.main_columns[i][:] = self.main_columns[i]
        for name in self._ARRAYS:
            np.copyto(getattr(graph, name), getattr(self, name))

    def cell_count(self) -> int:
        cells = len(self.vertex_order) + sum(len(c) for c in self.main_columns)
        for name in self._ARRAYS:
            cells += getattr(self, name).size
        return cells


# ---------------------------------------------------------------------------
# removal cascade
# ---------------------------------------------------------------------------

def removal_procedure(
    graph: PointingGraph,
    pair: DecompositionPair,
    start_vertex: int,
    *,
    ops=DISABLED_OPS,
    trace=NO_TRACE,
) -> RemovalOutcome:
    """Try to remove a live vertex together with its dependent cascade.

    Ancestors (sources of conjunctive or last-live-disjunctive incoming
    edges) get both their incoming and outgoing edges processed; generations
    (vertices whose live indegree reached zero) only cascade their outgoing
    edges.  Removing a main vertex while any of its associated columns has
    multiplicity 1 aborts with removable=False; the caller restores state
    when it needs the pre-call graph back.  No vertex is processed twice.
    """
    g = graph
    counts = g.counts
    s0 = start_vertex - 1
    if not (0 <= s0 < g.n) or not g.formed[s0] or g.removed[s0]:
        raise StructuralError(f"vertex {start_vertex} is not a live graph vertex")
    trace.emit("rp-start", start_vertex)

    anc: List[int] = [start_vertex]
    anc_marked: Set[int] = {start_vertex}
    gen: List[int] = []
    gen_queued: Set[int] = set()
    removed_order: List[int] = []

    def remove_outgoing(p: int) -> None:
        p0 = p - 1
        targets = np.nonzero(g.graph_edges[p0])[0]
        ops.cmp(g.n)
        out_cols = g.outgoing_columns(p)
        for t0 in targets:
            cnt = int(g.graph_edges[p0, t0])
            g.graph_edges[p0, t0] = 0
            g.indegree[t0] -= cnt
            ops.assign(1)
            ops.arith(1)
            for j in out_cols:
                ops.cmp(1)
                if g.edge_in[j - 1, t0] == p:
                    g.edge_in[j - 1, t0] = 0
                    ops.assign(1)
                    if not g.edge_is_conjunctive(j):
                        g.dis_edges[p0, j - 1] -= 1
                        ops.arith(1)
                    trace.emit("edge-removed", p, int(t0) + 1, j)
            ops.cmp(1)
            t = int(t0) + 1
            if (
                g.indegree[t0] == 0
                and not g.main[t0]
                and not g.removed[t0]
                and t not in gen_queued
            ):
                gen_queued.add(t)
                gen.append(t)
                ops.assign(1)

    pos = 0
    while pos < len(anc):
        p = anc[pos]
        pos += 1
        p0 = p - 1
        ops.cmp(1)
        if g.removed[p0]:
            continue
        g.removed[p0] = True
        removed_order.append(p)
        ops.assign(2)
        trace.emit("vertex-removed", p, 1)
        if g.main[p0]:
            cols = g.main_columns[p0]
            ops.cmp(len(cols))
            blocked = any(g.multiplicity[c - 1] == 1 for c in cols)
            if blocked:
                trace.emit("rp-result", start_vertex, 0)
                return RemovalOutcome(False, tuple(removed_order))
            for c in cols:
                g.multiplicity[c - 1] -= 1
                ops.arith(1)
        # incoming edges: group by source row, ascending
        in_cols = np.nonzero(g.edge_in[:, p0])[0]
        ops.cmp(g.m)
        bundles: Dict[int, List[int]] = {}
        for j0 in in_cols:
            bundles.setdefault(int(g.edge_in[j0, p0]), []).append(int(j0) + 1)
        for r in sorted(bundles):
            cols_r = bundles[r]
            r0 = r - 1
            trigger = False
            for j in cols_r:
                ops.cmp(2)
                if g.edge_is_conjunctive(j) or g.dis_edges[r0, j - 1] <= 1:
                    trigger = True
            cnt = int(g.graph_edges[r0, p0])
            g.graph_edges[r0, p0] = 0
            g.indegree[p0] -= cnt
            ops.assign(1)
            ops.arith(1)
            for j in cols_r:
                g.edge_in[j - 1, p0] = 0
                ops.assign(1)
                if not g.edge_is_conjunctive(j):
                    g.dis_edges[r0, j - 1] -= 1
                    ops.arith(1)
                trace.emit("edge-removed", r, p, j)
            ops.cmp(1)
            if trigger and r not in anc_marked and not g.removed[r0]:
                anc_marked.add(r)
                anc.append(r)
                ops.assign(1)
        remove_outgoing(p)

    pos = 0
    while pos < len(gen):
        q = gen[pos]
        pos += 1
        q0 = q - 1
        ops.cmp(1)
        if g.removed[q0]:
            continue
        g.removed[q0] = True
        removed_order.append(q)
        ops.assign(2)
        trace.emit("vertex-removed", q, 2)
        remove_outgoing(q)

    trace.emit("rp-result", start_vertex, 1)
    return RemovalOutcome(True, tuple(removed_order))


# ---------------------------------------------------------------------------
# cleaning
# ---------------------------------------------------------------------------

def clean(
    graph: PointingGraph,
    pair: DecompositionPair,
    *,
    order: Optional[List[int]] = None,
    ops=DISABLED_OPS,
    trace=NO_TRACE,
) -> Optional[int]:
    """Remove every live useless vertex; return the blocking vertex on failure.

    Vertices are attempted in ascending index order (or the given order, used
    by order-independence tests); ones already taken out by an earlier
    cascade are skipped.  A non-removable useless vertex stops the procedure:
    the snapshot taken just before that attempt is restored so the caller can
    inspect the intact graph, and the vertex index is returned.  Returns None
    when the graph is clean.
    """
    live_useless = [
        v
        for v in range(1, graph.n + 1)
        if graph.useless[v - 1] and graph.formed[v - 1] and not graph.removed[v - 1]
    ]
    if order is None:
        candidates = live_useless
    else:
        candidates = list(order)
        if set(candidates) != set(live_useless) or len(candidates) != len(live_useless):
            raise StructuralError("clean order must be a permutation of the live useless vertices")
    for v in candidates:
        ops.cmp(1)
        if graph.removed[v - 1] or not graph.formed[v - 1]:
            continue
        snap = StateSnapshot.capture(graph)
        ops.assign(snap.cell_count())
        trace.emit("snapshot")
        outcome = removal_procedure(graph, pair, v, ops=ops, trace=trace)
        if not outcome.removable:
            snap.restore(graph)
            ops.assign(snap.cell_count())
            trace.emit("restore")
            trace.emit("clean-result", 0, v)
            return v
    trace.emit("clean-result", 1, 0)
    return None


# ---------------------------------------------------------------------------
# the swapped view and incompatibilities
# ---------------------------------------------------------------------------

def swapped_alpha_counts(graph: PointingGraph, pair: DecompositionPair) -> np.ndarray:
    """Column counts of sm_alpha after swapping every live vertex row."""
    live = graph.formed & ~graph.removed
    if not live.any():
        return graph.counts.m_alpha.copy()
    delta_out = pair.sm_alpha[live].sum(axis=0, dtype=np.int64)
    delta_in = pair.sm_alpha_bar[live].sum(axis=0, dtype=np.int64)
    return graph.counts.m_alpha - delta_out + delta_in


def decomposition_from_graph(
    graph: PointingGraph, pair: DecompositionPair
) -> DecompositionPair:
    """The pair with every live (formed, non-removed) vertex row swapped."""
    return apply_swaps(pair, graph.live_vertices())


def find_incompatible_sets(
    graph: PointingGraph, pair: DecompositionPair
) -> List[IncompatibleSet]:
    """For each uncovered column of the swapped matrix, the live vertices
    whose alpha rows cover it, ascending by column then vertex."""
    swapped = swapped_alpha_counts(graph, pair)
    out: List[IncompatibleSet] = []
    live = graph.formed & ~graph.removed
    for j0 in np.nonzero(swapped == 0)[0]:
        members = tuple(
            int(i) + 1 for i in np.nonzero(live & (pair.sm_alpha[:, j0] == 1))[0]
        )
        out.append(IncompatibleSet(column=int(j0) + 1, vertices=members))
    return out


def eliminate_incompatibilities(
    graph: PointingGraph,
    pair: DecompositionPair,
    *,
    tried: Optional[Set[int]] = None,
    ops=DISABLED_OPS,
    trace=NO_TRACE,
):
    """Scan columns ascending and resolve each incompatible set in turn.

    For the members of a set, the removal cascade is attempted under a
    snapshot, each vertex at most once per whole solve (the tried marks
    persist across restores and across calls via the ``tried`` argument).
    The first removable member commits its cascade and the scan restarts from
    the first column with a cleared extension plan.  When no member is
    removable, the snapshot is restored and never-formed rows able to cover
    the column on the second side are recorded in the plan; absent any such
    row the column is unreachable and no covering exists.  Returns
    Eliminated when a full scan finds no uncovered column, NeedsExtension
    with the plan gathered by the final scan otherwise.
    """
    if tried is None:
        tried = set()
    plan_rows: List[int] = []
    plan_cols: List[int] = []
    planned: Set[tuple] = set()
    while True:
        swapped = swapped_alpha_counts(graph, pair)
        ops.cmp(graph.m)
        ops.arith(graph.m)
        zero_cols = [int(j0) + 1 for j0 in np.nonzero(swapped == 0)[0]]
        restarted = False
        live = graph.formed & ~graph.removed
        for j in zero_cols:
            members = [
                int(i) + 1
                for i in np.nonzero(live & (pair.sm_alpha[:, j - 1] == 1))[0]
            ]
            ops.cmp(graph.n)
            trace.emit("incompat-found", j, len(members))
            snap = None
            committed = 0
            for r in members:
                ops.cmp(1)
                if r in tried:
                    continue
                tried.add(r)
                ops.assign(1)
                if snap is None:
                    snap = StateSnapshot.capture(graph)
                    ops.assign(snap.cell_count())
                    trace.emit("snapshot")
                outcome = removal_procedure(graph, pair, r, ops=ops, trace=trace)
                if outcome.removable:
                    committed = r
                    break
                snap.restore(graph)
                ops.assign(snap.cell_count())
                trace.emit("restore")
            if committed:
                trace.emit("incompat-eliminated", j, committed)
                plan_rows.clear()
                plan_cols.clear()
                planned.clear()
                restarted = True
                break
            # nothing removable: plan an extension for this column
            candidates = [
                p
                for p in range(1, graph.n + 1)
                if not graph.formed[p - 1] and pair.sm_alpha_bar[p - 1, j - 1]
            ]
            ops.cmp(graph.n)
            if not candidates:
                trace.emit("unreachable-column", j)
                return Unreachable(j)
            for p in candidates:
                if (p, j) not in planned:
                    planned.add((p, j))
                    plan_rows.append(p)
                    plan_cols.append(j)
                    ops.assign(2)
                    trace.emit("extension-planned", p, j)
        if restarted:
            continue
        if plan_rows:
            return NeedsExtension(ExtensionPlan(plan_rows, plan_cols))
        return Eliminated()


# ---------------------------------------------------------------------------
# extension
# ---------------------------------------------------------------------------

def extend(
    graph: PointingGraph,
    pair: DecompositionPair,
    plan: ExtensionPlan,
    *,
    ops=DISABLED_OPS,
    trace=NO_TRACE,
) -> None:
    """Form the planned rows as additional main vertices.

    Every planned row must be unformed (removed rows never come back).  A
    new main vertex is associated with, and bumps the multiplicity of, every
    planned column where its second-component row has a 1.
    """
    rows: List[int] = []
    for p in plan.new_main_vertices:
        if p not in rows:
            rows.append(p)
    cols: List[int] = []
    for c in plan.columns:
        if c not in cols:
            cols.append(c)
    if not rows:
        raise StructuralError("extension plan is empty")
    for p in rows:
        if not 1 <= p <= graph.n:
            raise StructuralError(f"plan row {p} outside 1..{graph.n}")
        if graph.formed[p - 1] or graph.removed[p - 1]:
            raise StructuralError(f"plan row {p} is already part of the graph")
    for p in rows:
        p0 = p - 1
        graph.formed[p0] = True
        graph.main[p0] = True
        graph.vertex_order.append(p)
        ops.assign(3)
        assoc = [c for c in cols if pair.sm_alpha_bar[p0, c - 1]]
        for c in assoc:
            graph.main_columns[p0].append(c)
            graph.multiplicity[c - 1] += 1
            ops.cmp(1)
            ops.arith(1)
            ops.assign(1)
        trace.emit("vertex-formed", p, 1)
    trace.emit("extend", len(rows))

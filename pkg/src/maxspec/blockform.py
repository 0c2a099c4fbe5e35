"""Condensation, Frobenius-style block triangular form, and level structure.

Classes are the strongly connected components of the digraph with an edge
(u, v) whenever a_uv > 0.  Ordering classes so that accessed classes come
first makes the permuted matrix block lower triangular with irreducible
diagonal blocks.  Grouping indices by the value of their local radius
gives the level partition: all of j's level value is explained by the
largest class radius among classes accessing j.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from . import _digraph
from .core import NEG_INF, FiniteMaxMatrix, MaxScalar
from .errors import ValidationError


@dataclass(frozen=True)
class Level:
    """One level set: indices whose local radius equals ``value``."""

    value: float
    indices: tuple


@dataclass(frozen=True)
class BlockDecomposition:
    """Canonical block-triangular decomposition of a finite matrix.

    permutation lists original indices in the new order (accessed classes
    first); classes, class_radii and trivial_classes follow the same class
    order; condensation_edges use class positions in that order.
    """

    permutation: tuple
    classes: tuple
    class_radii: tuple
    trivial_classes: tuple
    levels: tuple
    condensation_edges: tuple

    def to_json_dict(self, one_based: bool = False) -> dict:
        off = 1 if one_based else 0
        return {
            "permutation": [p + off for p in self.permutation],
            "classes": [[v + off for v in cl] for cl in self.classes],
            "class_radii": list(self.class_radii),
            "trivial_classes": list(self.trivial_classes),
            "levels": [
                {"value": lv.value, "indices": [v + off for v in lv.indices]}
                for lv in self.levels
            ],
            "condensation_edges": [[u + off, v + off] for u, v in self.condensation_edges],
        }


@dataclass(frozen=True)
class WindowLevels:
    """Level structure of a leading window of a lazy infinite matrix.

    Values are lower bounds of the true level values; indices are 1-based
    oracle indices and everything past the window is one symbolic tail
    block, since finite data cannot pin the true partition.
    """

    window: int
    levels: tuple
    tail_start: int
    lower_bound_only: bool = True


def scc_condensation(a: FiniteMaxMatrix):
    """(classes, edges): SCCs in canonical order plus condensation edges.

    Edge (mu, nu) means some a_uv > 0 with u in class mu, v in class nu;
    positions refer to the canonical class order (accessed classes first).
    """
    comps = _digraph.tarjan_scc(_digraph.successors(a.log))
    _, raw_edges = _digraph.condensation(a.log, comps)
    order = _digraph.canonical_class_order(comps, raw_edges)
    rank = {ci: k for k, ci in enumerate(order)}
    classes = tuple(tuple(comps[ci]) for ci in order)
    edges = tuple(sorted((rank[cu], rank[cv]) for cu, cv in raw_edges))
    return classes, edges


def access_radius(a: FiniteMaxMatrix, j: int) -> MaxScalar:
    """r_{e_j} as the largest class radius over classes accessing j.

    Independent route from finite.local_radius: a forward pass over a
    topological order of the condensation, propagating the running
    ancestor maximum along every edge.
    """
    if not 0 <= j < a.n:
        raise IndexError(f"index {j} out of range for n={a.n}")
    return MaxScalar(float(_access_radii_log(a)[j]))


def _access_radii_log(a: FiniteMaxMatrix) -> np.ndarray:
    comps = _digraph.tarjan_scc(_digraph.successors(a.log))
    comp_id, edges = _digraph.condensation(a.log, comps)
    radii_log, _ = _digraph.class_radii(a.log, comps)

    k = len(comps)
    in_deg = [0] * k
    succ = [[] for _ in range(k)]
    for cu, cv in edges:
        in_deg[cv] += 1
        succ[cu].append(cv)
    heap = [(comps[ci][0], ci) for ci in range(k) if in_deg[ci] == 0]
    heapq.heapify(heap)
    best = list(radii_log)
    while heap:
        _, ci = heapq.heappop(heap)
        for cv in succ[ci]:
            if best[ci] > best[cv]:
                best[cv] = best[ci]
            in_deg[cv] -= 1
            if in_deg[cv] == 0:
                heapq.heappush(heap, (comps[cv][0], cv))

    out = np.empty(a.n)
    for v in range(a.n):
        out[v] = best[comp_id[v]]
    return out


def level_decomposition(a: FiniteMaxMatrix) -> tuple:
    """Levels F_1, F_2, ... grouped by distinct local-radius values in
    strictly decreasing order; each level is a union of whole classes."""
    node_log = _access_radii_log(a)
    groups = {}
    for v in range(a.n):
        groups.setdefault(float(node_log[v]), []).append(v)
    out = []
    for val in sorted(groups, reverse=True):
        linear = math.exp(val) if val > NEG_INF else 0.0
        out.append(Level(value=linear, indices=tuple(sorted(groups[val]))))
    return tuple(out)


def fnf(a: FiniteMaxMatrix) -> BlockDecomposition:
    """Frobenius-style normal form with the canonical class order.

    The permutation concatenates classes (members ascending) in the
    canonical topological order, which puts every nonzero entry on or
    below the diagonal blocks; diagonal blocks are irreducible by
    construction.  Single-node classes without a self-loop are trivial
    and carry radius 0.
    """
    comps = _digraph.tarjan_scc(_digraph.successors(a.log))
    _, raw_edges = _digraph.condensation(a.log, comps)
    radii_log, cycles = _digraph.class_radii(a.log, comps)
    order = _digraph.canonical_class_order(comps, raw_edges)
    rank = {ci: k for k, ci in enumerate(order)}

    classes = tuple(tuple(comps[ci]) for ci in order)
    permutation = tuple(v for cl in classes for v in cl)
    class_radii = tuple(
        math.exp(radii_log[ci]) if radii_log[ci] > NEG_INF else 0.0 for ci in order
    )
    trivial = tuple(len(comps[ci]) == 1 and cycles[ci] is None for ci in order)
    edges = tuple(sorted((rank[cu], rank[cv]) for cu, cv in raw_edges))
    return BlockDecomposition(
        permutation=permutation,
        classes=classes,
        class_radii=class_radii,
        trivial_classes=trivial,
        levels=level_decomposition(a),
        condensation_edges=edges,
    )


def verify_block_form(a: FiniteMaxMatrix, dec: BlockDecomposition):
    """Check a decomposition: partition, zero strictly-upper blocks, and
    strong connectivity of each diagonal block.

    Returns (True, None) or (False, violation_dict).
    """
    flat = [v for cl in dec.classes for v in cl]
    if sorted(flat) != list(range(a.n)) or list(dec.permutation) != flat:
        raise ValidationError("classes do not partition the index set")

    block_of = {}
    for bi, cl in enumerate(dec.classes):
        for v in cl:
            block_of[v] = bi
    rows, cols = np.nonzero(a.log > NEG_INF)
    for u, v in zip(rows.tolist(), cols.tolist()):
        if block_of[u] < block_of[v]:
            return False, {"kind": "upper_block_entry", "row": int(u), "col": int(v)}

    for bi, cl in enumerate(dec.classes):
        if len(cl) == 1:
            continue
        sub = a.log[np.ix_(cl, cl)]
        comps = _digraph.tarjan_scc(_digraph.successors(sub))
        if len(comps) != 1:
            return False, {"kind": "block_not_strongly_connected", "block": bi}
    return True, None


def window_levels(oracle, N: int) -> WindowLevels:
    """Level decomposition of the leading N-window of a lazy matrix.

    Window values only bound the true levels from below, and the indices
    beyond the window form one symbolic tail block.
    """
    from .oracle import truncate

    t = truncate(oracle, N)
    levels = tuple(
        Level(value=lv.value, indices=tuple(v + 1 for v in lv.indices))
        for lv in level_decomposition(t.matrix)
    )
    return WindowLevels(window=N, levels=levels, tail_start=N + 1)

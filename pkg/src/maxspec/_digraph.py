"""Internal digraph machinery: Tarjan SCCs and Karp's cycle-mean program.

The digraph of a matrix has an edge (u, v) whenever a_uv > 0; all weights
live in log space.  Shared by the finite-spectral and block-form layers so
that class radii are bit-identical wherever they are consumed.
"""

from __future__ import annotations

import heapq

import numpy as np

NEG_INF = float("-inf")


def successors(log_m: np.ndarray) -> list:
    """Adjacency lists of the nonzero pattern (successor sets, sorted)."""
    n = log_m.shape[0]
    succ = [[] for _ in range(n)]
    rows, cols = np.nonzero(log_m > NEG_INF)
    for u, v in zip(rows.tolist(), cols.tolist()):
        succ[u].append(v)
    return succ


def tarjan_scc(succ: list) -> list:
    """Strongly connected components, iteratively.

    Components are emitted sinks-first (every component is complete before
    any component that reaches it), members sorted ascending.
    """
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    comps = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            while pi < len(succ[v]):
                w = succ[v][pi]
                pi += 1
                if index[w] == -1:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comp.sort()
                comps.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


def condensation(log_m: np.ndarray, comps: list):
    """(component id per node, set of condensation edges (cu, cv))."""
    n = log_m.shape[0]
    comp_id = [0] * n
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_id[v] = ci
    edges = set()
    rows, cols = np.nonzero(log_m > NEG_INF)
    for u, v in zip(rows.tolist(), cols.tolist()):
        cu, cv = comp_id[u], comp_id[v]
        if cu != cv:
            edges.add((cu, cv))
    return comp_id, edges


def karp_max_cycle(log_m: np.ndarray, nodes: list):
    """Maximum cycle geometric mean within one strongly connected component.

    Returns (mean_log, cycle) where cycle is a node list in travel order
    starting at its smallest member, or (-inf, None) if the component is
    trivial.  The mean_log is recomputed from the extracted cycle's edges,
    so a witness always reproduces the value exactly.

    Karp's dynamic program: with D_k(v) the best weight of a k-edge walk
    from a fixed source, the maximum mean equals
    max_v min_k (D_m(v) - D_k(v)) / (m - k).  Every cycle on the optimal
    m-edge walk to the arg-max v attains the maximum mean, which justifies
    extracting the first repeated vertex of that walk.  Ties break toward
    the smallest predecessor / smallest v.
    """
    m = len(nodes)
    if m == 1:
        v = nodes[0]
        lw = float(log_m[v, v])
        if lw == NEG_INF:
            return NEG_INF, None
        return lw, [v]
    sub = log_m[np.ix_(nodes, nodes)]
    D = np.full((m + 1, m), NEG_INF)
    D[0, 0] = 0.0
    pred = np.zeros((m + 1, m), dtype=np.int64)
    for k in range(1, m + 1):
        cand = D[k - 1][:, None] + sub
        D[k] = cand.max(axis=0)
        pred[k] = cand.argmax(axis=0)

    best_val = NEG_INF
    best_v = -1
    with np.errstate(invalid="ignore"):
        for v in range(m):
            if D[m, v] == NEG_INF:
                continue
            ratios = [
                (D[m, v] - D[k, v]) / (m - k)
                for k in range(m)
                if D[k, v] > NEG_INF
            ]
            val = min(ratios)
            if val > best_val:
                best_val = val
                best_v = v
    if best_v < 0:
        return NEG_INF, None

    walk = [best_v]
    cur = best_v
    for k in range(m, 0, -1):
        cur = int(pred[k, cur])
        walk.append(cur)
    walk.reverse()

    seen = {}
    cycle_local = None
    for t, node in enumerate(walk):
        if node in seen:
            cycle_local = walk[seen[node]:t]
            break
        seen[node] = t
    assert cycle_local is not None  # m+1 vertices over m nodes must repeat

    cycle = [nodes[v] for v in cycle_local]
    pivot = cycle.index(min(cycle))
    cycle = cycle[pivot:] + cycle[:pivot]
    total = 0.0
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        total += float(log_m[a, b])
    return total / len(cycle), cycle


def class_radii(log_m: np.ndarray, comps: list):
    """(radius_log per class, witness cycle per class or None)."""
    radii = []
    cycles = []
    for comp in comps:
        val, cyc = karp_max_cycle(log_m, comp)
        radii.append(val)
        cycles.append(cyc)
    return radii, cycles


def canonical_class_order(comps: list, edges: set) -> list:
    """Deterministic topological order with accessed classes first.

    Every condensation edge (mu, nu) must point backward in the order, so
    the permuted matrix is block lower triangular.  Among the classes whose
    successors are all placed, the one with the smallest original node
    index goes next (lexicographically smallest valid order).
    """
    k = len(comps)
    out_deg = [0] * k
    preds = [[] for _ in range(k)]
    for cu, cv in edges:
        out_deg[cu] += 1
        preds[cv].append(cu)
    heap = [(comps[ci][0], ci) for ci in range(k) if out_deg[ci] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, ci = heapq.heappop(heap)
        order.append(ci)
        for cp in preds[ci]:
            out_deg[cp] -= 1
            if out_deg[cp] == 0:
                heapq.heappush(heap, (comps[cp][0], cp))
    assert len(order) == k
    return order

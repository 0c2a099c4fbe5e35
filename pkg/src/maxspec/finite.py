"""Exact spectral theory for finite max-times matrices.

For a finite nonnegative matrix the spectral radius equals the maximum
cycle geometric mean, computed here by Karp's dynamic program on each
strongly connected component.  Local radii come from the access relation:
r_{e_j} is the largest class radius among classes with a directed path to
j's class.  The point spectrum is exactly the set of local-radius values,
and each eigenvalue gets an explicit eigenvector by a truncated Kleene
series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _digraph
from .core import (
    NEG_INF,
    FiniteMaxMatrix,
    MaxScalar,
    MaxVector,
    mat_vec_log,
    otimes,
    pow_norm_seq,
)
from .errors import MaxSpecError, ValidationError

_LOG_TIE_TOL = 1e-9


@dataclass(frozen=True)
class CycleWitness:
    """A simple cycle attaining a cycle-mean bound.

    ``indices`` is the cycle in travel order, starting from its smallest
    vertex; the closing edge back to indices[0] is implicit.  The weight of
    the closed walk is geometric_mean ** length.
    """

    indices: tuple
    geometric_mean: MaxScalar

    @property
    def length(self) -> int:
        return len(self.indices)

    def to_json_dict(self) -> dict:
        return {
            "kind": "cycle",
            "indices": list(self.indices),
            "geometric_mean": self.geometric_mean.value,
            "length": self.length,
        }


@dataclass(frozen=True)
class FiniteSpectrum:
    """Full spectral report for a finite matrix (0-based indices)."""

    radius: float
    mu: float
    local_radii: tuple
    point_spectrum: tuple
    critical_witness: CycleWitness | None


class _Analysis:
    """One-shot digraph analysis shared by the operations below."""

    def __init__(self, a: FiniteMaxMatrix):
        self.matrix = a
        self.comps = _digraph.tarjan_scc(_digraph.successors(a.log))
        self.comp_id, self.edges = _digraph.condensation(a.log, self.comps)
        self.radii_log, self.cycles = _digraph.class_radii(a.log, self.comps)
        self._preds = None
        self._best_log = None

    @property
    def preds(self) -> list:
        if self._preds is None:
            preds = [[] for _ in self.comps]
            for cu, cv in self.edges:
                preds[cv].append(cu)
            for p in preds:
                p.sort()
            self._preds = preds
        return self._preds

    def ancestor_classes(self, ci: int) -> set:
        """Classes with a path into class ci, including ci itself."""
        seen = {ci}
        stack = [ci]
        while stack:
            c = stack.pop()
            for p in self.preds[c]:
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        return seen

    @property
    def best_log(self) -> list:
        """Per class: max radius over its ancestor classes (reverse BFS)."""
        if self._best_log is None:
            self._best_log = [
                max(self.radii_log[c] for c in self.ancestor_classes(ci))
                for ci in range(len(self.comps))
            ]
        return self._best_log

    def local_radii_log(self) -> np.ndarray:
        out = np.empty(self.matrix.n)
        for v in range(self.matrix.n):
            out[v] = self.best_log[self.comp_id[v]]
        return out


def max_cycle_geom_mean(a: FiniteMaxMatrix):
    """Maximum cycle geometric mean with a witness cycle.

    Returns (value, witness); acyclic matrices give (0, None).  Among
    classes attaining the value, the witness with the smallest starting
    vertex wins, so reruns are reproducible.
    """
    ana = _Analysis(a)
    return _best_cycle(ana)


def _best_cycle(ana: _Analysis):
    best = NEG_INF
    witness = None
    for val, cyc in zip(ana.radii_log, ana.cycles):
        if cyc is None:
            continue
        if val > best or (val == best and witness is not None and cyc[0] < witness[0]):
            best = val
            witness = cyc
    if witness is None:
        return MaxScalar.zero(), None
    return MaxScalar(best), CycleWitness(indices=tuple(witness), geometric_mean=MaxScalar(best))


def spectral_radius(a: FiniteMaxMatrix, cross_check: bool | None = None) -> MaxScalar:
    """r(A) = mu(A), the maximum cycle geometric mean.

    When cross_check is enabled (auto for n <= 128) the value is asserted
    against the power-norm upper-bound family min_{k<=2n} ||A^k||^{1/k}.
    """
    value, _ = max_cycle_geom_mean(a)
    if cross_check is None:
        cross_check = a.n <= 128
    if cross_check:
        upper = min(pow_norm_seq(a, 2 * a.n))
        upper_log = math.log(upper) if upper > 0 else NEG_INF
        if value.log > upper_log + 1e-9 * max(1.0, abs(upper_log)):
            raise MaxSpecError("cycle-mean radius exceeded the power-norm bound")
    return value


def local_radii(a: FiniteMaxMatrix) -> MaxVector:
    """All local spectral radii r_{e_j}, j = 0..n-1, as one vector."""
    return MaxVector(_Analysis(a).local_radii_log())


def local_radius(a: FiniteMaxMatrix, j: int) -> MaxScalar:
    if not 0 <= j < a.n:
        raise IndexError(f"index {j} out of range for n={a.n}")
    return MaxScalar(float(_Analysis(a).local_radii_log()[j]))


def point_spectrum(a: FiniteMaxMatrix) -> tuple:
    """Sorted distinct local-radius values; exactly the max eigenvalues."""
    logs = _Analysis(a).local_radii_log()
    distinct = sorted(set(logs.tolist()))
    return tuple(math.exp(v) if v > NEG_INF else 0.0 for v in distinct)


def max_eigenvector(a: FiniteMaxMatrix, t) -> MaxVector:
    """An eigenvector for eigenvalue t: A (x) x = t * x with x != 0.

    For t > 0: restrict to S = {j : r_{e_j} <= t}, scale by 1/t, and sum
    the Kleene series from a vertex on a critical cycle attaining t; the
    series is exact after |S| - 1 terms because the scaled restriction has
    radius one.  t = 0 is an eigenvalue iff some column is identically
    zero (then that basis vector works) or A = 0.
    """
    tlog = t.log if isinstance(t, MaxScalar) else (math.log(t) if t > 0 else NEG_INF)
    n = a.n
    if tlog == NEG_INF:
        col_max = a.log.max(axis=0)
        zero_cols = np.nonzero(col_max == NEG_INF)[0]
        if zero_cols.size == 0:
            raise ValidationError("0 is not an eigenvalue: no zero column")
        return MaxVector.basis(n, int(zero_cols[0]))

    ana = _Analysis(a)
    rlog = ana.local_radii_log()
    distinct = sorted(set(rlog.tolist()))
    snapped = None
    for v in distinct:
        if v > NEG_INF and abs(v - tlog) <= _LOG_TIE_TOL * max(1.0, abs(v)):
            snapped = v
            break
    if snapped is None:
        raise ValidationError(f"{t!r} is not in the point spectrum")
    tlog = snapped

    members = [j for j in range(n) if rlog[j] <= tlog + 1e-12]
    pos = {node: i for i, node in enumerate(members)}

    candidates = []
    for ci, comp in enumerate(ana.comps):
        if ana.cycles[ci] is None:
            continue
        if ana.radii_log[ci] == tlog and ana.best_log[ci] == tlog:
            candidates.append(ana.cycles[ci][0])
    if not candidates:
        raise MaxSpecError("no class attains the requested eigenvalue")
    i0 = min(candidates)

    sub = FiniteMaxMatrix(a.log[np.ix_(members, members)] - tlog)
    term = np.full(len(members), NEG_INF)
    term[pos[i0]] = 0.0
    acc = term.copy()
    for _ in range(len(members) - 1):
        term = mat_vec_log(sub, term)
        np.maximum(acc, term, out=acc)

    out = np.full(n, NEG_INF)
    out[members] = acc
    return MaxVector(out)


def min_modulus(a: FiniteMaxMatrix) -> MaxScalar:
    """s(A) = inf ||A (x) x|| over sup-unit x, which is the smallest
    column maximum."""
    return MaxScalar(float(a.log.max(axis=0).min()))


def lower_radius_sequence(a: FiniteMaxMatrix, K: int):
    """(estimate, sequence) where sequence[k-1] = s(A^k)^{1/k} for k=1..K.

    The lower spectral radius is the limit of the sequence; no
    extrapolation is attempted, the K-th value is the reported estimate.
    """
    if K < 1:
        raise ValidationError("K must be >= 1")
    seq = []
    p = a
    for k in range(1, K + 1):
        seq.append(min_modulus(p).root(k).value)
        if k < K:
            p = otimes(p, a)
    return MaxScalar.from_value(seq[-1]), tuple(seq)


def cycle_time_vector(a: FiniteMaxMatrix) -> MaxVector:
    """chi(A)_j = limsup_k ((A^k (x) 1)_j)^{1/k}, equal to the local radius
    of the transpose at j."""
    return MaxVector(_Analysis(a.transpose()).local_radii_log())


def finite_spectrum(a: FiniteMaxMatrix) -> FiniteSpectrum:
    """Radius, local radii, point spectrum and the critical cycle witness."""
    ana = _Analysis(a)
    value, witness = _best_cycle(ana)
    rlog = ana.local_radii_log()
    distinct = sorted(set(rlog.tolist()))
    spectrum = tuple(math.exp(v) if v > NEG_INF else 0.0 for v in distinct)
    radii = tuple(math.exp(v) if v > NEG_INF else 0.0 for v in rlog.tolist())
    return FiniteSpectrum(
        radius=value.value,
        mu=value.value,
        local_radii=radii,
        point_spectrum=spectrum,
        critical_witness=witness,
    )

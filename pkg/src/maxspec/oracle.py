"""Lazy infinite bounded nonnegative matrices and their finite windows.

A MatrixOracle is a pure entry function on 1-based indices plus a norm
bound and optional structural hints.  Windows are realized on demand:
leading windows [1..N] and tail windows [n+1..N] (the compression that
drops the first n rows and columns).  Realizations are cached behind a
lock so concurrent callers get identical, idempotent results.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np

from .core import FiniteMaxMatrix
from .errors import OracleViolationError, ValidationError

_BOUND_SLACK = 1e-12


@dataclass(frozen=True)
class OracleHints:
    """Optional structure metadata; everything defaults to unknown.

    band_halfwidth: entries vanish when |i - j| exceeds it.
    row_support_bound: at most this many nonzeros per row.
    monotone_tail_decay: entries are nonincreasing along the tail.
    acyclic: the digraph has no cycles (forces mu = 0 exactly).
    irreducible: oracle-level strong connectivity verdict.
    zero_tail_after: the tail compression is identically zero from this n.
    dominator_radius: radius of a known entrywise dominating matrix.
    support_columns: callable (i, lo, hi) -> iterable of the columns in
        [lo, hi] that may be nonzero in row i; used to realize windows
        without probing every entry.
    """

    band_halfwidth: int | None = None
    row_support_bound: int | None = None
    monotone_tail_decay: bool = False
    acyclic: bool = False
    irreducible: bool | None = None
    zero_tail_after: int | None = None
    dominator_radius: float | None = None
    support_columns: object | None = None


@dataclass
class MatrixOracle:
    """An infinite bounded nonnegative matrix given by a lazy entry rule.

    entry(i, j) must be deterministic and lie in [0, norm_bound] for all
    1-based i, j.  known_values optionally carries closed-form reference
    values keyed by quantity name (r, mu, r_prime, r_ess, m, m_e,
    sigma_p); known_local_radius, when present, maps j to r_{e_j}.
    """

    name: str
    entry: object
    norm_bound: float
    hints: OracleHints = field(default_factory=OracleHints)
    known_values: dict = field(default_factory=dict)
    known_local_radius: object | None = None

    def __post_init__(self):
        if not (self.norm_bound >= 0 and math.isfinite(self.norm_bound)):
            raise ValidationError(f"norm bound must be finite and >= 0: {self.norm_bound!r}")
        self._lock = threading.Lock()
        self._leading_n = 0
        self._leading_log = None

    def probe(self, i: int, j: int) -> float:
        """Validated entry access (1-based indices)."""
        if i < 1 or j < 1:
            raise ValidationError(f"indices are 1-based: ({i}, {j})")
        v = float(self.entry(i, j))
        if math.isnan(v) or v < 0 or v > self.norm_bound * (1.0 + _BOUND_SLACK) + 0.0:
            raise OracleViolationError(
                f"{self.name}: entry({i}, {j}) = {v!r} outside [0, {self.norm_bound}]"
            )
        return v

    def _build_leading_log(self, N: int) -> np.ndarray:
        lin = np.zeros((N, N))
        sup = self.hints.support_columns
        if sup is not None:
            for i in range(1, N + 1):
                for j in sup(i, 1, N):
                    if 1 <= j <= N:
                        lin[i - 1, j - 1] = self.probe(i, j)
        else:
            for i in range(1, N + 1):
                for j in range(1, N + 1):
                    lin[i - 1, j - 1] = self.probe(i, j)
        with np.errstate(divide="ignore"):
            return np.log(lin)

    def leading_log(self, N: int) -> np.ndarray:
        """Log-domain leading window [1..N], cached and slice-consistent."""
        with self._lock:
            if self._leading_n < N:
                self._leading_log = self._build_leading_log(N)
                self._leading_n = N
            return self._leading_log[:N, :N]

    def rectangle_log(self, n_rows: int, n_cols: int) -> np.ndarray:
        """Log-domain block of rows [1..n_rows] x columns [1..n_cols]."""
        side = max(n_rows, n_cols)
        return self.leading_log(side)[:n_rows, :n_cols]


@dataclass(frozen=True)
class Truncation:
    """A realized finite window of an oracle.

    kind is "leading" (rows/cols 1..N) or "tail" (rows/cols n+1..N after
    the compression dropping the first n indices); offset is 0 or n.
    Window position w (0-based) corresponds to oracle index w + offset + 1.
    """

    oracle: MatrixOracle
    kind: str
    offset: int
    N: int
    matrix: FiniteMaxMatrix

    def to_oracle_index(self, w: int) -> int:
        return w + self.offset + 1

    def verify_against_oracle(self, samples: int = 64, seed: int = 0) -> bool:
        """Spot-check that realized entries equal fresh probes bit-exactly."""
        rng = np.random.default_rng(seed)
        m = self.matrix.n
        for _ in range(samples):
            a = int(rng.integers(0, m))
            b = int(rng.integers(0, m))
            if self.matrix.entry(a, b) != self.oracle.probe(
                self.to_oracle_index(a), self.to_oracle_index(b)
            ):
                return False
        return True


def truncate(oracle: MatrixOracle, N: int) -> Truncation:
    """Leading N-by-N window; monotone in N (smaller windows are
    sub-matrices of larger ones, bit-exactly)."""
    if N < 1:
        raise ValidationError("window size must be >= 1")
    log = oracle.leading_log(N)
    return Truncation(oracle=oracle, kind="leading", offset=0, N=N, matrix=FiniteMaxMatrix(log))


def tail_truncate(oracle: MatrixOracle, n: int, N: int) -> Truncation:
    """Window [n+1..N] of the tail compression that zeroes the first n
    rows and columns."""
    if not 0 <= n < N:
        raise ValidationError(f"need 0 <= n < N, got n={n}, N={N}")
    log = oracle.leading_log(N)[n:, n:]
    return Truncation(oracle=oracle, kind="tail", offset=n, N=N, matrix=FiniteMaxMatrix(log))


def spot_check(oracle: MatrixOracle, probes: int = 10_000, seed: int = 0, index_range: int = 4096):
    """Random bounds-and-determinism audit; raises on any violation."""
    rng = np.random.default_rng(seed)
    for _ in range(probes):
        i = int(rng.integers(1, index_range + 1))
        j = int(rng.integers(1, index_range + 1))
        first = oracle.probe(i, j)
        second = oracle.probe(i, j)
        if first != second:
            raise OracleViolationError(f"{oracle.name}: entry({i}, {j}) not deterministic")


# --- custom oracle JSON ------------------------------------------------------
#
# {"kind": "table",  "matrix": {...dense or sparse matrix JSON...}}
# {"kind": "banded", "norm_bound": b,
#  "diagonals": [{"offset": d, "values": [...], "extend": "zero"|"repeat_last"}]}
# {"kind": "sparse_rule", "norm_bound": b, "triplets": [[i, j, v], ...]}
#
# All are zero outside what they declare; indices are 1-based.


def oracle_from_json_dict(data: dict) -> MatrixOracle:
    if not isinstance(data, dict) or "kind" not in data:
        raise ValidationError("oracle JSON needs a 'kind' field")
    kind = data["kind"]
    if kind == "table":
        return _table_oracle(data)
    if kind == "banded":
        return _banded_oracle(data)
    if kind == "sparse_rule":
        return _sparse_rule_oracle(data)
    raise ValidationError(f"unknown oracle kind: {kind!r}")


def _table_oracle(data: dict) -> MatrixOracle:
    from .core import matrix_from_json_dict

    mat = matrix_from_json_dict(data.get("matrix", {}))
    dense = mat.to_array()
    n = mat.n
    bound = float(data.get("norm_bound", dense.max() if dense.size else 0.0))

    def entry(i, j, _dense=dense, _n=n):
        if i <= _n and j <= _n:
            return float(_dense[i - 1, j - 1])
        return 0.0

    def support(i, lo, hi, _n=n):
        if i > _n:
            return ()
        return range(max(lo, 1), min(hi, _n) + 1)

    return MatrixOracle(
        name="table",
        entry=entry,
        norm_bound=bound,
        hints=OracleHints(support_columns=support, row_support_bound=n),
    )


def _banded_oracle(data: dict) -> MatrixOracle:
    if "norm_bound" not in data:
        raise ValidationError("banded oracle needs an explicit norm_bound")
    bound = float(data["norm_bound"])
    diags = []
    for spec in data.get("diagonals", []):
        offset = int(spec["offset"])
        values = [float(v) for v in spec["values"]]
        extend = spec.get("extend", "zero")
        if extend not in ("zero", "repeat_last"):
            raise ValidationError(f"bad extend mode: {extend!r}")
        if any(v < 0 or v > bound for v in values):
            raise ValidationError("diagonal values outside [0, norm_bound]")
        diags.append((offset, values, extend))
    by_offset = {d: (vals, ext) for d, vals, ext in diags}
    if len(by_offset) != len(diags):
        raise ValidationError("duplicate diagonal offsets")
    half = max((abs(d) for d in by_offset), default=0)

    def entry(i, j):
        spec = by_offset.get(j - i)
        if spec is None:
            return 0.0
        values, ext = spec
        if i <= len(values):
            return values[i - 1]
        if ext == "repeat_last" and values:
            return values[-1]
        return 0.0

    def support(i, lo, hi):
        return tuple(i + d for d in sorted(by_offset) if lo <= i + d <= hi)

    return MatrixOracle(
        name="banded",
        entry=entry,
        norm_bound=bound,
        hints=OracleHints(
            band_halfwidth=half,
            row_support_bound=len(by_offset),
            support_columns=support,
        ),
    )


def _sparse_rule_oracle(data: dict) -> MatrixOracle:
    if "norm_bound" not in data:
        raise ValidationError("sparse_rule oracle needs an explicit norm_bound")
    bound = float(data["norm_bound"])
    table = {}
    rows = {}
    for trip in data.get("triplets", []):
        if len(trip) != 3:
            raise ValidationError(f"bad triplet: {trip!r}")
        i, j, v = int(trip[0]), int(trip[1]), float(trip[2])
        if i < 1 or j < 1:
            raise ValidationError(f"triplet indices are 1-based: {trip!r}")
        if (i, j) in table:
            raise ValidationError(f"duplicate triplet index ({i}, {j})")
        table[(i, j)] = v
        rows.setdefault(i, []).append(j)
    for cols in rows.values():
        cols.sort()

    def entry(i, j):
        return table.get((i, j), 0.0)

    def support(i, lo, hi):
        return tuple(j for j in rows.get(i, ()) if lo <= j <= hi)

    return MatrixOracle(
        name="sparse_rule",
        entry=entry,
        norm_bound=bound,
        hints=OracleHints(support_columns=support),
    )

"""Max-times (max algebra) kernel: scalars, vectors, matrices and their products.

The semiring is the nonnegative reals with a (+) b = max(a, b) and ordinary
multiplication.  Every multiplicative accumulation happens in log space so
that products on the scale of 2^(-2^m) survive: a value v >= 0 is stored as
log(v), with -inf standing for 0 (the (+)-identity and (x)-annihilator).
Max in log space is max in linear space, so nothing else changes.

Indices on finite matrices and vectors are 0-based, as usual for numpy.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, ValidationError

NEG_INF = float("-inf")


def _log_of_linear(values: np.ndarray) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.size and (np.isnan(arr).any() or (arr < 0).any() or np.isposinf(arr).any()):
        raise ValidationError("entries must be finite and nonnegative")
    with np.errstate(divide="ignore"):
        return np.log(arr)


def _linear_of_log(logs: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        return np.exp(logs)


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class MaxScalar:
    """A nonnegative real stored as its natural log; log = -inf encodes 0."""

    log: float

    @classmethod
    def from_value(cls, value: float) -> "MaxScalar":
        if math.isnan(value) or value < 0 or value == math.inf:
            raise ValidationError(f"not a nonnegative finite value: {value!r}")
        return cls(math.log(value) if value > 0 else NEG_INF)

    @classmethod
    def zero(cls) -> "MaxScalar":
        return cls(NEG_INF)

    @classmethod
    def one(cls) -> "MaxScalar":
        return cls(0.0)

    @property
    def value(self) -> float:
        return math.exp(self.log) if self.log > NEG_INF else 0.0

    def is_zero(self) -> bool:
        return self.log == NEG_INF

    def otimes(self, other: "MaxScalar") -> "MaxScalar":
        if self.is_zero() or other.is_zero():
            return MaxScalar.zero()
        return MaxScalar(self.log + other.log)

    def oplus(self, other: "MaxScalar") -> "MaxScalar":
        return self if self.log >= other.log else other

    def root(self, k: int) -> "MaxScalar":
        """k-th root of the value (log divided by k)."""
        if self.is_zero():
            return MaxScalar.zero()
        return MaxScalar(self.log / k)

    def __mul__(self, other: "MaxScalar") -> "MaxScalar":
        return self.otimes(other)

    def __pow__(self, k: float) -> "MaxScalar":
        if self.is_zero():
            return MaxScalar.zero() if k > 0 else MaxScalar.one()
        return MaxScalar(self.log * k)

    def __float__(self) -> float:
        return self.value

    def __lt__(self, other: "MaxScalar") -> bool:
        return self.log < other.log

    def __le__(self, other: "MaxScalar") -> bool:
        return self.log <= other.log

    def __repr__(self) -> str:
        return f"MaxScalar({self.value!r})"


class MaxVector:
    """Vector over the max-times semiring, stored as a log-domain array."""

    __slots__ = ("_log",)

    def __init__(self, log_entries: np.ndarray):
        arr = np.asarray(log_entries, dtype=float)
        if arr.ndim != 1:
            raise ValidationError("vector must be one-dimensional")
        if np.isnan(arr).any() or np.isposinf(arr).any():
            raise ValidationError("log entries must be in [-inf, inf)")
        self._log = _freeze(arr)

    @classmethod
    def from_entries(cls, values) -> "MaxVector":
        return cls(_log_of_linear(values))

    @classmethod
    def zeros(cls, n: int) -> "MaxVector":
        return cls(np.full(n, NEG_INF))

    @classmethod
    def ones(cls, n: int) -> "MaxVector":
        return cls(np.zeros(n))

    @classmethod
    def basis(cls, n: int, j: int) -> "MaxVector":
        """Standard basis vector e_j (0-based j)."""
        if not 0 <= j < n:
            raise IndexError(f"basis index {j} out of range for length {n}")
        log = np.full(n, NEG_INF)
        log[j] = 0.0
        return cls(log)

    @property
    def n(self) -> int:
        return self._log.shape[0]

    @property
    def log(self) -> np.ndarray:
        return self._log

    def to_array(self) -> np.ndarray:
        return _linear_of_log(self._log)

    def entry(self, i: int) -> float:
        return float(_linear_of_log(self._log[i]))

    def norm(self) -> MaxScalar:
        return MaxScalar(float(self._log.max()) if self.n else NEG_INF)

    def allclose(self, other: "MaxVector", log_tol: float = 1e-12) -> bool:
        return _log_allclose(self._log, other._log, log_tol)

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"MaxVector({self.to_array()!r})"


class FiniteMaxMatrix:
    """Dense n-by-n nonnegative matrix over the max-times semiring.

    Immutable after construction; the log-domain array is the single source
    of truth and entry (i, j) of A (x) B reads max_k a_ik * b_kj.
    """

    __slots__ = ("_log", "_nz_cache")

    def __init__(self, log_entries: np.ndarray):
        arr = np.asarray(log_entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValidationError("matrix must be square")
        if arr.shape[0] < 1:
            raise ValidationError("dimension must be at least 1")
        if np.isnan(arr).any() or np.isposinf(arr).any():
            raise ValidationError("log entries must be in [-inf, inf)")
        self._log = _freeze(arr)
        self._nz_cache = None

    @classmethod
    def from_entries(cls, values) -> "FiniteMaxMatrix":
        return cls(_log_of_linear(values))

    @classmethod
    def from_rows(cls, rows) -> "FiniteMaxMatrix":
        return cls.from_entries(np.asarray(rows, dtype=float))

    @classmethod
    def zeros(cls, n: int) -> "FiniteMaxMatrix":
        return cls(np.full((n, n), NEG_INF))

    @classmethod
    def identity(cls, n: int) -> "FiniteMaxMatrix":
        """The (x)-identity: ones on the diagonal, zeros elsewhere."""
        log = np.full((n, n), NEG_INF)
        np.fill_diagonal(log, 0.0)
        return cls(log)

    @property
    def n(self) -> int:
        return self._log.shape[0]

    @property
    def log(self) -> np.ndarray:
        return self._log

    def to_array(self) -> np.ndarray:
        return _linear_of_log(self._log)

    def entry(self, i: int, j: int) -> float:
        return float(_linear_of_log(self._log[i, j]))

    def log_entry(self, i: int, j: int) -> float:
        return float(self._log[i, j])

    def nonzeros(self):
        """(rows, cols, log_values) arrays of the nonzero entries, cached."""
        if self._nz_cache is None:
            rows, cols = np.nonzero(self._log > NEG_INF)
            self._nz_cache = (rows, cols, self._log[rows, cols])
        return self._nz_cache

    def transpose(self) -> "FiniteMaxMatrix":
        return FiniteMaxMatrix(self._log.T)

    def permute(self, order) -> "FiniteMaxMatrix":
        """Simultaneous row/column reorder: entry (a, b) of the result is
        entry (order[a], order[b]) of self."""
        idx = np.asarray(order, dtype=int)
        if sorted(idx.tolist()) != list(range(self.n)):
            raise ValidationError("order must be a permutation of 0..n-1")
        return FiniteMaxMatrix(self._log[np.ix_(idx, idx)])

    def scaled(self, c: float) -> "FiniteMaxMatrix":
        """Entrywise multiplication by a positive constant c."""
        if not c > 0:
            raise ValidationError("scale factor must be positive")
        return FiniteMaxMatrix(self._log + math.log(c))

    def norm(self) -> MaxScalar:
        return MaxScalar(float(self._log.max()))

    def allclose(self, other: "FiniteMaxMatrix", log_tol: float = 1e-12) -> bool:
        return self.n == other.n and _log_allclose(self._log, other._log, log_tol)

    def __matmul__(self, other: "FiniteMaxMatrix") -> "FiniteMaxMatrix":
        return otimes(self, other)

    def __repr__(self) -> str:
        return f"FiniteMaxMatrix(n={self.n})"


def _log_allclose(a: np.ndarray, b: np.ndarray, log_tol: float) -> bool:
    if a.shape != b.shape:
        return False
    fa, fb = a > NEG_INF, b > NEG_INF
    if not np.array_equal(fa, fb):
        return False
    return bool(np.all(np.abs(a[fa] - b[fb]) <= log_tol * np.maximum(1.0, np.abs(a[fa]))))


def oplus(a: FiniteMaxMatrix, b: FiniteMaxMatrix) -> FiniteMaxMatrix:
    """Entrywise max of two matrices of equal dimension."""
    if a.n != b.n:
        raise DimensionMismatchError(f"{a.n} != {b.n}")
    return FiniteMaxMatrix(np.maximum(a.log, b.log))


def otimes(a: FiniteMaxMatrix, b: FiniteMaxMatrix) -> FiniteMaxMatrix:
    """Max-times matrix product: (A (x) B)_ij = max_k a_ik * b_kj."""
    if a.n != b.n:
        raise DimensionMismatchError(f"{a.n} != {b.n}")
    la, lb = a.log, b.log
    out = np.full((a.n, a.n), NEG_INF)
    for k in range(a.n):
        col = la[:, k]
        if np.max(col) == NEG_INF:
            continue
        np.maximum(out, col[:, None] + lb[k, :][None, :], out=out)
    return FiniteMaxMatrix(out)


def mat_vec(a: FiniteMaxMatrix, x: MaxVector) -> MaxVector:
    """(A (x) x)_i = max_j a_ij * x_j."""
    if a.n != x.n:
        raise DimensionMismatchError(f"{a.n} != {x.n}")
    return MaxVector(mat_vec_log(a, x.log))


def mat_vec_log(a: FiniteMaxMatrix, xlog: np.ndarray) -> np.ndarray:
    """Log-domain matrix-vector product over the cached nonzero triplets."""
    out = np.full(a.n, NEG_INF)
    rows, cols, vals = a.nonzeros()
    if rows.size:
        np.maximum.at(out, rows, vals + xlog[cols])
    return out


def power(a: FiniteMaxMatrix, k: int) -> FiniteMaxMatrix:
    """k-th max power by repeated squaring; k = 0 gives the (x)-identity."""
    if k < 0:
        raise ValidationError("power requires k >= 0")
    result = FiniteMaxMatrix.identity(a.n)
    base = a
    while k:
        if k & 1:
            result = otimes(result, base)
        k >>= 1
        if k:
            base = otimes(base, base)
    return result


def norm(obj) -> MaxScalar:
    """Largest entry of a matrix or vector (the sup norm of the semiring)."""
    return obj.norm()


def path_weight(a: FiniteMaxMatrix, walk) -> "PathWitness":
    """Weight of a walk (v_0, ..., v_k): the product of a[v_t, v_{t+1}].

    Edges follow the digraph convention (u, v) in E iff a_uv > 0, so the
    walk is traversed in edge direction and (A^k)_{v_0, v_k} >= weight.
    A single vertex (k = 0) has the empty-product weight 1.
    """
    idx = [int(v) for v in walk]
    if not idx:
        raise ValidationError("walk must contain at least one vertex")
    for v in idx:
        if not 0 <= v < a.n:
            raise IndexError(f"vertex {v} out of range for n={a.n}")
    total = 0.0
    for u, v in zip(idx, idx[1:]):
        step = a.log_entry(u, v)
        if step == NEG_INF:
            total = NEG_INF
            break
        total += step
    return PathWitness(indices=tuple(idx), weight=MaxScalar(total))


@dataclass(frozen=True)
class PathWitness:
    """A walk and its weight; recomputable from the owning matrix/oracle.

    ``indices`` is in travel order.  Witnesses produced from a finite
    matrix use its 0-based positions; witnesses attached to estimates of a
    lazy infinite matrix use the oracle's 1-based indices.
    """

    indices: tuple
    weight: MaxScalar

    @property
    def length(self) -> int:
        return len(self.indices) - 1

    def to_json_dict(self) -> dict:
        return {
            "kind": "path",
            "indices": list(self.indices),
            "weight": self.weight.value,
        }


def pow_norm_seq(a: FiniteMaxMatrix, K: int) -> list:
    """The sequence ||A^k||^{1/k} for k = 1..K (each is an upper bound of
    the radius; the infimum over all k attains it for finite matrices).

    Computed through ||A^k|| = ||A^k (x) 1||, i.e. K matrix-vector sweeps.
    """
    if K < 1:
        raise ValidationError("K must be >= 1")
    v = np.zeros(a.n)
    out = []
    for k in range(1, K + 1):
        v = mat_vec_log(a, v)
        top = float(v.max())
        out.append(math.exp(top / k) if top > NEG_INF else 0.0)
    return out


# --- JSON interchange -------------------------------------------------------
#
# Dense form:  {"n": int, "entries": [[row-major nonnegative numbers]]}
# Sparse form: {"n": int, "triplets": [[i, j, value], ...]} with 1-based i, j.


def matrix_to_json_dict(a: FiniteMaxMatrix) -> dict:
    return {"n": a.n, "entries": [[a.entry(i, j) for j in range(a.n)] for i in range(a.n)]}


def matrix_from_json_dict(data: dict) -> FiniteMaxMatrix:
    if not isinstance(data, dict) or "n" not in data:
        raise ValidationError("matrix JSON needs an 'n' field")
    n = data["n"]
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"bad dimension: {n!r}")
    if "entries" in data:
        entries = np.asarray(data["entries"], dtype=float)
        if entries.shape != (n, n):
            raise ValidationError(f"entries shape {entries.shape} != ({n}, {n})")
        return FiniteMaxMatrix.from_entries(entries)
    if "triplets" in data:
        arr = np.full((n, n), 0.0)
        seen = set()
        for trip in data["triplets"]:
            if len(trip) != 3:
                raise ValidationError(f"bad triplet: {trip!r}")
            i, j, value = int(trip[0]), int(trip[1]), float(trip[2])
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValidationError(f"triplet index out of range: {trip!r}")
            if (i, j) in seen:
                raise ValidationError(f"duplicate triplet index ({i}, {j})")
            seen.add((i, j))
            arr[i - 1, j - 1] = value
        return FiniteMaxMatrix.from_entries(arr)
    raise ValidationError("matrix JSON needs 'entries' or 'triplets'")


def matrix_from_json(text: str) -> FiniteMaxMatrix:
    return matrix_from_json_dict(json.loads(text))


def matrix_to_json(a: FiniteMaxMatrix) -> str:
    return json.dumps(matrix_to_json_dict(a))

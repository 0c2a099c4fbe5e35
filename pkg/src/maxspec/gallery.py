"""Registry of the reference infinite matrices with known spectral data.

Every entry packages a lazy oracle together with its known closed-form
quantities, so estimator output can always be compared against the truth:

  backward_shift        a_{i,i+1} = 1               mu = m = 0, r = 1
  forward_shift         a_{i+1,i} = 1               r = r_ess = m = 1, mu = 0
  diag_ratio            a_{ii} = i/(i+1)            mu = r = 1, sup not attained
  diag_inverse          a_{ii} = 1/i                r_{e_j} = 1/j, m_e = 0, r = 1
  star_means            a_{1j} = a_{j1} = (j-1)/j   r_ess = 0 < 1 = r, eigenvector exists
  epsilon_cycle(eps)    a_{1j} = eps^j, a_{j+1,j}=1 irreducible, r = 1, mu = eps, empty point spectrum
  kakutani              a_{i,i+1} = w_i             r = 1/2 but every cutoff has radius 0
  kakutani_cutoff(m)    kakutani with w_i <= 2^-m removed; nilpotent
  holder_family(alpha,k) chain blocks closed by k^(-2/alpha); breaks Holder continuity
  shift_perturbed(n,eps,eps_prime)  finite chain, optionally closed into a cycle

Weights w_k = 2^(-j) where k = 2^j * l with l odd, i.e. j counts the
trailing binary zeros of k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ValidationError
from .oracle import MatrixOracle, OracleHints


def trailing_zeros(k: int) -> int:
    if k < 1:
        raise ValidationError("index must be >= 1")
    return (k & -k).bit_length() - 1


def kakutani_weight(k: int) -> float:
    return 2.0 ** (-trailing_zeros(k))


@dataclass(frozen=True)
class GalleryEntry:
    """A named oracle with reference values and provenance notes."""

    name: str
    params: dict
    oracle: MatrixOracle
    provenance: str
    extras: dict = field(default_factory=dict)

    @property
    def known_values(self) -> dict:
        return self.oracle.known_values


def _backward_shift(params):
    def entry(i, j):
        return 1.0 if j == i + 1 else 0.0

    def support(i, lo, hi):
        return (i + 1,) if lo <= i + 1 <= hi else ()

    oracle = MatrixOracle(
        name="backward_shift",
        entry=entry,
        norm_bound=1.0,
        hints=OracleHints(band_halfwidth=1, row_support_bound=1, acyclic=True,
                          support_columns=support),
        known_values={"r": 1.0, "mu": 0.0, "m": 0.0, "m_e": 0.0, "r_prime": 1.0,
                      "r_ess": 1.0, "sigma_p": "[0, 1]"},
        known_local_radius=lambda j: 0.0,
    )
    return GalleryEntry(
        name="backward_shift", params={}, oracle=oracle,
        provenance="unweighted shift acting as x -> (x_2, x_3, ...); no cycles, yet unit radius",
    )


def _forward_shift(params):
    def entry(i, j):
        return 1.0 if j == i - 1 else 0.0

    def support(i, lo, hi):
        return (i - 1,) if i >= 2 and lo <= i - 1 <= hi else ()

    oracle = MatrixOracle(
        name="forward_shift",
        entry=entry,
        norm_bound=1.0,
        hints=OracleHints(band_halfwidth=1, row_support_bound=1, acyclic=True,
                          support_columns=support),
        known_values={"r": 1.0, "mu": 0.0, "m": 1.0, "m_e": 1.0, "r_prime": 1.0,
                      "r_ess": 1.0, "sigma_p": "empty set"},
        known_local_radius=lambda j: 1.0,
    )
    return GalleryEntry(
        name="forward_shift", params={}, oracle=oracle,
        provenance="transpose of the backward shift; unit radius with empty point spectrum",
    )


def _diag_ratio(params):
    def entry(i, j):
        return i / (i + 1.0) if i == j else 0.0

    def support(i, lo, hi):
        return (i,) if lo <= i <= hi else ()

    oracle = MatrixOracle(
        name="diag_ratio",
        entry=entry,
        norm_bound=1.0,
        hints=OracleHints(band_halfwidth=0, row_support_bound=1, support_columns=support),
        known_values={"r": 1.0, "mu": 1.0, "m": 1.0, "m_e": 1.0, "r_prime": 0.0,
                      "r_ess": 1.0, "sigma_p": "{ i/(i+1) : i >= 1 }"},
        known_local_radius=lambda j: j / (j + 1.0),
    )
    return GalleryEntry(
        name="diag_ratio", params={}, oracle=oracle,
        provenance="diagonal loops i/(i+1): the cycle-mean supremum equals 1 but is never attained",
    )


def _diag_inverse(params):
    def entry(i, j):
        return 1.0 / i if i == j else 0.0

    def support(i, lo, hi):
        return (i,) if lo <= i <= hi else ()

    oracle = MatrixOracle(
        name="diag_inverse",
        entry=entry,
        norm_bound=1.0,
        hints=OracleHints(band_halfwidth=0, row_support_bound=1, support_columns=support),
        known_values={"r": 1.0, "mu": 1.0, "m": 1.0, "m_e": 0.0, "r_prime": 0.0,
                      "r_ess": 0.0, "sigma_p": "{ 1/i : i >= 1 }"},
        known_local_radius=lambda j: 1.0 / j,
    )
    return GalleryEntry(
        name="diag_inverse", params={}, oracle=oracle,
        provenance="diagonal loops 1/i: local radii 1/j vanish in the tail while the radius stays 1",
    )


def _star_means(params):
    def entry(i, j):
        if i == 1 and j >= 2:
            return (j - 1.0) / j
        if j == 1 and i >= 2:
            return (i - 1.0) / i
        return 0.0

    def support(i, lo, hi):
        if i == 1:
            return range(max(lo, 2), hi + 1)
        return (1,) if lo <= 1 <= hi else ()

    oracle = MatrixOracle(
        name="star_means",
        entry=entry,
        norm_bound=1.0,
        hints=OracleHints(irreducible=True, zero_tail_after=1, support_columns=support),
        known_values={"r": 1.0, "mu": 1.0, "m": 1.0, "m_e": 1.0, "r_ess": 0.0,
                      "r_prime": 0.0, "sigma_p": "{1}"},
        known_local_radius=lambda j: 1.0,
    )
    return GalleryEntry(
        name="star_means", params={}, oracle=oracle,
        provenance="symmetric star through node 1 with weights (n-1)/n; tail compression is zero",
    )


def _epsilon_cycle(params):
    eps = params["eps"]
    if not 0.0 < eps < 1.0:
        raise ValidationError(f"eps must lie in (0, 1): {eps!r}")

    def entry(i, j, _e=eps):
        if i == 1:
            return _e ** j
        if j == i - 1:
            return 1.0
        return 0.0

    def support(i, lo, hi):
        if i == 1:
            return range(max(lo, 1), hi + 1)
        return (i - 1,) if lo <= i - 1 <= hi else ()

    oracle = MatrixOracle(
        name="epsilon_cycle",
        entry=entry,
        norm_bound=1.0,
        hints=OracleHints(irreducible=True, support_columns=support),
        known_values={"r": 1.0, "mu": eps, "m": 1.0, "m_e": 1.0, "r_ess": 1.0,
                      "r_prime": 1.0, "sigma_p": "empty set"},
        known_local_radius=lambda j: 1.0,
    )
    return GalleryEntry(
        name="epsilon_cycle", params={"eps": eps}, oracle=oracle,
        provenance="irreducible: geometric row 1 plus a descending unit chain; every cycle mean equals eps",
    )


def _kakutani(params):
    def entry(i, j):
        return kakutani_weight(i) if j == i + 1 else 0.0

    def support(i, lo, hi):
        return (i + 1,) if lo <= i + 1 <= hi else ()

    oracle = MatrixOracle(
        name="kakutani",
        entry=entry,
        norm_bound=1.0,
        hints=OracleHints(band_halfwidth=1, row_support_bound=1, acyclic=True,
                          support_columns=support),
        known_values={"r": 0.5, "mu": 0.0, "m": 0.0, "m_e": 0.0, "r_prime": 0.5,
                      "r_ess": 0.5, "sigma_p": "[0, 1/2]"},
        known_local_radius=lambda j: 0.0,
    )
    return GalleryEntry(
        name="kakutani", params={}, oracle=oracle,
        provenance="classical Kakutani weighted shift: weight 2^-(trailing zeros of i) on (i, i+1)",
    )


def _kakutani_cutoff(params):
    m = params["m"]
    if not (isinstance(m, int) and m >= 1):
        raise ValidationError(f"m must be an integer >= 1: {m!r}")
    threshold = 2.0 ** (-m)

    def entry(i, j, _t=threshold):
        if j != i + 1:
            return 0.0
        w = kakutani_weight(i)
        return w if w > _t else 0.0

    def support(i, lo, hi):
        return (i + 1,) if lo <= i + 1 <= hi else ()

    oracle = MatrixOracle(
        name=f"kakutani_cutoff({m})",
        entry=entry,
        norm_bound=1.0,
        hints=OracleHints(band_halfwidth=1, row_support_bound=1, acyclic=True,
                          support_columns=support),
        known_values={"r": 0.0, "mu": 0.0, "m": 0.0, "m_e": 0.0, "r_prime": 0.0,
                      "r_ess": 0.0, "sigma_p": "{0}"},
        known_local_radius=lambda j: 0.0,
    )
    return GalleryEntry(
        name="kakutani_cutoff", params={"m": m}, oracle=oracle,
        provenance="Kakutani shift with weights <= 2^-m removed: chains break at multiples "
                   "of 2^m, so the matrix is nilpotent of order 2^m",
        extras={"nilpotency_order": 2 ** m, "distance_to_full": threshold},
    )


# --- Holder family -----------------------------------------------------------

_block_size_cache: dict = {}


def holder_block_size(alpha: float, i: int) -> int:
    """Smallest chain length n for block i: the closed block-i cycle mean
    (1 + 1/i)^{(n-1)/n} * i^{-2/(alpha n)} must exceed 1 + 1/(2i).

    The left side increases in n, so a doubling search followed by a
    binary search finds the minimum.  Block 1 is the fixed single loop.
    """
    if alpha <= 0:
        raise ValidationError(f"alpha must be positive: {alpha!r}")
    if i == 1:
        return 1
    key = (alpha, i)
    if key in _block_size_cache:
        return _block_size_cache[key]

    gain = math.log1p(1.0 / i)
    target = math.log1p(1.0 / (2.0 * i))
    drag = gain + (2.0 / alpha) * math.log(i)

    def satisfied(n):
        return gain - drag / n > target

    hi = 2
    while not satisfied(hi):
        hi *= 2
        if hi > 2 ** 60:
            raise ValidationError("block size search overflow")
    lo = max(2, hi // 2)
    while lo < hi:
        mid = (lo + hi) // 2
        if satisfied(mid):
            hi = mid
        else:
            lo = mid + 1
    _block_size_cache[key] = lo
    return lo


class _DiagonalPairing:
    """Diagonal enumeration of the ragged pairs (i, j), 1 <= j <= n_i,
    ordered by (i + j, i); flat indices are 1-based."""

    def __init__(self, alpha: float):
        self.alpha = alpha
        self._pairs = []
        self._index = {}
        self._next_diag = 2

    def _extend_to(self, count: int):
        while len(self._pairs) < count:
            d = self._next_diag
            for i in range(1, d):
                j = d - i
                if j <= holder_block_size(self.alpha, i):
                    self._index[(i, j)] = len(self._pairs) + 1
                    self._pairs.append((i, j))
            self._next_diag += 1

    def pair_of_index(self, k: int):
        if k < 1:
            raise ValidationError("flat indices are 1-based")
        self._extend_to(k)
        return self._pairs[k - 1]

    def index_of_pair(self, i: int, j: int) -> int:
        key = (i, j)
        while key not in self._index:
            self._extend_to(len(self._pairs) + 1024)
        return self._index[key]


def _holder_family(params):
    alpha = float(params["alpha"])
    if alpha <= 0:
        raise ValidationError(f"alpha must be positive: {alpha!r}")
    base = bool(params.get("base", False))
    k = params.get("k")
    if not base:
        if not (isinstance(k, int) and k >= 2):
            raise ValidationError(f"k must be an integer >= 2: {k!r}")
        closer = k ** (-2.0 / alpha)
    else:
        closer = 0.0
    pairing = _DiagonalPairing(alpha)

    def entry(r, c, _p=pairing, _a=alpha, _w=closer):
        ri, rj = _p.pair_of_index(r)
        ci, cj = _p.pair_of_index(c)
        if ri == 1 and ci == 1:
            return 1.0
        if ri == ci and ri >= 2:
            if rj == cj + 1:
                return 1.0 + 1.0 / ri
            if _w and rj == 1 and cj == holder_block_size(_a, ci):
                return _w
        return 0.0

    def support(r, lo, hi, _p=pairing, _a=alpha, _closed=bool(closer)):
        ri, rj = _p.pair_of_index(r)
        cols = []
        if ri == 1:
            cols.append(_p.index_of_pair(1, 1))
        elif rj >= 2:
            cols.append(_p.index_of_pair(ri, rj - 1))
        elif _closed:
            cols.append(_p.index_of_pair(ri, holder_block_size(_a, ri)))
        return tuple(c for c in cols if lo <= c <= hi)

    known = {"mu": 1.0, "r": 1.0} if base else {"r": designated_holder_radius(alpha, k)}
    oracle = MatrixOracle(
        name="holder_family" + ("_base" if base else f"({alpha},{k})"),
        entry=entry,
        norm_bound=1.5,
        hints=OracleHints(support_columns=support, row_support_bound=1),
        known_values=known,
    )
    extras = {"pairing": pairing, "block_size": lambda i: holder_block_size(alpha, i)}
    if not base:
        extras["distance_to_base"] = closer
    return GalleryEntry(
        name="holder_family",
        params={"alpha": alpha, "k": k, "base": base},
        oracle=oracle,
        provenance="weighted chain blocks of length n_i with gains 1+1/i; closing each block "
                   "with weight k^(-2/alpha) lifts the radius past 1 + 1/(2k)",
        extras=extras,
    )


def designated_holder_radius(alpha: float, k: int) -> float:
    """The block-k cycle geometric mean ((1+1/k)^{n_k-1} k^{-2/alpha})^{1/n_k};
    a certified lower bound for the radius of the closed family member."""
    n_k = holder_block_size(alpha, k)
    log_val = ((n_k - 1) * math.log1p(1.0 / k) - (2.0 / alpha) * math.log(k)) / n_k
    return math.exp(log_val)


def _shift_perturbed(params):
    n = params["n"]
    eps = float(params["eps"])
    eps_prime = float(params.get("eps_prime", 0.0))
    if not (isinstance(n, int) and n >= 2):
        raise ValidationError(f"n must be an integer >= 2: {n!r}")
    if not (eps > 0 and math.isfinite(eps)):
        raise ValidationError(f"eps must be positive: {eps!r}")
    if not 0.0 <= eps_prime < eps:
        raise ValidationError(f"need 0 <= eps_prime < eps: {eps_prime!r}")

    def entry(i, j, _n=n, _e=eps, _ep=eps_prime):
        if i < _n and j == i + 1:
            return _e
        if _ep and i == _n and j == 1:
            return _ep
        return 0.0

    def support(i, lo, hi, _n=n, _ep=eps_prime):
        cols = []
        if i < _n:
            cols.append(i + 1)
        if _ep and i == _n:
            cols.append(1)
        return tuple(c for c in cols if lo <= c <= hi)

    radius = (eps ** (n - 1) * eps_prime) ** (1.0 / n) if eps_prime else 0.0
    oracle = MatrixOracle(
        name=f"shift_perturbed({n},{eps},{eps_prime})",
        entry=entry,
        norm_bound=eps,
        hints=OracleHints(acyclic=not eps_prime, support_columns=support,
                          zero_tail_after=n, row_support_bound=2),
        known_values={"r": radius, "mu": radius},
    )
    return GalleryEntry(
        name="shift_perturbed",
        params={"n": n, "eps": eps, "eps_prime": eps_prime},
        oracle=oracle,
        provenance="length-n chain of weight eps; eps_prime > 0 closes it into a single n-cycle "
                   "whose mean tends to eps while the closing entry tends to 0",
    )


_REGISTRY = {
    "backward_shift": (_backward_shift, ()),
    "forward_shift": (_forward_shift, ()),
    "diag_ratio": (_diag_ratio, ()),
    "diag_inverse": (_diag_inverse, ()),
    "star_means": (_star_means, ()),
    "epsilon_cycle": (_epsilon_cycle, ("eps",)),
    "kakutani": (_kakutani, ()),
    "kakutani_cutoff": (_kakutani_cutoff, ("m",)),
    "holder_family": (_holder_family, ("alpha", "k", "base")),
    "shift_perturbed": (_shift_perturbed, ("n", "eps", "eps_prime")),
}


def gallery(name: str, **params) -> GalleryEntry:
    """Build a registered gallery entry; unknown names or parameters fail."""
    if name not in _REGISTRY:
        raise ValidationError(f"unknown gallery name: {name!r}")
    builder, allowed = _REGISTRY[name]
    for key in params:
        if key not in allowed:
            raise ValidationError(f"{name} does not take parameter {key!r}")
    return builder(params)


def gallery_names() -> tuple:
    return tuple(sorted(_REGISTRY))


def gallery_summaries() -> list:
    """(name, parameter names, provenance line) for each registry entry."""
    out = []
    for name in gallery_names():
        _, allowed = _REGISTRY[name]
        entry = _example_instance(name)
        out.append({"name": name, "params": list(allowed), "provenance": entry.provenance,
                    "known_values": _jsonable_known(entry.known_values)})
    return out


def _jsonable_known(known: dict) -> dict:
    return {k: v for k, v in sorted(known.items())}


def _example_instance(name: str) -> GalleryEntry:
    defaults = {
        "epsilon_cycle": {"eps": 0.5},
        "kakutani_cutoff": {"m": 2},
        "holder_family": {"alpha": 1.0, "k": 2},
        "shift_perturbed": {"n": 4, "eps": 0.5, "eps_prime": 0.25},
    }
    return gallery(name, **defaults.get(name, {}))

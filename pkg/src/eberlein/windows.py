"""Van Hove window families on the integers.

A family is an ordered list of integer intervals ``[a_n, b_n]`` with strictly
increasing lengths. All means in the package are taken along such a family.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import ExhaustedError

KINDS = ("Prefix", "Symmetric", "Custom")


@dataclass(frozen=True)
class WindowFamily:
    kind: str
    starts: np.ndarray
    stops: np.ndarray
    label: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown window kind {self.kind!r}")
        starts = np.asarray(self.starts, dtype=np.int64)
        stops = np.asarray(self.stops, dtype=np.int64)
        if starts.ndim != 1 or starts.shape != stops.shape or starts.size == 0:
            raise ValueError("a window family needs at least one interval")
        lengths = stops - starts + 1
        if np.any(lengths < 1):
            raise ValueError("window intervals must be nonempty")
        if np.any(np.diff(lengths) <= 0):
            raise ValueError("window lengths must be strictly increasing")
        object.__setattr__(self, "starts", starts)
        object.__setattr__(self, "stops", stops)
        if not self.label:
            object.__setattr__(self, "label", f"{self.kind.lower()}:{int(lengths[-1])}")

    @classmethod
    def from_intervals(cls, intervals, kind="Custom", label=""):
        arr = np.asarray(intervals, dtype=np.int64).reshape(-1, 2)
        return cls(kind, arr[:, 0], arr[:, 1], label)

    def __len__(self):
        return int(self.starts.size)

    def __getitem__(self, n):
        return int(self.starts[n]), int(self.stops[n])

    @property
    def intervals(self):
        return [(int(a), int(b)) for a, b in zip(self.starts, self.stops)]

    @property
    def lengths(self):
        return self.stops - self.starts + 1

    @property
    def max_length(self):
        return int(self.lengths[-1])

    @property
    def span(self):
        """Smallest interval containing every window."""
        return int(self.starts.min()), int(self.stops.max())

    def select(self, indices):
        indices = np.asarray(indices, dtype=np.int64)
        return WindowFamily(self.kind, self.starts[indices], self.stops[indices],
                            f"{self.label}[sub{len(indices)}]")

    def to_dict(self):
        return {"kind": self.kind, "intervals": [list(iv) for iv in self.intervals],
                "label": self.label}

    @classmethod
    def from_dict(cls, d):
        return cls.from_intervals(d["intervals"], kind=d.get("kind", "Custom"),
                                  label=d.get("label", ""))


def _lengths(max_n, num):
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    if num is None or num >= max_n:
        return np.arange(1, max_n + 1, dtype=np.int64)
    if num < 1:
        raise ValueError("num must be >= 1")
    # geometric spacing; rounding collisions are dropped, so fewer than num may remain
    ns = np.unique(np.round(np.geomspace(1, max_n, num)).astype(np.int64))
    ns[-1] = max_n
    return ns


def make_prefix(max_n, num=None):
    """Windows ``[1, n]``.

    With ``num`` set, only ``num`` geometrically spaced lengths ending at
    ``max_n`` are kept, which is a subsequence and hence still van Hove.
    """
    ns = _lengths(int(max_n), num)
    return WindowFamily("Prefix", np.ones_like(ns), ns, f"prefix:{int(max_n)}")


def make_symmetric(max_n, num=None):
    """Windows ``[-n, n]`` of length ``2n + 1``."""
    ns = _lengths(int(max_n), num)
    return WindowFamily("Symmetric", -ns, ns, f"symmetric:{int(max_n)}")


def parse_window_spec(text):
    """Parse ``"prefix:N"``, ``"symmetric:N"`` or either with ``":count"`` appended."""
    parts = text.strip().split(":")
    if len(parts) not in (2, 3) or parts[0] not in ("prefix", "symmetric"):
        raise ValueError(f"bad window spec {text!r}; expected prefix:N[:count] or symmetric:N[:count]")
    max_n = int(parts[1])
    num = int(parts[2]) if len(parts) == 3 else None
    maker = make_prefix if parts[0] == "prefix" else make_symmetric
    return maker(max_n, num)


# -- K-boundaries --------------------------------------------------------------
#
# Sets are finite unions of closed integer intervals, with +-inf endpoints
# allowed so that complements can be formed exactly.

def _normalize(ivs):
    ivs = sorted((lo, hi) for lo, hi in ivs if lo <= hi)
    out = []
    for lo, hi in ivs:
        if out and lo <= out[-1][1] + 1:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def _complement(ivs):
    out, cur = [], -math.inf
    for lo, hi in ivs:
        if lo > cur:
            out.append((cur, lo - 1))
        cur = hi + 1
    if cur < math.inf:
        out.append((cur, math.inf))
    return _normalize(out)


def _minkowski(ivs, k):
    return _normalize((lo - k, hi + k) for lo, hi in ivs)


def _intersect(a, b):
    out = []
    for lo1, hi1 in a:
        for lo2, hi2 in b:
            lo, hi = max(lo1, lo2), min(hi1, hi2)
            if lo <= hi:
                out.append((lo, hi))
    return _normalize(out)


def _difference(a, b):
    return _intersect(a, _complement(b))


def _union(a, b):
    return _normalize(list(a) + list(b))


def _card(ivs):
    total = 0
    for lo, hi in ivs:
        if math.isinf(lo) or math.isinf(hi):
            raise ValueError("unbounded set has no cardinality")
        total += hi - lo + 1
    return int(total)


def k_boundary(interval, K):
    """The K-boundary of ``[a, b]`` for the neighbourhood ``[-K, K]``, as intervals.

    Computed as ``((A + K) minus A) union (((Z minus A) - K) intersect A)``;
    closures are identities on the integers.
    """
    A = _normalize([tuple(interval)])
    outer = _difference(_minkowski(A, K), A)
    inner = _intersect(_minkowski(_complement(A), K), A)
    return _union(outer, inner)


def boundary_ratio(w, n, K):
    """``|boundary^K A_n| / |A_n|``."""
    if K < 1:
        raise ValueError("K must be >= 1")
    if not -len(w) <= n < len(w):
        raise IndexError(f"window index {n} out of range for {len(w)} windows")
    a, b = w[n]
    return _card(k_boundary((a, b), int(K))) / (b - a + 1)


# -- diagonal subsequences -----------------------------------------------------

@dataclass(frozen=True)
class SubsequenceSelector:
    parent: WindowFamily
    indices: tuple = field(default_factory=tuple)

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if not idx or any(j <= i for i, j in zip(idx, idx[1:])):
            raise ValueError("selector indices must be nonempty and strictly increasing")
        object.__setattr__(self, "indices", idx)

    @property
    def family(self):
        return self.parent.select(list(self.indices))


def _diameter(z):
    if z.size <= 2048:
        return float(np.max(np.abs(z[:, None] - z[None, :])))
    # upper bound, avoids the quadratic pairwise table
    return 2.0 * float(np.max(np.abs(z - z.mean())))


def _cauchy_branch(x, idx, tol, min_count):
    """Earliest-anchored subset of ``idx`` along which ``x`` varies by at most ``tol``."""
    if _diameter(x[idx[len(idx) // 2:]]) <= tol:
        return idx
    for pos, anchor in enumerate(idx):
        rest = idx[pos:]
        keep = rest[np.abs(x[rest] - x[anchor]) <= tol / 2]
        if keep.size >= min_count:
            return keep
    return None


def extract_convergent_subsequence(values, lags, tol, parent=None, min_fraction=0.125):
    """Diagonal extraction of windows along which every lag's values settle.

    ``values`` has shape ``(len(lags), n_windows)``. Lags are processed in the
    order given; each stage keeps a subset of the previous stage's indices on
    which that lag's values stay within ``tol`` of each other. A stage keeps
    the full index set when its tail is already Cauchy within ``tol``;
    otherwise the earliest anchor whose ``tol/2``-ball holds at least
    ``min_fraction`` of the remaining indices wins.

    Raises :class:`ExhaustedError` when some lag has no such branch, which is
    a limitation of finite data rather than of the limit statement.
    """
    values = np.atleast_2d(np.asarray(values, dtype=complex))
    if values.shape[0] != len(lags):
        raise ValueError("values must have one row per lag")
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = values.shape[1]
    if parent is None:
        parent = make_prefix(n)
    if len(parent) != n:
        raise ValueError("parent family and values disagree on the number of windows")
    idx = np.arange(n)
    for row, lag in enumerate(lags):
        min_count = max(2, int(math.ceil(min_fraction * idx.size)))
        branch = _cauchy_branch(values[row], idx, tol, min_count)
        if branch is None:
            raise ExhaustedError(f"no subsequence is Cauchy within {tol} at lag {lag}")
        idx = branch
    return SubsequenceSelector(parent, tuple(idx.tolist()))

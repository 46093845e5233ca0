"""Means, reflected Eberlein convolutions and autocorrelations along window families.

For windows ``A_n`` the finite-N cross correlation at lag ``t`` is::

    (1 / |A_n|) * sum_{k in A_n} f(k) * conj(g(k - t))

Sums are exact finite sums over genuine samples. A sequence that does not
cover a required index raises :class:`~eberlein.errors.SupportError`; nothing
is ever zero-padded.
"""

from dataclasses import dataclass, field

import numpy as np

from .sequences import SampledSequence
from .windows import WindowFamily

# Above this many (lag, window) cells only a subset of windows is recorded.
RECORD_BUDGET = 1 << 22
# Lag counts above this switch the final-window evaluation to FFT.
DIRECT_MAX_LAGS = 512


@dataclass
class CheckReport:
    """Outcome of a quantitative identity check.

    ``observed`` is the worst slack found (observed minus allowed); the check
    passes when it is at most zero.
    """

    name: str
    passed: bool
    observed: float
    bound: float
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {"name": self.name, "passed": bool(self.passed), "observed": self.observed,
                "bound": self.bound, "details": self.details}


@dataclass
class WindowAverage:
    """Per-window values of an average, plus the last-window value."""

    values: np.ndarray
    lengths: np.ndarray
    final: complex
    cauchy_defect: float


@dataclass
class CorrelationEstimate:
    lags: np.ndarray
    values: np.ndarray          # shape (len(lags), len(window_indices))
    window_indices: np.ndarray  # windows that have recorded values
    lengths: np.ndarray         # |A_n| for the recorded windows
    final: np.ndarray
    cauchy_defect: np.ndarray
    window_label: str = ""

    def value_at(self, lag):
        return self.final[self._row(lag)]

    def _row(self, lag):
        hit = np.nonzero(self.lags == lag)[0]
        if hit.size == 0:
            raise KeyError(f"lag {lag} not on the grid")
        return int(hit[0])

    def to_dict(self):
        return {
            "lags": self.lags.tolist(),
            "window_indices": self.window_indices.tolist(),
            "lengths": self.lengths.tolist(),
            "per_window_values": [[[z.real, z.imag] for z in row] for row in self.values],
            "final": [[z.real, z.imag] for z in self.final],
            "cauchy_defect": self.cauchy_defect.tolist(),
            "window_label": self.window_label,
        }

    @classmethod
    def from_dict(cls, d):
        def carr(x):
            a = np.asarray(x, dtype=float)
            return a[..., 0] + 1j * a[..., 1] if a.size else np.zeros(a.shape[:-1], dtype=complex)
        values = carr(d["per_window_values"]) if d["per_window_values"] else np.zeros((0, 0), complex)
        return cls(np.asarray(d["lags"], dtype=np.int64), values,
                   np.asarray(d["window_indices"], dtype=np.int64),
                   np.asarray(d["lengths"], dtype=np.int64), carr(d["final"]),
                   np.asarray(d["cauchy_defect"], dtype=float), d.get("window_label", ""))


@dataclass
class Autocorrelation:
    """Hermitian-symmetrized lag sequence ``gamma(t)`` for ``|t| <= L``.

    ``n_used`` and ``sup_norm_bound`` describe the data the sequence came
    from and set the positive-definiteness tolerance; both are None for lag
    sequences given in closed form.
    """

    lags: np.ndarray
    gamma: np.ndarray
    window_label: str = ""
    n_used: int = None
    sup_norm_bound: float = None

    def __post_init__(self):
        lags = np.asarray(self.lags, dtype=np.int64)
        gamma = np.asarray(self.gamma, dtype=complex)
        L = int(lags.max())
        if not np.array_equal(lags, np.arange(-L, L + 1)):
            raise ValueError("autocorrelation lags must be the symmetric grid -L..L")
        # exact symmetry: gamma(-t) = conj(gamma(t)), gamma(0) real
        gamma = 0.5 * (gamma + np.conj(gamma[::-1]))
        self.lags, self.gamma = lags, gamma

    @property
    def L(self):
        return int(self.lags[-1])

    @property
    def positive(self):
        """``gamma(t)`` for ``t = 0..L``."""
        return self.gamma[self.L:]

    def __call__(self, t):
        return self.gamma[int(t) + self.L]

    @property
    def pd_tolerance(self):
        """Allowed negative dip of the quadratic form, ``10 B^2 (L+1)^2 / N``."""
        g0 = max(float(self.gamma[self.L].real), 1.0)
        if self.n_used is None:
            return 1e-9 * g0
        bound = self.sup_norm_bound if self.sup_norm_bound is not None else np.sqrt(g0)
        return 10.0 * bound ** 2 * (self.L + 1) ** 2 / self.n_used

    @classmethod
    def from_positive(cls, gamma_pos, **kw):
        """Build from ``gamma(0..L)``, extending by conjugate symmetry."""
        g = np.asarray(gamma_pos, dtype=complex)
        L = g.size - 1
        full = np.concatenate((np.conj(g[:0:-1]), g))
        return cls(np.arange(-L, L + 1), full, **kw)

    def to_dict(self):
        return {"lags": self.lags.tolist(), "gamma": [[z.real, z.imag] for z in self.gamma],
                "window_label": self.window_label, "n_used": self.n_used,
                "sup_norm_bound": self.sup_norm_bound}

    @classmethod
    def from_dict(cls, d):
        g = np.asarray(d["gamma"], dtype=float)
        return cls(np.asarray(d["lags"]), g[:, 0] + 1j * g[:, 1], d.get("window_label", ""),
                   d.get("n_used"), d.get("sup_norm_bound"))


# -- window sums --------------------------------------------------------------------

def _cauchy_defect(v):
    """Largest successive difference over the last quarter of the values."""
    if v.size < 2:
        return 0.0
    tail = v[(3 * v.size) // 4:] if v.size >= 8 else v[-2:]
    if tail.size < 2:
        tail = v[-2:]
    return float(np.max(np.abs(np.diff(tail))))


def window_sums(x, x_start, w):
    """``sum_{k in A_n} x(k)`` for every window via one cumulative sum."""
    lo, hi = w.span
    seg = x[lo - x_start:hi - x_start + 1]
    csum = np.concatenate(([0], np.cumsum(seg)))
    return csum[w.stops - lo + 1] - csum[w.starts - lo]


def _average(x, x_start, w):
    vals = window_sums(x, x_start, w) / w.lengths
    return WindowAverage(vals, w.lengths.copy(), complex(vals[-1]), _cauchy_defect(vals))


def mean(f, w):
    """``M_{A_n}(f) = (1/|A_n|) sum_{k in A_n} f(k)`` for every window."""
    lo, hi = w.span
    f.require(lo, hi, "f")
    return _average(f.values, f.start, w)


def _record_indices(n_windows, n_lags, record):
    if record is not None:
        idx = np.unique(np.asarray(record, dtype=np.int64) % n_windows)
        return idx
    if n_windows * n_lags <= RECORD_BUDGET:
        return np.arange(n_windows)
    keep = max(2, RECORD_BUDGET // n_lags)
    return np.unique(np.linspace(0, n_windows - 1, keep).round().astype(np.int64))


def _lag_grid(lags):
    lags = np.asarray(lags, dtype=np.int64).ravel()
    if lags.size == 0:
        raise ValueError("lag grid is empty")
    return lags


def _fft_correlation(fseg, gseg, tmin, tmax):
    """``c(t) = sum_i f[i] conj(g[i + tmax - t])`` for t in tmin..tmax."""
    n, m = fseg.size, gseg.size
    size = 1 << int(np.ceil(np.log2(n + m)))
    r = np.fft.ifft(np.fft.fft(gseg, size) * np.conj(np.fft.fft(fseg, size)))
    # r[u] = sum_i g[i + u] conj(f[i]) for u = 0..m-n
    u = tmax - np.arange(tmin, tmax + 1)
    return np.conj(r[u])


def reflected_eberlein(f, g, w, lags, record=None, method="auto"):
    """Finite-window reflected Eberlein convolution of ``f`` and ``g``.

    Parameters
    ----------
    f, g : SampledSequence
        ``f`` must cover every window; ``g`` must cover every window shifted
        by every lag.
    w : WindowFamily
    lags : sequence of int
    record : sequence of int, optional
        Window indices whose values are stored. By default all windows are
        stored unless that exceeds ``RECORD_BUDGET`` cells, in which case an
        evenly spaced subset (always including the last window) is kept.
    method : {"auto", "direct", "fft"}
        ``direct`` evaluates every window with cumulative sums, one pass per
        lag. ``fft`` evaluates only the recorded windows by FFT and is chosen
        automatically for more than ``DIRECT_MAX_LAGS`` lags.

    Returns
    -------
    CorrelationEstimate
    """
    lags = _lag_grid(lags)
    lo, hi = w.span
    f.require(lo, hi, "f")
    g.require(lo - int(lags.max()), hi - int(lags.min()), "g")
    if method == "auto":
        method = "direct" if lags.size <= DIRECT_MAX_LAGS else "fft"

    nw = len(w)
    if method == "fft" and record is None:
        # last quarter of the family, thinned, so the Cauchy defect is meaningful
        tail = np.arange((3 * nw) // 4, nw)
        record = np.unique(np.linspace(tail[0], nw - 1, min(8, tail.size)).round().astype(np.int64))
    rec = _record_indices(nw, lags.size, record)
    if rec[-1] != nw - 1:
        rec = np.append(rec, nw - 1)

    fseg = f.segment(lo, hi)
    values = np.empty((lags.size, rec.size), dtype=complex)
    final = np.empty(lags.size, dtype=complex)
    defect = np.empty(lags.size)

    if method == "direct":
        lens = w.lengths
        for i, t in enumerate(lags):
            prod = fseg * np.conj(g.segment(lo - t, hi - t))
            csum = np.concatenate(([0], np.cumsum(prod)))
            v = (csum[w.stops - lo + 1] - csum[w.starts - lo]) / lens
            values[i] = v[rec]
            final[i] = v[-1]
            defect[i] = _cauchy_defect(v)
    elif method == "fft":
        tmin, tmax = int(lags.min()), int(lags.max())
        for j, n in enumerate(rec):
            a, b = w[n]
            c = _fft_correlation(f.segment(a, b), g.segment(a - tmax, b - tmin), tmin, tmax)
            values[:, j] = c[lags - tmin] / (b - a + 1)
        final[:] = values[:, -1]
        tail = values[:, rec >= (3 * nw) // 4] if np.any(rec >= (3 * nw) // 4) else values[:, -2:]
        defect[:] = np.max(np.abs(np.diff(tail, axis=1)), axis=1) if tail.shape[1] > 1 else 0.0
    else:
        raise ValueError(f"unknown method {method!r}")

    return CorrelationEstimate(lags, values, rec, w.lengths[rec].copy(), final, defect, w.label)


def autocorrelation(f, w, L, method="auto"):
    """``gamma(t)`` for ``|t| <= L`` from the last window, hermitian-symmetrized."""
    lags = np.arange(-int(L), int(L) + 1)
    est = reflected_eberlein(f, f, w, lags, record=[len(w) - 1] if method != "direct" else None,
                             method=method)
    return Autocorrelation(lags, est.final, w.label, w.max_length, f.sup_norm_bound)


# -- structural checks ------------------------------------------------------------

def sesquilinearity_check(f, g, h, a, b, w, lags, rtol=1e-12):
    """``<<a f + b h, g>> = a <<f, g>> + b <<h, g>>`` at every recorded window."""
    a, b = complex(a), complex(b)
    combo = a * f + b * h
    left = reflected_eberlein(combo, g, w, lags)
    fg = reflected_eberlein(f, g, w, lags)
    hg = reflected_eberlein(h, g, w, lags)
    right = a * fg.values + b * hg.values
    scale = max(1.0, float(np.max(np.abs(right))), float(np.max(np.abs(left.values))))
    err = float(np.max(np.abs(left.values - right))) / scale
    return CheckReport("sesquilinearity", err <= rtol, err - rtol, rtol, {"relative_error": err})


def hermiticity_check(f, g, w, lags):
    """``<<g, f>>(-t)`` against ``conj(<<f, g>>(t))`` with bound ``2|f||g|(|t|+1)/|A_n|``."""
    lags = _lag_grid(lags)
    fg = reflected_eberlein(f, g, w, lags)
    gf = reflected_eberlein(g, f, w, -lags)
    gap = np.abs(gf.values - np.conj(fg.values))
    bound = (2 * f.sup_norm_bound * g.sup_norm_bound
             * (np.abs(lags)[:, None] + 1) / fg.lengths[None, :])
    slack = float(np.max(gap - bound))
    return CheckReport("hermiticity", slack <= 0, slack, float(bound.min()),
                       {"max_gap": float(gap.max())})


def translation_covariance_check(f, g, t0, w, lags):
    """``<<tau_t0 f, g>>(t)`` against ``<<f, g>>(t - t0)``.

    Allowed gap per window: ``2 |f| |g| |t0| / |A_n|``.
    """
    lags = _lag_grid(lags)
    t0 = int(t0)
    left = reflected_eberlein(f.shift(t0), g, w, lags)
    right = reflected_eberlein(f, g, w, lags - t0)
    gap = np.abs(left.values - right.values)
    bound = 2 * f.sup_norm_bound * g.sup_norm_bound * abs(t0) / left.lengths[None, :]
    slack = float(np.max(gap - bound))
    return CheckReport("translation_covariance", slack <= 1e-12, slack, float(bound.min()),
                       {"max_gap": float(gap.max()), "t0": t0})


def universal_bound_check(f, g, w, lags):
    """Every correlation value has modulus at most ``|f|_inf |g|_inf``."""
    est = reflected_eberlein(f, g, w, lags)
    bound = f.sup_norm_bound * g.sup_norm_bound
    peak = float(np.max(np.abs(est.values)))
    return CheckReport("universal_bound", peak <= bound * (1 + 1e-12), peak - bound, bound)


def mean_invariance_check(f, t0, w):
    """``|M(tau_t0 f) - M(f)| <= 2 |f| |t0| / |A_n|``."""
    m1 = mean(f.shift(int(t0)), w).values
    m0 = mean(f, w).values
    bound = 2 * f.sup_norm_bound * abs(int(t0)) / w.lengths
    slack = float(np.max(np.abs(m1 - m0) - bound))
    return CheckReport("mean_invariance", slack <= 1e-12, slack, float(bound.min()))


def toeplitz_min_eigenvalue(gamma_pos):
    """Smallest eigenvalue of ``[gamma(s - t)]_{s,t=0..L}`` (hermitian Toeplitz)."""
    from scipy.linalg import toeplitz, eigvalsh

    g = np.asarray(gamma_pos, dtype=complex)
    return float(eigvalsh(toeplitz(g), subset_by_index=[0, 0])[0])


def positive_definite_check(gamma, tolerance=None):
    """Gram test: ``sum c_s conj(c_t) gamma(s - t) >= -eps`` for unit ``c`` on the lag grid."""
    eps = gamma.pd_tolerance if tolerance is None else float(tolerance)
    lam = toeplitz_min_eigenvalue(gamma.positive)
    return CheckReport("positive_definite", lam >= -eps, -lam - eps, eps, {"min_eigenvalue": lam})

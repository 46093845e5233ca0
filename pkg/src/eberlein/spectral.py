"""Fourier-Bohr coefficients, Herglotz inversion and Bragg-peak detection on the torus.

Torus points are numbers in ``[0, 1)``; rational points may be given as
:class:`fractions.Fraction` (or strings such as ``"1/3"``) and are then
evaluated with exact phase reduction.

The inversion of a positive-definite lag sequence ``gamma(|j| <= L)`` into a
measure on the torus proceeds in three stages:

1. Atoms. The mass at a candidate point is the Wiener mean of the modulated
   lag sequence (trapezoidal end weights, so the mean is exact for periodic
   sequences whose period divides ``2L``). Candidates are accepted greedily,
   largest first; each accepted atom is subtracted from the lag sequence
   before the next pick, so leakage onto nearby candidates is not counted
   twice.
2. Absolutely continuous part. Fejer means of the atom-free lag sequence are
   evaluated at a few octave scales ``L, L/2, ...``, and summarized on arcs
   of the circle by their median. Singular mass shows up at finite
   resolution as thin peaks that the median ignores and that keep sharpening
   as the scale grows, while a density gives the same median at every
   scale. Arcs whose medians agree across scales up to ``stability_ratio``
   count as ac, with the finest-scale median as their density.
3. Whatever mass is left is reported as the singular continuous residual.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np

from ._parallel import pmap
from .correlation import Autocorrelation, CheckReport, _average, autocorrelation
from .errors import NotPositiveDefiniteError
from .sequences import GOLDEN_MEAN, parse_theta, phases, theta_to_json

ATOM = "Atom"
NO_ATOM = "NoAtom"
INCONCLUSIVE = "Inconclusive"

# scaling-exponent bands for Bragg classification
ATOM_BAND = (-0.15, 0.15)
NO_ATOM_BELOW = -0.35


@dataclass
class FourierBohrEstimate:
    theta: object
    per_window: np.ndarray
    lengths: np.ndarray
    final: complex
    cauchy_defect: float

    def to_dict(self):
        return {"theta": theta_to_json(self.theta),
                "per_window": [[z.real, z.imag] for z in self.per_window],
                "lengths": self.lengths.tolist(),
                "final": [self.final.real, self.final.imag],
                "cauchy_defect": self.cauchy_defect}


def fourier_bohr(f, theta, w):
    """``(1/|A_n|) sum_{k in A_n} exp(-2 pi i theta k) f(k)`` for every window."""
    lo, hi = w.span
    seg = f.segment(lo, hi)
    x = seg * phases(theta, -np.arange(lo, hi + 1))
    avg = _average(x, lo, w)
    return FourierBohrEstimate(parse_theta(theta), avg.values, avg.lengths, avg.final,
                               avg.cauchy_defect)


# -- atoms ----------------------------------------------------------------------

def wiener_mean(gamma, theta):
    """Trapezoidal Wiener mean ``(1/2L) sum'_{|j|<=L} gamma(j) exp(-2 pi i theta j)``.

    The end lags ``+-L`` carry weight 1/2. For hermitian ``gamma`` the result
    is real and is returned as a float.
    """
    g = gamma.positive
    L = g.size - 1
    if L < 1:
        return float(g[0].real)
    j = np.arange(1, L + 1)
    terms = g[1:] * phases(theta, -j)
    s = g[0].real + 2.0 * terms[:-1].real.sum() + terms[-1].real
    return float(s / (2 * L))


def _wiener_kernel(delta, L):
    """Wiener mean of the pure exponential ``exp(2 pi i delta j)``."""
    delta = np.asarray(delta, dtype=float)
    d = np.mod(delta + 0.5, 1.0) - 0.5
    s = np.sin(np.pi * d)
    small = np.abs(s) < 1e-12
    dirichlet = np.where(small, 2 * L - 1,
                         np.sin(np.pi * (2 * L - 1) * d) / np.where(small, 1.0, s))
    return (dirichlet + np.cos(2 * np.pi * L * d)) / (2 * L)


def golden_rotations(terms=32):
    """``k/tau mod 1`` for ``|k| <= terms``, the Fourier module of the Fibonacci word."""
    alpha = 1.0 / GOLDEN_MEAN
    out, seen = [], set()
    for k in range(-terms, terms + 1):
        x = Fraction(0) if k == 0 else (k * alpha) % 1.0
        key = round(float(x), 12) % 1.0
        if key not in seen:
            seen.add(key)
            out.append(x)
    return out


def default_candidates(dyadic_depth=8, golden_terms=32, max_denominator=12):
    """Dyadic points ``k/2^m``, small-denominator rationals and golden rotations."""
    pts = {Fraction(k, 2 ** dyadic_depth) for k in range(2 ** dyadic_depth)}
    for q in range(1, max_denominator + 1):
        pts.update(Fraction(k, q) for k in range(q))
    out = sorted(pts)
    seen = {round(float(x), 12) for x in out}
    for x in golden_rotations(golden_terms):
        key = round(float(x), 12) % 1.0
        if key not in seen:
            seen.add(key)
            out.append(x)
    return out


def dyadic_grid(depth):
    return [Fraction(k, 2 ** depth) for k in range(2 ** depth)]


def atom_threshold(L):
    """Default atom threshold ``max(1e-3, 5/sqrt(L))``."""
    return max(1e-3, 5.0 / math.sqrt(max(L, 1)))


def extract_atoms(gamma, candidates, threshold):
    """Greedy atom extraction; returns ``[(theta, mass)]`` in order of extraction."""
    L = gamma.L
    cands = list(candidates)
    if not cands or L < 1:
        return []
    w = np.array(pmap(lambda th: wiener_mean(gamma, th), cands))
    pos = np.array([float(parse_theta(c)) for c in cands])
    taken = np.zeros(len(cands), dtype=bool)
    atoms = []
    for _ in range(len(cands)):
        masked = np.where(taken, -np.inf, w)
        i = int(np.argmax(masked))
        if masked[i] < threshold:
            break
        atoms.append((cands[i], float(w[i])))
        taken[i] = True
        w = w - w[i] * _wiener_kernel(pos[i] - pos, L)
    return atoms


# -- Fejer means ------------------------------------------------------------------

def fejer_density(lag_pos, scale, grid):
    """Fejer mean ``sum_{|j|<=s} (1 - |j|/(s+1)) c(j) exp(-2 pi i theta j)`` at ``theta = i/grid``.

    ``lag_pos`` holds ``c(0..L)`` of a hermitian sequence; requires ``grid > 2 scale``.
    """
    s = int(scale)
    if grid <= 2 * s:
        raise ValueError("grid too coarse for the Fejer scale")
    c = np.asarray(lag_pos[:s + 1], dtype=complex) * (1.0 - np.arange(s + 1) / (s + 1))
    buf = np.zeros(grid, dtype=complex)
    buf[:s + 1] = c
    if s:
        buf[grid - s:] = np.conj(c[1:][::-1])
    return np.fft.fft(buf).real


def _scales(L, octaves, min_scale):
    floor = min(int(min_scale), L)
    return [L >> k for k in range(int(octaves) + 1) if (L >> k) >= max(floor, 1)] or [L]


@dataclass
class SpectralMeasureEstimate:
    """Decomposition of a measure on the torus into atoms, an ac density and a residual.

    ``ac_density[c]`` is the density near ``c / grid_size``. Atoms, the ac
    integral and the residual add up to ``total_mass + clipped_mass``, where
    ``clipped_mass`` records any negative remainder that was set to zero.
    """

    atoms: list
    ac_density: np.ndarray
    total_mass: float
    residual_sc_mass: float
    clipped_mass: float = 0.0
    provenance: dict = field(default_factory=dict)

    @property
    def grid_size(self):
        return self.ac_density.size

    @property
    def atom_mass(self):
        return float(sum(m for _, m in self.atoms))

    @property
    def ac_mass(self):
        return float(self.ac_density.mean())

    @property
    def grid(self):
        return np.arange(self.grid_size) / self.grid_size

    def mass_at(self, theta, tol=1e-9):
        x = float(parse_theta(theta))
        total = 0.0
        for th, m in self.atoms:
            d = abs(float(parse_theta(th)) - x)
            if min(d, 1 - d) <= tol:
                total += m
        return total

    def fractions(self):
        t = self.total_mass if self.total_mass > 0 else 1.0
        return {"pp": self.atom_mass / t, "ac": self.ac_mass / t, "sc": self.residual_sc_mass / t}

    def spectral_type(self, purity=0.9):
        """``pp``, ``ac`` or ``sc`` when one part holds at least ``purity`` of the mass."""
        for name, frac in self.fractions().items():
            if frac >= purity:
                return name
        return "mixed"

    def reconstruct(self, lags):
        """Inverse transform of atoms plus ac density (the residual is left out)."""
        lags = np.asarray(lags, dtype=np.int64)
        out = np.zeros(lags.size, dtype=complex)
        for th, m in self.atoms:
            out += m * phases(th, lags)
        M = self.grid_size
        # Riemann sum over the grid; exact for |t| < M when the density is a trig polynomial
        spec = np.fft.ifft(self.ac_density)  # (1/M) sum_c h_c exp(2 pi i c t / M)
        out += spec[np.mod(lags, M)]
        return out

    def to_dict(self):
        return {
            "atoms": [[theta_to_json(t), m] for t, m in self.atoms],
            "ac_density": self.ac_density.tolist(),
            "grid_size": self.grid_size,
            "total_mass": self.total_mass,
            "atom_mass": self.atom_mass,
            "ac_mass": self.ac_mass,
            "residual_sc_mass": self.residual_sc_mass,
            "clipped_mass": self.clipped_mass,
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, d):
        return cls([(parse_theta(t), float(m)) for t, m in d["atoms"]],
                   np.asarray(d["ac_density"], dtype=float), float(d["total_mass"]),
                   float(d["residual_sc_mass"]), float(d.get("clipped_mass", 0.0)),
                   d.get("provenance", {}))


def _pd_diagnostic(gamma):
    from .correlation import toeplitz_min_eigenvalue

    L = gamma.L
    if L + 1 <= 1024:
        return toeplitz_min_eigenvalue(gamma.positive)
    # Fejer mean at scale L is a Rayleigh quotient of the Toeplitz form
    grid = 1 << int(math.ceil(math.log2(4 * (L + 1))))
    return float(fejer_density(gamma.positive, L, grid).min())


def herglotz_invert(gamma, grid_size=4096, atom_candidates=None, threshold=None,
                    octaves=4, min_scale=16, stability_ratio=2.0, blocks=256, check_pd=True):
    """Estimate the measure on the torus whose Fourier coefficients are ``gamma``.

    Atoms are found by Wiener means at candidate points and subtracted from
    the lag sequence. What is left is smoothed with Fejer kernels at the
    scales ``L, L/2, ..., L/2**octaves`` (not below ``min_scale``). On each of
    ``blocks`` arcs of the circle the median of every smoothed density is
    taken; the median ignores the thin, tall peaks through which singular
    mass shows up at finite resolution. An arc counts as absolutely
    continuous when its medians agree across scales up to
    ``stability_ratio``; its density is then the finest-scale median. The
    rest of the mass is the singular continuous residual.

    Parameters
    ----------
    gamma : Autocorrelation
    grid_size : int
        Number of points of the reported ac density grid.
    atom_candidates : list, optional
        Torus points tested for atoms; :func:`default_candidates` if omitted.
    threshold : float, optional
        Minimal atom mass; :func:`atom_threshold` of ``L`` if omitted.
    octaves, min_scale, stability_ratio, blocks
        Parameters of the ac/sc split described above.
    check_pd : bool
        Reject lag sequences that are not positive definite within
        ``gamma.pd_tolerance``.

    Returns
    -------
    SpectralMeasureEstimate
    """
    if not isinstance(gamma, Autocorrelation):
        raise TypeError("gamma must be an Autocorrelation")
    L = gamma.L
    g0 = float(gamma.gamma[L].real)
    if g0 < 0:
        raise NotPositiveDefiniteError(g0, 0.0)
    if check_pd:
        lam = _pd_diagnostic(gamma)
        if lam < -gamma.pd_tolerance:
            raise NotPositiveDefiniteError(lam, gamma.pd_tolerance)

    if atom_candidates is None:
        atom_candidates = default_candidates()
    if threshold is None:
        threshold = atom_threshold(L)
    atoms = extract_atoms(gamma, atom_candidates, threshold)

    j = np.arange(L + 1)
    resid = gamma.positive.copy()
    for th, m in atoms:
        resid = resid - m * phases(th, j)

    M = int(grid_size)
    nb = min(int(blocks), M)
    base = math.lcm(M, nb)
    P = base * max(1, math.ceil((4 * (L + 1)) / base))
    scales = _scales(L, octaves, min_scale)
    # arc b covers [b, b + 1) / nb
    med = np.array([np.median(fejer_density(resid, s, P).reshape(nb, -1), axis=1)
                    for s in scales])
    lo, hi = med.min(axis=0), med.max(axis=0)
    floor = 1e-12 * max(g0, 1e-300)
    stable = (lo > floor) & (hi <= stability_ratio * lo)
    arc = np.where(stable, med[0], 0.0)
    ac = arc[(np.arange(M) * nb) // M]

    ac_mass = float(ac.mean())
    atom_mass = float(sum(m for _, m in atoms))
    residual = g0 - atom_mass - ac_mass
    clipped = 0.0
    if residual < 0:
        excess = -residual
        if ac_mass > 0:
            cut = min(excess, ac_mass)
            ac = ac * ((ac_mass - cut) / ac_mass)
            excess -= cut
        clipped = excess
        residual = 0.0

    prov = {"lag_cutoff": L, "kernel": "fejer", "atom_threshold": threshold,
            "scales": scales, "stability_ratio": stability_ratio, "blocks": nb,
            "stable_fraction": float(stable.mean()),
            "n_candidates": len(atom_candidates), "window_label": gamma.window_label}
    return SpectralMeasureEstimate(atoms, ac, g0, float(residual), float(clipped), prov)


def reconstruction_check(est, gamma, max_lag=None, rel_tol=0.05):
    """``|gamma(t) - reconstruct(t)| <= rel_tol * gamma(0) + residual`` for ``|t| <= max_lag``."""
    if max_lag is None:
        max_lag = gamma.L // 4
    lags = np.arange(-max_lag, max_lag + 1)
    err = np.abs(gamma.gamma[lags + gamma.L] - est.reconstruct(lags))
    allowed = rel_tol * est.total_mass + est.residual_sc_mass
    worst = float(err.max())
    return CheckReport("inversion_consistency", worst <= allowed, worst - allowed, allowed,
                       {"max_error": worst})


# -- Bragg scans -------------------------------------------------------------------

@dataclass
class BraggClassification:
    theta: object
    intensities: np.ndarray
    lengths: np.ndarray
    scaling_exponent: float
    verdict: str

    @property
    def final_intensity(self):
        return float(self.intensities[-1])

    def to_dict(self):
        return {"theta": theta_to_json(self.theta), "final_intensity": self.final_intensity,
                "scaling_exponent": self.scaling_exponent, "verdict": self.verdict}


def classify_exponent(slope):
    if ATOM_BAND[0] < slope <= ATOM_BAND[1]:
        return ATOM
    if slope < NO_ATOM_BELOW:
        return NO_ATOM
    return INCONCLUSIVE


def _scaling_exponent(lengths, intensity):
    """Least-squares slope of log intensity against log length over the upper half of log-lengths."""
    logn = np.log(lengths.astype(float))
    mid = 0.5 * (logn[0] + logn[-1])
    sel = logn >= mid
    if np.unique(logn[sel]).size < 2:
        return math.nan
    y = intensity[sel]
    if np.max(y) <= 1e-28:
        return -math.inf
    x = logn[sel]
    ly = np.log(np.maximum(y, 1e-32))
    x = x - x.mean()
    return float((x * (ly - ly.mean())).sum() / (x * x).sum())


def bragg_scan(f, w, thetas):
    """Classify each torus point by how ``|S_n(theta)|^2 / |A_n|^2`` scales with ``|A_n|``."""
    def one(theta):
        fb = fourier_bohr(f, theta, w)
        inten = np.abs(fb.per_window) ** 2
        slope = _scaling_exponent(fb.lengths, inten)
        verdict = INCONCLUSIVE if math.isnan(slope) else classify_exponent(slope)
        return BraggClassification(parse_theta(theta), inten, fb.lengths, slope, verdict)

    return pmap(one, list(thetas))


def consistent_phase_check(f, w, thetas, L=None, tol=0.01):
    """Compare ``|a_theta|^2`` with the Wiener-mean atom mass at each ``theta``.

    This is evidence only: the two agree in the limit when the Fourier-Bohr
    coefficients exist uniformly, which finite data cannot certify.
    """
    if L is None:
        L = max(1, min(256, w.max_length // 4))
    gamma = autocorrelation(f, w, L)
    rows = []
    for theta in thetas:
        a = fourier_bohr(f, theta, w).final
        mass = wiener_mean(gamma, theta)
        rows.append({"theta": theta_to_json(theta), "fb_intensity": abs(a) ** 2,
                     "atom_mass": mass, "gap": abs(abs(a) ** 2 - mass)})
    worst = max(r["gap"] for r in rows)
    return CheckReport("consistent_phase", worst <= tol, worst - tol, tol, {"rows": rows, "L": L})

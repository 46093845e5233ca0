"""Finite-rank pieces of the Hilbert space spanned by translates of sequences.

The semi-inner product is ``<f, g> = M(f conj(g))`` along a window family.
Everything here works with finitely many explicit translates.
"""

from dataclasses import dataclass, field

import numpy as np

from ._parallel import pmap
from .correlation import Autocorrelation, CheckReport, autocorrelation, reflected_eberlein
from .sequences import SampledSequence
from .spectral import herglotz_invert


@dataclass(frozen=True)
class TranslateFamily:
    """The vectors ``tau_s f_i`` for every base sequence ``f_i`` and every shift ``s``.

    Members are ordered base-major: ``(f_0, s_0), (f_0, s_1), ..., (f_1, s_0), ...``.
    """

    base_sequences: tuple
    shifts: tuple = (0,)
    labels: tuple = ()

    def __post_init__(self):
        bases = tuple(self.base_sequences)
        shifts = tuple(int(s) for s in self.shifts)
        if not bases or not shifts:
            raise ValueError("a translate family needs at least one sequence and one shift")
        labels = tuple(self.labels) or tuple(f"f{i}" for i in range(len(bases)))
        if len(labels) != len(bases):
            raise ValueError("one label per base sequence")
        object.__setattr__(self, "base_sequences", bases)
        object.__setattr__(self, "shifts", shifts)
        object.__setattr__(self, "labels", labels)

    @property
    def members(self):
        return [(i, s) for i in range(len(self.base_sequences)) for s in self.shifts]

    @property
    def member_labels(self):
        return [self.labels[i] if s == 0 else f"tau_{s} {self.labels[i]}" for i, s in self.members]

    @property
    def max_shift(self):
        return max(abs(s) for s in self.shifts)

    @property
    def sup_norm_bound(self):
        return max(f.sup_norm_bound for f in self.base_sequences)

    def shifted(self, t0):
        """The same family with every shift moved by ``t0``."""
        return TranslateFamily(self.base_sequences, tuple(s + int(t0) for s in self.shifts),
                               self.labels)

    def require(self, w):
        lo, hi = w.span
        m = self.max_shift
        for f, name in zip(self.base_sequences, self.labels):
            f.require(lo - m, hi + m, name)


@dataclass
class GramMatrix:
    """Hermitian matrix of semi-inner products between the members of a family."""

    entries: np.ndarray
    window_label: str = ""
    defect: float = 0.0
    labels: list = field(default_factory=list)
    n_used: int = None
    sup_norm_bound: float = 1.0
    max_offset: int = 0

    @property
    def size(self):
        return self.entries.shape[0]

    @property
    def pd_tolerance(self):
        """``10 B^2 (d + 1)^2 / N`` with ``d`` the largest shift difference."""
        if self.n_used is None:
            return 1e-9 * max(1.0, float(np.max(np.abs(np.diag(self.entries)))))
        return 10.0 * self.sup_norm_bound ** 2 * (self.max_offset + 1) ** 2 / self.n_used

    def eigenvalues(self):
        return np.linalg.eigvalsh(self.entries)

    def min_eigenvalue(self):
        return float(self.eigenvalues()[0])

    def to_dict(self):
        return {"size": self.size,
                "entries": [[[z.real, z.imag] for z in row] for row in self.entries],
                "labels": list(self.labels), "window_label": self.window_label,
                "defect": self.defect, "n_used": self.n_used,
                "sup_norm_bound": self.sup_norm_bound, "max_offset": self.max_offset}

    @classmethod
    def from_dict(cls, d):
        e = np.asarray(d["entries"], dtype=float)
        return cls(e[..., 0] + 1j * e[..., 1], d.get("window_label", ""), d.get("defect", 0.0),
                   d.get("labels", []), d.get("n_used"), d.get("sup_norm_bound", 1.0),
                   d.get("max_offset", 0))


def _inner(fam, w, u, v):
    (i, s), (j, t) = u, v
    f = fam.base_sequences[i].shift(s)
    g = fam.base_sequences[j].shift(t)
    return complex(reflected_eberlein(f, g, w, [0], record=[len(w) - 1]).final[0])


def gram(fam, w):
    """Gram matrix ``G[u, v] = M(tau_s f_i conj(tau_t f_j))`` over the last window of ``w``.

    Both triangles are computed; ``defect`` is the largest hermiticity
    violation before the matrix is replaced by its hermitian part.
    """
    fam.require(w)
    members = fam.members
    n = len(members)
    pairs = [(a, b) for a in range(n) for b in range(n)]
    vals = pmap(lambda ab: _inner(fam, w, members[ab[0]], members[ab[1]]), pairs)
    G = np.array(vals, dtype=complex).reshape(n, n)
    defect = float(np.max(np.abs(G - G.conj().T))) if n else 0.0
    G = 0.5 * (G + G.conj().T)
    offsets = [abs(s - t) for _, s in members for _, t in members]
    return GramMatrix(G, w.label, defect, fam.member_labels, w.max_length,
                      fam.sup_norm_bound, max(offsets))


def gram_psd_check(G):
    """Eigenvalue floor ``>= -eps_pd``."""
    lam = G.min_eigenvalue()
    eps = G.pd_tolerance
    return CheckReport("gram_psd", lam >= -eps, -lam - eps, eps, {"min_eigenvalue": lam})


def cauchy_schwarz_check(G):
    """``|G[u, v]|^2 <= (G[u, u] + eps)(G[v, v] + eps)`` entrywise."""
    eps = G.pd_tolerance
    d = np.real(np.diag(G.entries)) + eps
    slack = np.abs(G.entries) ** 2 - np.outer(d, d)
    worst = float(slack.max())
    return CheckReport("cauchy_schwarz", worst <= 1e-12, worst, eps)


def shift_unitarity_check(fam, w, t0):
    """Moving every member by ``t0`` changes each Gram entry by at most ``2 B^2 |t0| / |A_n|``."""
    moved = fam.shifted(t0)
    G0 = gram(fam, w).entries
    G1 = gram(moved, w).entries
    gap = float(np.max(np.abs(G1 - G0)))
    bound = 2.0 * fam.sup_norm_bound ** 2 * abs(int(t0)) / w.max_length
    return CheckReport("shift_unitarity", gap <= bound + 1e-12, gap - bound, bound,
                       {"t0": int(t0), "gap": gap})


def spectral_measure_of_vector(f, w, L, **kwargs):
    """Herglotz measure of the lag sequence ``t -> <f, tau_t f>``.

    Keyword arguments go to :func:`herglotz_invert`.
    """
    return herglotz_invert(autocorrelation(f, w, L), **kwargs)


def _share_mass(ef, eg, ac_floor):
    """True, False or None (undecidable) for "the two estimates overlap"."""
    for th, m in ef.atoms:
        if eg.mass_at(th) > 0:
            return True
    if ef.ac_mass > ac_floor and eg.ac_mass > ac_floor:
        return True
    if ef.residual_sc_mass > ac_floor and eg.residual_sc_mass > ac_floor:
        # two singular continuous parts may or may not be supported on disjoint sets
        return None
    return False


@dataclass
class OrthogonalityReport:
    type_f: str
    type_g: str
    mutually_singular: object
    cross_sup: float
    cross_defect: float
    tolerance: float
    orthogonal: bool
    implication_consistent: bool
    converse_failure_witness: bool
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return dict(self.__dict__)


def orthogonality_vs_singularity_check(f, g, w, L, tol=None, ac_floor=0.05, method="auto",
                                       **kwargs):
    """Compare spectral singularity of ``f`` and ``g`` with vanishing of their correlation.

    Singular spectral measures force ``<<f, g>> = 0``; the converse fails,
    and a pair with overlapping spectra but zero correlation is reported as
    a witness of that failure. ``tol`` defaults to the boundary-term scale
    ``2 B_f B_g (L + 1) / N``. ``method`` selects the correlation route;
    ``"direct"`` keeps exact cancellations exact.
    """
    ef = spectral_measure_of_vector(f, w, L, **kwargs)
    eg = spectral_measure_of_vector(g, w, L, **kwargs)
    est = reflected_eberlein(f, g, w, np.arange(-int(L), int(L) + 1), record=[len(w) - 1],
                             method=method)
    sup = float(np.max(np.abs(est.final)))
    if tol is None:
        tol = 2.0 * f.sup_norm_bound * g.sup_norm_bound * (L + 1) / w.max_length
    overlap = _share_mass(ef, eg, ac_floor)
    singular = None if overlap is None else (not overlap)
    orthogonal = sup <= tol
    consistent = (singular is not True) or orthogonal
    witness = overlap is True and orthogonal
    return OrthogonalityReport(ef.spectral_type(), eg.spectral_type(), singular, sup,
                               float(np.max(est.cauchy_defect)), float(tol), orthogonal,
                               consistent, witness,
                               {"f": ef.fractions(), "g": eg.fractions()})


def _kernel(k):
    if isinstance(k, SampledSequence):
        return k
    if isinstance(k, dict):
        lo, hi = min(k), max(k)
        vals = np.zeros(hi - lo + 1, dtype=complex)
        for j, c in k.items():
            vals[j - lo] = c
        return SampledSequence.from_values(lo, vals)
    return SampledSequence.from_values(0, np.asarray(k, dtype=complex))


def convolve(mu, phi):
    """``(mu * phi)(k) = sum_j phi(j) mu(k - j)`` wherever every term is sampled."""
    phi = _kernel(phi)
    lo, hi = mu.start + phi.stop, mu.stop + phi.start
    if lo > hi:
        raise ValueError("kernel is wider than the sampled sequence")
    out = np.zeros(hi - lo + 1, dtype=complex)
    for j, c in zip(phi.indices, phi.values):
        if c != 0:
            out += c * mu.segment(lo - j, hi - j)
    l1 = float(np.abs(phi.values).sum())
    return SampledSequence(lo, out, mu.sup_norm_bound * l1)


def smoothing_equivalence_check(mu, phi, psi, w, lags, nu=None, C=2.0):
    """``<<mu * phi, nu * psi>>(t)`` against ``(<<mu, nu>> * phi * psi~)(t)``.

    The left side correlates the smoothed sequences; the right side smooths
    the correlation, ``sum_{j,l} phi(j) conj(psi(l)) <<mu, nu>>(t - j + l)``.
    Allowed gap: ``C |phi|_1 |psi|_1 B_mu B_nu (max|t| + widths) / |A_n|``.
    """
    nu = mu if nu is None else nu
    phi, psi = _kernel(phi), _kernel(psi)
    lags = np.asarray(lags, dtype=np.int64)
    left = reflected_eberlein(convolve(mu, phi), convolve(nu, psi), w, lags,
                              record=[len(w) - 1]).final

    jj, ll = phi.indices, psi.indices
    need = np.unique((lags[:, None, None] - jj[None, :, None] + ll[None, None, :]).ravel())
    base = reflected_eberlein(mu, nu, w, need, record=[len(w) - 1]).final
    lookup = dict(zip(need.tolist(), base))
    right = np.array([sum(a * np.conj(b) * lookup[int(t - j + l)]
                          for j, a in zip(jj, phi.values) for l, b in zip(ll, psi.values))
                      for t in lags])
    gap = float(np.max(np.abs(left - right)))
    widths = (phi.stop - phi.start) + (psi.stop - psi.start)
    l1 = float(np.abs(phi.values).sum() * np.abs(psi.values).sum())
    bound = C * l1 * mu.sup_norm_bound * nu.sup_norm_bound * (int(np.abs(lags).max()) + widths + 1) \
        / w.max_length
    return CheckReport("smoothing_equivalence", gap <= bound, gap - bound, bound,
                       {"gap": gap, "left": left, "right": right})


@dataclass
class AlmostPeriodScan:
    eps: float
    periods: np.ndarray
    defects: np.ndarray
    max_gap: int
    horizon: int

    def to_dict(self):
        return {"eps": self.eps, "periods": self.periods.tolist(), "max_gap": self.max_gap,
                "horizon": self.horizon}


def almost_periods(gamma, eps):
    """Shifts ``t <= L/2`` with ``max_{|s| <= L/2} |gamma(s + t) - gamma(s)| <= eps gamma(0)``.

    A pure point spectrum makes ``gamma`` Bohr almost periodic, so the
    returned set has bounded gaps; an absolutely continuous spectrum leaves
    only ``t = 0``. ``max_gap`` includes the distance from the last found
    shift to the scan horizon.
    """
    if not isinstance(gamma, Autocorrelation):
        gamma = Autocorrelation.from_positive(gamma)
    L = gamma.L
    H = L // 2
    g = gamma.gamma
    base = g[L - H:L + H + 1]
    defects = np.array([np.max(np.abs(g[L - H + t:L + H + 1 + t] - base)) for t in range(H + 1)])
    g0 = max(float(gamma(0).real), 1e-300)
    periods = np.flatnonzero(defects <= eps * g0)
    edges = np.concatenate((periods, [H]))
    max_gap = int(np.max(np.diff(edges))) if edges.size > 1 else H
    return AlmostPeriodScan(float(eps), periods, defects, max_gap, H)

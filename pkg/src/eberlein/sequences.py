"""Bounded sequences on the integers and the generators that produce them.

Every generator is a pure function of its spec and the requested window, and
restricting a generated window to a sub-window reproduces what generating the
sub-window directly gives.
"""

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np

from .errors import SupportError
from .io import atomic_write_text

GOLDEN_MEAN = (1 + math.sqrt(5)) / 2

# Block length for the counter-style Bernoulli generator. Changing it changes
# every seeded Bernoulli sample, so it is part of the frozen RNG identity.
_BERNOULLI_BLOCK = 4096

GENERATORS = (
    "substitution", "bernoulli", "periodic", "character", "trig_polynomial",
    "sign", "constant_one", "dirac_comb", "custom",
)
SPECTRAL_TYPES = ("pp", "ac", "sc", "mixed")


def parse_theta(theta):
    """Torus point from a float, a Fraction, or a string such as ``"1/3"``."""
    if isinstance(theta, Fraction):
        return theta % 1
    if isinstance(theta, str):
        return Fraction(theta) % 1
    if isinstance(theta, int):
        return Fraction(theta) % 1
    return float(theta) % 1.0


def phases(theta, k):
    """``exp(2 pi i theta k)`` for integer array ``k``.

    Rational ``theta`` is reduced exactly modulo 1 before the trigonometric
    call, so values are exactly periodic in ``k``.
    """
    k = np.asarray(k, dtype=np.int64)
    theta = parse_theta(theta)
    if isinstance(theta, Fraction):
        p, q = theta.numerator, theta.denominator
        frac = (k * p % q) / q
    else:
        frac = np.mod(k * theta, 1.0)
    return np.exp(2j * np.pi * frac)


def theta_to_json(theta):
    theta = parse_theta(theta)
    if isinstance(theta, Fraction):
        return f"{theta.numerator}/{theta.denominator}"
    return float(theta)


# -- sampled sequences -------------------------------------------------------------

@dataclass(frozen=True)
class SampledSequence:
    """Values of a bounded function on ``[start, start + len(values) - 1]``."""

    start: int
    values: np.ndarray
    sup_norm_bound: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.ndim != 1 or values.size < 1:
            raise ValueError("a sampled sequence needs at least one value")
        bound = float(self.sup_norm_bound)
        peak = float(np.max(np.abs(values)))
        if peak > bound * (1 + 1e-12) + 1e-300:
            raise ValueError(f"value of modulus {peak} exceeds declared bound {bound}")
        values.setflags(write=False)
        object.__setattr__(self, "start", int(self.start))
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "sup_norm_bound", bound)

    @classmethod
    def from_values(cls, start, values, bound=None):
        values = np.asarray(values, dtype=complex)
        if bound is None:
            bound = float(np.max(np.abs(values))) if values.size else 0.0
        return cls(start, values, bound)

    def __len__(self):
        return self.values.size

    @property
    def stop(self):
        return self.start + self.values.size - 1

    @property
    def support(self):
        return self.start, self.stop

    @property
    def indices(self):
        return np.arange(self.start, self.stop + 1)

    def require(self, lo, hi, what="sequence"):
        if lo < self.start or hi > self.stop:
            raise SupportError((lo, hi), self.support, what)

    def segment(self, lo, hi):
        """Values on ``[lo, hi]`` as an array; never pads."""
        self.require(lo, hi)
        return self.values[lo - self.start:hi - self.start + 1]

    def restrict(self, lo, hi):
        return SampledSequence(lo, self.segment(lo, hi), self.sup_norm_bound)

    def shift(self, t):
        """The translate ``k -> f(k - t)``."""
        return SampledSequence(self.start + int(t), self.values, self.sup_norm_bound)

    def conj(self):
        return SampledSequence(self.start, np.conj(self.values), self.sup_norm_bound)

    def __mul__(self, c):
        c = complex(c)
        return SampledSequence(self.start, c * self.values, abs(c) * self.sup_norm_bound)

    __rmul__ = __mul__

    def __add__(self, other):
        lo, hi = max(self.start, other.start), min(self.stop, other.stop)
        if lo > hi:
            raise SupportError((self.start, self.stop), other.support, "second summand")
        return SampledSequence(lo, self.segment(lo, hi) + other.segment(lo, hi),
                               self.sup_norm_bound + other.sup_norm_bound)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def to_csv(self, path):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "re", "im"])
        for k, v in zip(self.indices, self.values):
            writer.writerow([int(k), "%.17g" % v.real, "%.17g" % v.imag])
        atomic_write_text(path, buf.getvalue())

    def to_dict(self):
        return {"start": self.start, "values": [[v.real, v.imag] for v in self.values],
                "sup_norm_bound": self.sup_norm_bound}

    @classmethod
    def from_dict(cls, d):
        v = np.asarray(d["values"], dtype=float).reshape(-1, 2)
        return cls(int(d["start"]), v[:, 0] + 1j * v[:, 1], float(d["sup_norm_bound"]))

    @classmethod
    def from_csv(cls, path, bound=None):
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        if not rows:
            raise ValueError(f"{path}: no samples")
        idx = np.array([int(r["index"]) for r in rows])
        if np.any(np.diff(idx) != 1):
            raise ValueError(f"{path}: indices must be consecutive")
        vals = np.array([float(r["re"]) + 1j * float(r["im"]) for r in rows])
        return cls.from_values(int(idx[0]), vals, bound)


# -- substitutions ------------------------------------------------------------------

def incidence_matrix(rules, alphabet):
    pos = {a: i for i, a in enumerate(alphabet)}
    m = np.zeros((len(alphabet), len(alphabet)), dtype=np.int64)
    for j, a in enumerate(alphabet):
        for c in rules[a]:
            m[pos[c], j] += 1
    return m


def is_primitive(rules):
    alphabet = sorted(rules)
    m = (incidence_matrix(rules, alphabet) > 0).astype(np.int64)
    k = len(alphabet)
    power = np.eye(k, dtype=np.int64)
    # Wielandt: a primitive k x k matrix has a positive power of order <= (k-1)^2 + 1
    for _ in range((k - 1) ** 2 + 1):
        power = np.minimum(power @ m, 1)
        if np.all(power > 0):
            return True
    return False


def perron_frequencies(rules):
    """Letter frequencies from the Perron eigenvector of the incidence matrix."""
    alphabet = sorted(rules)
    m = incidence_matrix(rules, alphabet).astype(float)
    vals, vecs = np.linalg.eig(m)
    v = np.abs(np.real(vecs[:, np.argmax(np.real(vals))]))
    return dict(zip(alphabet, v / v.sum()))


def _substitute_once(word, images, lengths):
    lens = lengths[word]
    offsets = np.concatenate(([0], np.cumsum(lens)[:-1]))
    out = np.empty(int(lens.sum()), dtype=np.int8)
    for j in range(images.shape[1]):
        sel = lens > j
        out[offsets[sel] + j] = images[word[sel], j]
    return out


def _power_with(images, lengths, letter, side):
    """Smallest p >= 1 with sigma^p(letter) starting (side='right') or ending with letter."""
    word = np.array([letter], dtype=np.int8)
    for p in range(1, images.shape[0] + 2):
        word = _substitute_once(word, images, lengths)
        if (word[0] if side == "right" else word[-1]) == letter:
            return p
    raise ValueError(f"letter index {letter} does not seed a one-sided fixed point")


def _fixed_point(images, lengths, letter, n, side):
    """First ``n`` letters of the one-sided fixed point of sigma^p seeded by ``letter``.

    For side='left' the letters are returned in reading order away from the
    seam, i.e. reversed.
    """
    p = _power_with(images, lengths, letter, side)
    word = np.array([letter], dtype=np.int8)
    # sigma^p(word) extends word on the seeded side, so iteration converges
    while word.size < n:
        nxt = word
        for _ in range(p):
            nxt = _substitute_once(nxt, images, lengths)
        if nxt.size == word.size:
            raise ValueError("substitution does not grow")
        word = nxt
    return word[:n] if side == "right" else word[::-1][:n]


def substitution_letters(rules, lo, hi, right_seed, left_seed=None):
    """Letters of the bi-infinite word on ``[lo, hi]`` as alphabet indices.

    Position 0 carries ``right_seed`` and the right half is its one-sided
    fixed point. The left half is the one-sided fixed point ending in
    ``left_seed`` placed at -1, or, when ``left_seed`` is None, the mirror
    image ``x(-n-1) = x(n)``.
    """
    alphabet = sorted(rules)
    pos = {a: i for i, a in enumerate(alphabet)}
    width = max(len(rules[a]) for a in alphabet)
    images = np.zeros((len(alphabet), width), dtype=np.int8)
    lengths = np.zeros(len(alphabet), dtype=np.int64)
    for a in alphabet:
        images[pos[a], :len(rules[a])] = [pos[c] for c in rules[a]]
        lengths[pos[a]] = len(rules[a])

    out = np.empty(hi - lo + 1, dtype=np.int8)
    if hi >= 0:
        r_lo = max(lo, 0)
        right = _fixed_point(images, lengths, pos[right_seed], hi + 1, "right")
        out[r_lo - lo:] = right[r_lo:hi + 1]
    if lo < 0:
        l_hi = min(hi, -1)
        need = -lo
        if left_seed is None:
            left = _fixed_point(images, lengths, pos[right_seed], need, "right")
        else:
            left = _fixed_point(images, lengths, pos[left_seed], need, "left")
        # left[m] is the letter at position -m-1
        ks = np.arange(lo, l_hi + 1)
        out[:l_hi - lo + 1] = left[-ks - 1]
    return out, alphabet


# -- specs ------------------------------------------------------------------------

@dataclass(frozen=True)
class SequenceSpec:
    """Declarative description of a generated sequence.

    ``params`` holds the generator arguments; ``spectral_type`` optionally
    declares the analytic type of the diffraction (``pp``, ``ac``, ``sc`` or
    ``mixed``). It is a declaration, never inferred from data.
    """

    generator: str
    params: dict = field(default_factory=dict)
    spectral_type: str = None
    label: str = ""

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise ValueError(f"unknown generator {self.generator!r}")
        if self.spectral_type is not None and self.spectral_type not in SPECTRAL_TYPES:
            raise ValueError(f"unknown spectral type {self.spectral_type!r}")
        if self.generator == "substitution":
            rules = self.params["rules"]
            for a, img in rules.items():
                if not img or any(c not in rules for c in img):
                    raise ValueError(f"rule {a} -> {img!r} must be a nonempty word over the alphabet")
            if not is_primitive(rules):
                raise ValueError("substitution is not primitive")
        if self.generator == "bernoulli" and not 0 <= float(self.params["p"]) <= 1:
            raise ValueError("p must lie in [0, 1]")
        if self.generator == "periodic" and not self.params.get("pattern"):
            raise ValueError("periodic pattern must be nonempty")
        if not self.label:
            object.__setattr__(self, "label", self.generator)

    @property
    def sup_norm_bound(self):
        g, p = self.generator, self.params
        if g == "substitution":
            return max(abs(complex(w)) for w in p["weights"].values())
        if g == "periodic":
            return max(abs(complex(v)) for v in p["pattern"])
        if g == "trig_polynomial":
            return sum(abs(complex(a)) for a, _ in p["terms"])
        if g == "custom":
            return float(np.max(np.abs(np.asarray(p["samples"], dtype=complex))))
        return 1.0

    @property
    def is_random(self):
        return self.generator == "bernoulli" and 0 < float(self.params["p"]) < 1

    @property
    def declared_type(self):
        if self.spectral_type is not None:
            return self.spectral_type
        g = self.generator
        if g in ("periodic", "character", "trig_polynomial", "sign", "constant_one", "dirac_comb"):
            return "pp"
        if g == "bernoulli":
            p = float(self.params["p"])
            if p in (0.0, 1.0):
                return "pp"
            return "ac" if p == 0.5 else "mixed"
        return None

    def declared_atoms(self):
        """Finite atom set of the diffraction when it is known in closed form, else None."""
        g, p = self.generator, self.params
        if g in ("sign", "constant_one", "dirac_comb"):
            return {Fraction(0)}
        if g == "character":
            return {parse_theta(p["theta"])}
        if g == "trig_polynomial":
            return {parse_theta(t) for a, t in p["terms"] if abs(complex(a)) > 0}
        if g == "periodic":
            pattern = np.asarray(p["pattern"], dtype=complex)
            q = len(pattern)
            coeffs = np.fft.fft(pattern) / q
            return {Fraction(k, q) for k in range(q) if abs(coeffs[k]) > 1e-12}
        return None

    def generate(self, lo, hi):
        return generate(self, (lo, hi))

    def to_dict(self):
        params = dict(self.params)
        if "theta" in params:
            params["theta"] = theta_to_json(params["theta"])
        if "terms" in params:
            params["terms"] = [[_cjson(a), theta_to_json(t)] for a, t in params["terms"]]
        if "pattern" in params:
            params["pattern"] = [_cjson(v) for v in params["pattern"]]
        if "weights" in params:
            params["weights"] = {k: _cjson(v) for k, v in params["weights"].items()}
        if "samples" in params:
            params["samples"] = [_cjson(v) for v in params["samples"]]
        d = {"generator": self.generator, "params": params, "label": self.label}
        if self.spectral_type is not None:
            d["spectral_type"] = self.spectral_type
        return d

    @classmethod
    def from_dict(cls, d):
        params = dict(d.get("params", {}))
        if "terms" in params:
            params["terms"] = [(_cparse(a), t) for a, t in params["terms"]]
        if "pattern" in params:
            params["pattern"] = [_cparse(v) for v in params["pattern"]]
        if "weights" in params:
            params["weights"] = {k: _cparse(v) for k, v in params["weights"].items()}
        if "samples" in params:
            params["samples"] = [_cparse(v) for v in params["samples"]]
        return cls(d["generator"], params, d.get("spectral_type"), d.get("label", ""))


def _cjson(v):
    v = complex(v)
    return v.real if v.imag == 0 else [v.real, v.imag]


def _cparse(v):
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


def _zigzag(b):
    return 2 * b if b >= 0 else -2 * b - 1


def _bernoulli_uniforms(seed, lo, hi):
    """Uniform variates indexed by integer position, independent of the window."""
    first, last = lo // _BERNOULLI_BLOCK, hi // _BERNOULLI_BLOCK
    chunks = []
    for b in range(first, last + 1):
        ss = np.random.SeedSequence(int(seed), spawn_key=(_zigzag(b),))
        chunks.append(np.random.Generator(np.random.PCG64(ss)).random(_BERNOULLI_BLOCK))
    u = np.concatenate(chunks)
    off = lo - first * _BERNOULLI_BLOCK
    return u[off:off + hi - lo + 1]


def generate(spec, window):
    """Sample ``spec`` on the integer interval ``window = (lo, hi)``."""
    lo, hi = int(window[0]), int(window[1])
    if lo > hi:
        raise ValueError(f"empty window [{lo}, {hi}]")
    k = np.arange(lo, hi + 1, dtype=np.int64)
    g, p = spec.generator, spec.params

    if g == "substitution":
        letters, alphabet = substitution_letters(
            p["rules"], lo, hi, p.get("right_seed", sorted(p["rules"])[0]), p.get("left_seed"))
        table = np.array([complex(p["weights"][a]) for a in alphabet])
        vals = table[letters]
    elif g == "bernoulli":
        u = _bernoulli_uniforms(p.get("seed", 0), lo, hi)
        vals = np.where(u < float(p["p"]), 1.0, -1.0).astype(complex)
    elif g == "periodic":
        pattern = np.asarray(p["pattern"], dtype=complex)
        vals = pattern[np.mod(k, pattern.size)]
    elif g == "character":
        vals = phases(p["theta"], k)
    elif g == "trig_polynomial":
        vals = np.zeros(k.size, dtype=complex)
        for amp, theta in p["terms"]:
            vals += complex(amp) * phases(theta, k)
    elif g == "sign":
        vals = np.sign(k).astype(complex)
    elif g in ("constant_one", "dirac_comb"):
        vals = np.ones(k.size, dtype=complex)
    else:  # custom
        samples = np.asarray(p["samples"], dtype=complex)
        start = int(p.get("start", 0))
        stop = start + samples.size - 1
        if lo < start or hi > stop:
            raise SupportError((lo, hi), (start, stop), f"custom sequence {spec.label!r}")
        vals = samples[lo - start:hi - start + 1]
    return SampledSequence(lo, vals, spec.sup_norm_bound)


# -- named exemplars ----------------------------------------------------------------

FIBONACCI_RULES = {"a": "ab", "b": "a"}
THUE_MORSE_RULES = {"a": "ab", "b": "ba"}


def fibonacci_spec():
    """Fibonacci substitution with weights +1/-1; pure point diffraction.

    The bi-infinite word is the two-sided fixed point with legal seed b|a
    (position -1 carries b, position 0 carries a).
    """
    return SequenceSpec("substitution",
                        {"rules": FIBONACCI_RULES, "weights": {"a": 1, "b": -1},
                         "right_seed": "a", "left_seed": "b"},
                        spectral_type="pp", label="fibonacci_pm1")


def thue_morse_spec():
    """Thue-Morse with weights +1/-1, mirrored to the left: t(-n-1) = t(n)."""
    return SequenceSpec("substitution",
                        {"rules": THUE_MORSE_RULES, "weights": {"a": 1, "b": -1},
                         "right_seed": "a", "left_seed": None},
                        spectral_type="sc", label="thue_morse_pm1")


def bernoulli_spec(p=0.5, seed=0):
    return SequenceSpec("bernoulli", {"p": p, "seed": int(seed)}, label=f"bernoulli_pm1(p={p},seed={seed})")


def sign_spec():
    return SequenceSpec("sign", label="sign")


def dirac_comb_spec():
    return SequenceSpec("dirac_comb", label="dirac_comb")


def constant_one_spec():
    return SequenceSpec("constant_one", label="constant_one")


def character_spec(theta):
    return SequenceSpec("character", {"theta": parse_theta(theta)},
                        label=f"character({theta_to_json(theta)})")


def periodic_spec(pattern):
    return SequenceSpec("periodic", {"pattern": [complex(v) for v in pattern]}, label="periodic")


def trig_polynomial_spec(terms):
    return SequenceSpec("trig_polynomial",
                        {"terms": [(complex(a), parse_theta(t)) for a, t in terms]},
                        label="trig_polynomial")


def custom_spec(samples, start=0, spectral_type=None):
    return SequenceSpec("custom", {"samples": [complex(v) for v in samples], "start": int(start)},
                        spectral_type=spectral_type, label="custom")


def fibonacci_pm1(window):
    return generate(fibonacci_spec(), window)


def thue_morse_pm1(window):
    return generate(thue_morse_spec(), window)


def bernoulli_pm1(p, seed, window):
    return generate(bernoulli_spec(p, seed), window)

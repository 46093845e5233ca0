"""Reflected Eberlein convolutions, diffraction and spectral measures on the integers."""

from .errors import ExhaustedError, NotPositiveDefiniteError, SupportError
from .windows import (WindowFamily, SubsequenceSelector, boundary_ratio,
                      extract_convergent_subsequence, make_prefix, make_symmetric,
                      parse_window_spec)
from .sequences import (SampledSequence, SequenceSpec, bernoulli_pm1, fibonacci_pm1,
                        generate, thue_morse_pm1)
from .correlation import Autocorrelation, autocorrelation, mean, reflected_eberlein
from .spectral import bragg_scan, fourier_bohr, herglotz_invert, wiener_mean
from .hilbert import TranslateFamily, gram, spectral_measure_of_vector
from .experiments import EXPERIMENTS, ExperimentReport, run_experiment

__version__ = "0.1.0"

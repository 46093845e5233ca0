"""Command-line interface: ``eberlein <command> ...``.

Exit codes: 0 success or Pass, 2 Fail, 3 Inconclusive, 64 usage error,
65 insufficient sequence support (the missing range is printed).
"""

import argparse
import csv
import io
import os
import sys

import numpy as np

from .correlation import Autocorrelation, autocorrelation, reflected_eberlein
from .errors import NotPositiveDefiniteError, SupportError
from .experiments import EXPERIMENTS, ExperimentReport, run_experiment
from .hilbert import TranslateFamily, gram
from .io import atomic_write_text, read_json, write_json
from .sequences import (
    SampledSequence, SequenceSpec, bernoulli_spec, character_spec, constant_one_spec,
    dirac_comb_spec, fibonacci_spec, parse_theta, sign_spec, thue_morse_spec,
)
from .spectral import bragg_scan, default_candidates, fourier_bohr, herglotz_invert
from .windows import parse_window_spec

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE = 0, 2, 3
EXIT_USAGE, EXIT_SUPPORT = 64, 65

PRESETS = {
    "fibonacci": lambda a: fibonacci_spec(),
    "thue-morse": lambda a: thue_morse_spec(),
    "bernoulli": lambda a: bernoulli_spec(a.p, a.seed),
    "sign": lambda a: sign_spec(),
    "dirac": lambda a: dirac_comb_spec(),
    "one": lambda a: constant_one_spec(),
    "character": lambda a: character_spec(a.theta),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- inputs --------------------------------------------------------------------------

def _existing(path):
    if not os.path.exists(path):
        raise UsageError(f"no such file: {path}")
    return path


class SequenceSource:
    """A sequence read from disk: either a spec (sampled on demand) or fixed samples."""

    def __init__(self, path):
        _existing(path)
        self.path = path
        if path.endswith(".csv"):
            self.spec, self.samples = None, SampledSequence.from_csv(path)
            return
        d = read_json(path)
        if "generator" in d:
            self.spec, self.samples = SequenceSpec.from_dict(d), None
        elif "values" in d:
            self.spec, self.samples = None, SampledSequence.from_dict(d)
        else:
            raise UsageError(f"{path}: neither a sequence spec nor sampled values")

    def on(self, lo, hi):
        if self.spec is not None:
            return self.spec.generate(lo, hi)
        self.samples.require(lo, hi, self.path)
        return self.samples


def _lags(text):
    try:
        if ".." in text:
            a, b = text.split("..")
            return np.arange(int(a), int(b) + 1)
        return np.array([int(x) for x in text.split(",")])
    except ValueError:
        raise UsageError(f"bad lag range {text!r}; expected A..B or a comma list") from None


def _windows(text):
    try:
        return parse_window_spec(text)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _check_support_rule(w, L):
    # RunConfig rule: the longest window is at least 4 L
    if w.max_length < 4 * L:
        raise UsageError(f"window length {w.max_length} is shorter than 4 L = {4 * L}")


def _range(text):
    try:
        a, b = text.split(":")
        return int(a), int(b)
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected LO:HI") from None


# -- commands ------------------------------------------------------------------------

def cmd_gen(a):
    spec = SequenceSpec.from_dict(read_json(_existing(a.spec))) if a.spec else PRESETS[a.preset](a)
    if a.range is None:
        if a.out.endswith(".csv"):
            raise UsageError("a CSV output needs --range")
        write_json(a.out, spec)
        return EXIT_OK
    lo, hi = _range(a.range)
    seq = spec.generate(lo, hi)
    if a.out.endswith(".csv"):
        seq.to_csv(a.out)
    else:
        write_json(a.out, seq)
    return EXIT_OK


def cmd_corr(a):
    w = _windows(a.windows)
    lags = _lags(a.lags)
    lo, hi = w.span
    f = SequenceSource(a.f).on(lo, hi)
    g = SequenceSource(a.g).on(lo - int(lags.max()), hi - int(lags.min()))
    est = reflected_eberlein(f, g, w, lags, method=a.method)
    write_json(a.out, est)
    if a.csv:
        _write_csv(a.csv, ["lag", "re", "im", "abs"],
                   [[int(t), z.real, z.imag, abs(z)] for t, z in zip(est.lags, est.final)])
    return EXIT_OK


def cmd_autocorr(a):
    w = _windows(a.windows)
    _check_support_rule(w, a.L)
    lo, hi = w.span
    f = SequenceSource(a.seq).on(lo - a.L, hi + a.L)
    gamma = autocorrelation(f, w, a.L, method=a.method)
    write_json(a.out, gamma)
    if a.csv:
        _write_csv(a.csv, ["lag", "re", "im"],
                   [[int(t), z.real, z.imag] for t, z in zip(gamma.lags, gamma.gamma)])
    return EXIT_OK


def cmd_fb(a):
    w = _windows(a.windows)
    f = SequenceSource(a.seq).on(*w.span)
    thetas = [parse_theta(t) for t in a.theta]
    out = {"window_label": w.label,
           "coefficients": [fourier_bohr(f, t, w).to_dict() for t in thetas]}
    if a.bragg:
        out["bragg"] = [c.to_dict() for c in bragg_scan(f, w, thetas)]
    write_json(a.out, out)
    return EXIT_OK


def _atoms_arg(text):
    if text == "auto":
        return default_candidates()
    try:
        return [parse_theta(t) for t in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad atom list {text!r}") from None


def cmd_spectrum(a):
    gamma = Autocorrelation.from_dict(read_json(_existing(a.gamma)))
    est = herglotz_invert(gamma, grid_size=a.grid, atom_candidates=_atoms_arg(a.atoms),
                          threshold=a.threshold)
    write_json(a.out, est)
    if a.csv_prefix:
        _write_csv(a.csv_prefix + "_density.csv", ["theta", "density"],
                   [[float(x), float(h)] for x, h in zip(est.grid, est.ac_density)])
        _write_csv(a.csv_prefix + "_atoms.csv", ["theta", "mass"],
                   [[float(t), m] for t, m in est.atoms])
    return EXIT_OK


def _family(path, lo, hi):
    d = read_json(_existing(path))
    shifts = [int(s) for s in d.get("shifts", [0])]
    m = max(abs(s) for s in shifts)
    seqs = []
    for item in d["sequences"]:
        if isinstance(item, str):
            src = SequenceSource(os.path.join(os.path.dirname(path), item))
            seqs.append(src.on(lo - m, hi + m))
        else:
            seqs.append(SequenceSpec.from_dict(item).generate(lo - m, hi + m))
    return TranslateFamily(seqs, shifts, tuple(d.get("labels", ())))


def cmd_gram(a):
    w = _windows(a.windows)
    fam = _family(a.family, *w.span)
    G = gram(fam, w)
    if a.out:
        write_json(a.out, G)
    else:
        sys.stdout.write(np.array2string(G.entries, precision=6) + "\n")
    return EXIT_OK


def cmd_verify(a):
    if a.list or not a.experiment:
        for name in sorted(EXPERIMENTS):
            print(name)
        return EXIT_OK
    if a.experiment not in EXPERIMENTS:
        raise UsageError(f"unknown experiment {a.experiment!r}; try 'eberlein verify --list'")
    config = read_json(_existing(a.config)) if a.config else {}
    report = run_experiment(a.experiment, config)
    if a.out:
        write_json(a.out, report)
    print(report.render())
    return report.exit_code


def _write_csv(path, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["%.17g" % x if isinstance(x, float) else x for x in row])
    atomic_write_text(path, buf.getvalue())


def cmd_report(a):
    report = ExperimentReport.from_dict(read_json(_existing(a.report)))
    text = report.render()
    print(text)
    if a.csv_dir:
        os.makedirs(a.csv_dir, exist_ok=True)
        rows = [[k, float(report.observed[k]), float(t)] for k, t in report.tolerances.items()]
        _write_csv(os.path.join(a.csv_dir, "checks.csv"), ["quantity", "observed", "tolerance"],
                   rows)
        for key, val in report.observed.items():
            arr = np.asarray(val) if isinstance(val, list) else None
            if arr is not None and arr.ndim == 1 and arr.dtype.kind in "if":
                _write_csv(os.path.join(a.csv_dir, f"{key}.csv"), ["index", key],
                           [[i, float(x)] for i, x in enumerate(arr)])
        atomic_write_text(os.path.join(a.csv_dir, "report.txt"), text + "\n")
    return report.exit_code


# -- parser --------------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="eberlein", description="Reflected Eberlein convolutions, diffraction "
                "and spectral measures of sequences on the integers.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    g = sub.add_parser("gen", help="write a sequence spec or sampled values")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=sorted(PRESETS))
    src.add_argument("--spec", help="sequence spec JSON")
    g.add_argument("--p", type=float, default=0.5, help="Bernoulli probability of +1")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--theta", default="0", help="character frequency, e.g. 1/3")
    g.add_argument("--range", help="LO:HI; without it the spec itself is written")
    g.add_argument("--out", required=True, help=".json or .csv")
    g.set_defaults(fn=cmd_gen)

    c = sub.add_parser("corr", help="reflected Eberlein convolution of two sequences")
    c.add_argument("--f", required=True)
    c.add_argument("--g", required=True)
    c.add_argument("--windows", required=True, help="prefix:N[:count] or symmetric:N[:count]")
    c.add_argument("--lags", default="-32..32")
    c.add_argument("--method", choices=["auto", "direct", "fft"], default="auto")
    c.add_argument("--out", required=True)
    c.add_argument("--csv", help="also write lag,re,im,abs of the final window")
    c.set_defaults(fn=cmd_corr)

    ac = sub.add_parser("autocorr", help="autocorrelation gamma(t), |t| <= L")
    ac.add_argument("--seq", required=True)
    ac.add_argument("--windows", required=True)
    ac.add_argument("--L", type=int, required=True)
    ac.add_argument("--method", choices=["auto", "direct", "fft"], default="auto")
    ac.add_argument("--out", required=True)
    ac.add_argument("--csv")
    ac.set_defaults(fn=cmd_autocorr)

    fb = sub.add_parser("fb", help="Fourier-Bohr coefficients")
    fb.add_argument("--seq", required=True)
    fb.add_argument("--windows", required=True)
    fb.add_argument("--theta", action="append", required=True)
    fb.add_argument("--bragg", action="store_true", help="also classify intensity scaling")
    fb.add_argument("--out", required=True)
    fb.set_defaults(fn=cmd_fb)

    sp = sub.add_parser("spectrum", help="Herglotz inversion of an autocorrelation")
    sp.add_argument("--gamma", required=True)
    sp.add_argument("--grid", type=int, default=4096)
    sp.add_argument("--atoms", default="auto", help="'auto' or a comma list such as 0,1/3")
    sp.add_argument("--threshold", type=float)
    sp.add_argument("--out", required=True)
    sp.add_argument("--csv-prefix", help="write PREFIX_density.csv and PREFIX_atoms.csv")
    sp.set_defaults(fn=cmd_spectrum)

    gr = sub.add_parser("gram", help="Gram matrix of a translate family")
    gr.add_argument("--family", required=True)
    gr.add_argument("--windows", required=True)
    gr.add_argument("--out")
    gr.set_defaults(fn=cmd_gram)

    v = sub.add_parser("verify", help="run a named experiment")
    v.add_argument("experiment", nargs="?")
    v.add_argument("--config", help="JSON of overrides (N, L, tol, seed, windows, ...)")
    v.add_argument("--out")
    v.add_argument("--list", action="store_true")
    v.set_defaults(fn=cmd_verify)

    r = sub.add_parser("report", help="render an experiment report")
    r.add_argument("report")
    r.add_argument("--csv-dir", help="directory for gnuplot-ready CSV files")
    r.set_defaults(fn=cmd_report)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "fn", None):
            raise UsageError(parser.format_usage().strip())
        return args.fn(args)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except SupportError as e:
        print(f"insufficient support: {e}", file=sys.stderr)
        return EXIT_SUPPORT
    except NotPositiveDefiniteError as e:
        print(str(e), file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

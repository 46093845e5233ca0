"""Serialization helpers: fixed-precision JSON, atomic writes, sample CSVs."""

import json
import math
import os
import tempfile
from fractions import Fraction

import numpy as np


def _fmt_float(x):
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        # JSON has no literal for these; they are written as strings such as "nan"
        return json.dumps(repr(x))
    s = "%.17g" % x
    if "." not in s and "e" not in s and "n" not in s:
        s += ".0"
    return s


def dumps(obj, indent=None, _level=0):
    """Serialize ``obj`` to JSON with every float written to 17 significant digits.

    Complex numbers become ``[re, im]`` pairs, numpy arrays become lists and
    fractions become strings like ``"1/3"``.
    """
    pad = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    sep = ", " if indent is None else ","

    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (np.generic,)):
        obj = obj.item()
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, complex):
        return "[" + _fmt_float(obj.real) + ", " + _fmt_float(obj.imag) + "]"
    if isinstance(obj, Fraction):
        return json.dumps(f"{obj.numerator}/{obj.denominator}")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [json.dumps(str(k)) + ": " + dumps(v, indent, _level + 1) for k, v in obj.items()]
        return "{" + pad + (sep + pad).join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        # short numeric rows stay on one line
        flat = all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj)
        if flat or indent is None:
            return "[" + ", ".join(dumps(v, None) for v in obj) + "]"
        items = [dumps(v, indent, _level + 1) for v in obj]
        return "[" + pad + (sep + pad).join(items) + end + "]"
    if hasattr(obj, "to_dict"):
        return dumps(obj.to_dict(), indent, _level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def complex_array(pairs):
    """Inverse of the ``[re, im]`` encoding used by :func:`dumps`."""
    arr = np.asarray(pairs, dtype=float)
    if arr.size == 0:
        return np.zeros(0, dtype=complex)
    return arr[..., 0] + 1j * arr[..., 1]


def complex_pairs(values):
    values = np.asarray(values, dtype=complex)
    return np.stack([values.real, values.imag], axis=-1).tolist()


def atomic_write_text(path, text):
    """Write ``text`` to ``path`` via a temporary file and an atomic rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj, indent=1):
    atomic_write_text(path, dumps(obj, indent=indent) + "\n")


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)

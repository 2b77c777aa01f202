"""Deterministic text output: float formatting and atomic file writes."""

from __future__ import annotations

import json
import math
import os
import re
import tempfile
from pathlib import Path

import numpy as np

from asymphoton.distribution import is_unbounded


def fmt(value) -> str:
    """17 significant digits; ``inf`` for unbounded, ``nan`` for undefined."""
    if value is None:
        return "nan"
    if is_unbounded(value):
        return "inf"
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return "%.17g" % value


def json_value(value):
    """JSON-safe scalar: unbounded and non-finite values become strings."""
    if value is None:
        return None
    if is_unbounded(value):
        return "inf"
    if isinstance(value, float) and not math.isfinite(value):
        return fmt(value)
    return value


def atomic_write_text(path, text: str) -> None:
    """Write to a temporary file in the target directory, then rename over the target."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent if str(path.parent) else ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    if isinstance(rows, np.ndarray) and rows.dtype.kind == "f":
        # fast path; %g already spells non-finite values as inf / nan
        row_fmt = ",".join(["%.17g"] * rows.shape[1])
        lines.extend(map(row_fmt.__mod__, map(tuple, rows.tolist())))
    else:
        lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


_FLOAT_MARK = "\x00f:"
_FLOAT_TOKEN = re.compile(r'"\\u0000f:([^"]*)"')


def _mark_floats(obj):
    # json.dumps always prints floats with repr; swap them for marked strings
    # first so the final text can carry 17 significant digits instead
    if isinstance(obj, dict):
        return {k: _mark_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_mark_floats(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not math.isfinite(value):
            raise ValueError(f"non-finite float {value!r} must be converted with json_value first")
        text = "%.17g" % value
        if not any(c in text for c in ".en"):
            text += ".0"
        return _FLOAT_MARK + text
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def json_text(obj) -> str:
    """Indented JSON with every float at 17 significant digits."""
    text = json.dumps(_mark_floats(obj), indent=2, allow_nan=False)
    return _FLOAT_TOKEN.sub(lambda m: m.group(1), text) + "\n"

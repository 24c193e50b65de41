"""Path file format: `# key=value` header lines, then t<TAB>value rows.

Values are written with 17 significant digits, which round-trips IEEE
doubles exactly.
"""

import math
import os
import tempfile

import numpy as np

from .errors import ParseError
from .increments import SampledPath


def _atomic_write(filename, text):
    d = os.path.dirname(os.path.abspath(filename))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, filename)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_params(params):
    return ",".join(f"{k}={v}" for k, v in params.items())


def write_path(path, filename, kind="data", seed=None, params=None):
    """Write a SampledPath with its provenance header."""
    lines = [f"# n={path.n}", f"# kind={kind}"]
    if seed is not None:
        lines.append(f"# seed={seed}")
    if params:
        lines.append(f"# params={format_params(params)}")
    t = path.times()
    for tt, v in zip(t, path.values):
        lines.append(f"{tt:.17g}\t{v:.17g}")
    _atomic_write(filename, "\n".join(lines) + "\n")


def read_path(filename):
    """Read a path file; returns (SampledPath, header dict).

    Malformed or non-finite rows raise ParseError carrying the 1-based
    line number.
    """
    meta = {}
    values = []
    with open(filename) as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    k, _, v = body.partition("=")
                    meta[k.strip()] = v.strip()
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError(f"expected 't<TAB>value', got {line!r}", line=lineno)
            try:
                t = float(parts[0])
                v = float(parts[1])
            except ValueError:
                raise ParseError(f"non-numeric row {line!r}", line=lineno) from None
            if not (math.isfinite(t) and math.isfinite(v)):
                raise ParseError(f"non-finite sample {line!r}", line=lineno)
            values.append(v)
    if len(values) < 2:
        raise ParseError("file holds fewer than 2 samples", line=None)
    if "n" in meta:
        try:
            n = int(meta["n"])
        except ValueError:
            raise ParseError(f"header n={meta['n']!r} is not an integer", line=None) from None
        if n + 1 != len(values):
            raise ParseError(f"header says n={n} but file has {len(values)} rows", line=None)
    return SampledPath(np.asarray(values)), meta

"""Plain-text CSV persistence for square complex matrices.

Layout::

    # geometry: <free text>            (optional line)
    # <key>=<value>                    (optional metadata lines)
    N,k,weight
    60,1.0,0.10471975511965977
    l,m,re,im
    1,1,<re>,<im>
    ...

Indices are 1-based. Floats are written with ``repr`` which is the shortest
string that parses back to the same double, so a write/read cycle is
bit-exact.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from crackmono.errors import InvalidArgumentError


def write_matrix_csv(path, values, k: float, weight: float, geometry: str | None = None,
                     meta: dict | None = None) -> Path:
    values = np.asarray(values, dtype=complex)
    n = values.shape[0]
    if values.shape != (n, n):
        raise InvalidArgumentError(f"matrix must be square, got shape {values.shape}")
    lines = []
    if geometry is not None:
        lines.append(f"# geometry: {geometry}")
    for key, val in (meta or {}).items():
        lines.append(f"# {key}={val}")
    lines.append("N,k,weight")
    lines.append(f"{n},{float(k)!r},{float(weight)!r}")
    lines.append("l,m,re,im")
    for l in range(n):
        for m in range(n):
            z = values[l, m]
            lines.append(f"{l + 1},{m + 1},{float(z.real)!r},{float(z.imag)!r}")
    path = Path(path)
    path.write_text("\n".join(lines) + "\n")
    return path


def read_matrix_csv(path):
    """Return ``(values, k, weight, geometry, meta)``."""
    text = Path(path).read_text().splitlines()
    geometry = None
    meta = {}
    pos = 0
    while pos < len(text) and text[pos].startswith("#"):
        body = text[pos][1:].strip()
        if body.startswith("geometry:"):
            geometry = body[len("geometry:"):].strip()
        elif "=" in body:
            key, val = body.split("=", 1)
            meta[key.strip()] = val.strip()
        pos += 1
    try:
        if text[pos].strip() != "N,k,weight" or text[pos + 2].strip() != "l,m,re,im":
            raise InvalidArgumentError(f"{path}: malformed matrix CSV header")
        n_str, k_str, w_str = text[pos + 1].split(",")
        n = int(n_str)
        k = float(k_str)
        weight = float(w_str)
        values = np.full((n, n), np.nan + 0j)
        rows = text[pos + 3:]
        for row in rows:
            if not row.strip():
                continue
            l, m, re, im = row.split(",")
            values[int(l) - 1, int(m) - 1] = complex(float(re), float(im))
    except (IndexError, ValueError) as exc:
        if isinstance(exc, InvalidArgumentError):
            raise
        raise InvalidArgumentError(f"{path}: malformed matrix CSV ({exc})") from exc
    if np.isnan(values.real).any():
        raise InvalidArgumentError(f"{path}: missing matrix entries")
    return values, k, weight, geometry, meta

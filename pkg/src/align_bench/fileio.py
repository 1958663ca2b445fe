"""Shared file-format helpers: lossless complex serialization, atomic writes.

Complex entries are stored as ``[re, im]`` pairs of decimal strings with 17
significant digits; 17 digits uniquely determine an IEEE binary64, so every
entry round-trips exactly.
"""

from __future__ import annotations

import json
import os
import tempfile

from .errors import FormatError


def complex_to_pair(z: complex) -> list[str]:
    """Encode one complex number as a ``[re, im]`` pair of decimal strings."""
    return [format(z.real, ".17g"), format(z.imag, ".17g")]


def pair_to_complex(pair, where: str) -> complex:
    """Decode a ``[re, im]`` pair; raises :class:`FormatError` on junk."""
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise FormatError(f"{where}: expected a [re, im] pair, got {pair!r}")
    try:
        re, im = float(pair[0]), float(pair[1])
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{where}: non-numeric entry {pair!r}") from exc
    return complex(re, im)


def atomic_write_text(path: str, text: str) -> None:
    """Write ``text`` to ``path`` atomically (temp file + rename)."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_json(path: str) -> dict:
    """Read a JSON document, mapping parse errors to :class:`FormatError`."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: top-level document must be an object")
    return doc


def require_key(doc: dict, key: str, where: str):
    if key not in doc:
        raise FormatError(f"{where}: missing required field {key!r}")
    return doc[key]

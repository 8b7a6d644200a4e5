"""Descriptor files, raw sample files, URIs and atomic writes.

A descriptor is a small JSON object::

    {"kind": "grid", "dim": 2, "half_extent": 8.0, "samples": 256,
     "source": "corpus:gaussian?sigma=1"}

where ``source`` is either a corpus URI, sampled on the described grid, or
``file:<path>`` naming raw little-endian float64 ``(re, im)`` pairs in
row-major order. A relative raw path is taken relative to the descriptor. The
optional key ``domain`` (``"space"`` or ``"frequency"``) says whether raw
values are samples or transform coefficients; it defaults to ``"space"``.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Union

import numpy as np

from . import corpus
from .errors import DomainError, NonFiniteError
from .field import GridSpec, RadialSpectrum, SampledField, Spectrum, dft, idft

__all__ = [
    "atomic_write_bytes",
    "atomic_write_text",
    "read_raw",
    "write_raw",
    "read_descriptor",
    "write_descriptor",
    "save",
    "load",
    "resolve_field",
    "resolve_spectrum",
]

_RAW = np.dtype("<f8")
PathLike = Union[str, os.PathLike]


def atomic_write_bytes(path: PathLike, data: bytes) -> None:
    """Write ``data`` to a temporary file beside ``path`` and rename it into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path: PathLike, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def write_raw(path: PathLike, values: np.ndarray) -> None:
    """Store complex values as interleaved little-endian float64 pairs."""
    arr = np.ascontiguousarray(values, dtype=complex)
    pairs = np.empty(arr.shape + (2,), dtype=_RAW)
    pairs[..., 0] = arr.real
    pairs[..., 1] = arr.imag
    atomic_write_bytes(path, pairs.tobytes())


def read_raw(path: PathLike, shape: tuple) -> np.ndarray:
    data = np.fromfile(path, dtype=_RAW)
    expected = 2 * int(np.prod(shape))
    if data.size != expected:
        raise DomainError(f"{path}: expected {expected} float64 values for shape {shape}, found {data.size}")
    out = (data[0::2] + 1j * data[1::2]).reshape(shape)
    bad = ~np.isfinite(out)
    if bad.any():
        raise NonFiniteError(np.argwhere(bad)[0])
    return out


def _grid_of(desc: dict) -> GridSpec:
    if desc.get("kind") != "grid":
        raise DomainError(f"descriptor kind must be 'grid', got {desc.get('kind')!r}")
    try:
        return GridSpec(int(desc["dim"]), float(desc["half_extent"]), int(desc["samples"]))
    except KeyError as exc:
        raise DomainError(f"descriptor is missing {exc.args[0]!r}") from None


def read_descriptor(path: PathLike) -> dict:
    try:
        desc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: not valid JSON ({exc.msg})") from None
    if not isinstance(desc, dict):
        raise DomainError(f"{path}: descriptor must be a JSON object")
    _grid_of(desc)
    if "source" not in desc:
        raise DomainError(f"{path}: descriptor is missing 'source'")
    return desc


def write_descriptor(path: PathLike, grid: GridSpec, source: str, domain: str | None = None) -> None:
    desc = {"kind": "grid", **grid.to_dict(), "source": source}
    if domain is not None:
        desc["domain"] = domain
    atomic_write_text(path, json.dumps(desc, indent=2) + "\n")


def save(path: PathLike, obj: SampledField | Spectrum, raw_path: PathLike | None = None) -> None:
    """Write a descriptor at ``path`` and the raw values beside it."""
    path = Path(path)
    raw = Path(raw_path) if raw_path is not None else path.with_suffix(".bin")
    if isinstance(obj, SampledField):
        values, domain = obj.values, "space"
    elif isinstance(obj, Spectrum):
        values, domain = obj.coeffs, "frequency"
    else:
        raise DomainError(f"cannot save {type(obj).__name__}")
    write_raw(raw, values)
    rel = os.path.relpath(raw, path.parent) if raw.is_absolute() == path.is_absolute() else str(raw)
    write_descriptor(path, obj.grid, f"file:{rel}", domain)


def load(path: PathLike):
    """Object described by the descriptor at ``path``."""
    desc = read_descriptor(path)
    grid = _grid_of(desc)
    source = str(desc["source"])
    if source.startswith("corpus:"):
        return corpus.from_uri(source, grid)
    if source.startswith("file:"):
        raw = Path(source[len("file:"):])
        if not raw.is_absolute():
            raw = Path(path).parent / raw
        values = read_raw(raw, grid.shape)
        domain = desc.get("domain", "space")
        if domain == "space":
            return SampledField(grid, values)
        if domain == "frequency":
            return Spectrum(grid, values)
        raise DomainError(f"descriptor domain must be 'space' or 'frequency', got {domain!r}")
    raise DomainError(f"unsupported source {source!r}; expected corpus: or file:")


def _resolve(uri: str):
    if uri.startswith("corpus:"):
        return corpus.from_uri(uri)
    if uri.startswith("file:"):
        return load(uri[len("file:"):])
    raise DomainError(f"unsupported URI {uri!r}; expected corpus:<name>?... or file:<descriptor.json>")


def resolve_field(uri: str):
    """A :class:`SampledField` (or gridded :class:`Spectrum`) for moduli computations."""
    obj = _resolve(uri)
    if isinstance(obj, RadialSpectrum):
        raise DomainError(f"{uri} is an analytic spectrum; give a grid with L=...&N=... to sample it")
    return obj


def resolve_spectrum(uri: str):
    """A :class:`Spectrum` or :class:`RadialSpectrum` for tail computations."""
    obj = _resolve(uri)
    return dft(obj) if isinstance(obj, SampledField) else obj


def to_field(obj) -> SampledField:
    return idft(obj) if isinstance(obj, Spectrum) else obj

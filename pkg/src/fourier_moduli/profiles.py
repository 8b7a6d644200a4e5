"""Dyadic evaluation grids and decay profiles with CSV round-tripping."""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import DomainError

__all__ = ["DyadicGrid", "DecayProfile", "as_grid"]

_GRID_RE = re.compile(r"^dyadic:(.+?)\.\.(.+):(\d+)$")


@dataclass(frozen=True)
class DyadicGrid:
    """Geometric sequence from ``start`` to ``end`` with ``count`` points.

    When ``count`` equals ``|log2(end / start)| + 1`` the ratio is exactly 2;
    otherwise the points are equally spaced in ``log``. ``start > end`` gives
    a decreasing sequence.
    """

    start: float
    end: float
    count: int

    def __post_init__(self):
        if not (self.start > 0 and self.end > 0) or not all(map(math.isfinite, (self.start, self.end))):
            raise DomainError(f"grid endpoints must be positive and finite, got {self.start}, {self.end}")
        if int(self.count) != self.count or self.count < 1:
            raise DomainError(f"grid count must be a positive integer, got {self.count}")
        if self.count == 1 and self.start != self.end:
            raise DomainError("a one-point grid needs start == end")
        object.__setattr__(self, "count", int(self.count))

    @classmethod
    def parse(cls, text: str) -> "DyadicGrid":
        """Parse ``dyadic:<start>..<end>:<count>``; endpoints may be written ``2^k``."""
        m = _GRID_RE.match(text.strip())
        if not m:
            raise DomainError(f"bad grid {text!r}; expected dyadic:<start>..<end>:<count>")
        return cls(_number(m.group(1)), _number(m.group(2)), int(m.group(3)))

    @classmethod
    def octaves(cls, start: float, end: float) -> "DyadicGrid":
        """Ratio-2 grid; ``end / start`` must be a power of two."""
        k = math.log2(end / start)
        if abs(k - round(k)) > 1e-9:
            raise DomainError(f"{end} / {start} is not a power of two")
        return cls(start, end, abs(round(k)) + 1)

    @property
    def is_ratio_two(self) -> bool:
        k = math.log2(self.end / self.start)
        return abs(k - round(k)) < 1e-9 and abs(round(k)) + 1 == self.count

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.start])
        if self.is_ratio_two:
            step = 1 if self.end > self.start else -1
            return self.start * 2.0 ** (step * np.arange(self.count))
        return np.geomspace(self.start, self.end, self.count)

    def __str__(self) -> str:
        return f"dyadic:{self.start:g}..{self.end:g}:{self.count}"


def _number(text: str) -> float:
    text = text.strip()
    if text.startswith("2^"):
        return 2.0 ** float(text[2:])
    try:
        return float(text)
    except ValueError:
        raise DomainError(f"not a number: {text!r}") from None


def as_grid(grid) -> np.ndarray:
    """Grid points from a :class:`DyadicGrid`, a grid string or a sequence."""
    if isinstance(grid, DyadicGrid):
        pts = grid.values()
    elif isinstance(grid, str):
        pts = DyadicGrid.parse(grid).values()
    else:
        pts = np.atleast_1d(np.asarray(grid, dtype=float))
    if pts.size == 0:
        raise DomainError("empty grid")
    if not (np.isfinite(pts).all() and (pts > 0).all()):
        raise DomainError("grid points must be positive and finite")
    return pts


@dataclass(frozen=True, eq=False)
class DecayProfile:
    """Samples ``(argument, value)`` of a modulus or tail.

    ``role`` is ``"t"`` for tails, where values decay as ``t`` grows, or
    ``"epsilon"`` for moduli sampled at step sizes ``h = epsilon``. In both
    cases :attr:`t` gives the decay variable, ``1 / epsilon`` for moduli.
    """

    arguments: np.ndarray
    values: np.ndarray
    role: str = "t"
    notes: tuple = field(default=())

    def __post_init__(self):
        if self.role not in ("t", "epsilon"):
            raise DomainError(f"role must be 't' or 'epsilon', got {self.role!r}")
        a = np.array(self.arguments, dtype=float)
        v = np.array(self.values, dtype=float)
        if a.shape != v.shape or a.ndim != 1:
            raise DomainError("arguments and values must be 1-D arrays of equal length")
        if a.size == 0:
            raise DomainError("empty profile")
        if not (np.isfinite(a).all() and np.isfinite(v).all()):
            raise DomainError("profile contains non-finite entries")
        if (a <= 0).any():
            raise DomainError("profile arguments must be positive")
        if (np.diff(a) <= 0).any():
            raise DomainError("profile arguments must be strictly increasing")
        if (v < 0).any():
            raise DomainError("profile values must be nonnegative")
        a.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "arguments", a)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "notes", tuple(self.notes))

    @classmethod
    def from_pairs(cls, arguments: Iterable[float], values: Iterable[float], role: str = "t", notes=()):
        """Build a profile from unsorted pairs."""
        a = np.asarray(list(arguments), dtype=float)
        v = np.asarray(list(values), dtype=float)
        order = np.argsort(a, kind="stable")
        return cls(a[order], v[order], role, notes)

    def __len__(self) -> int:
        return self.arguments.size

    @property
    def t(self) -> np.ndarray:
        """Decay variable: ``t`` itself, or ``1 / epsilon``."""
        return self.arguments if self.role == "t" else 1.0 / self.arguments

    def scaled(self, c: float) -> "DecayProfile":
        return DecayProfile(self.arguments, c * self.values, self.role, self.notes)

    def power(self, k: float) -> "DecayProfile":
        return DecayProfile(self.arguments, self.values**k, self.role, self.notes)

    def to_csv(self) -> str:
        head = "t" if self.role == "t" else "h"
        buf = io.StringIO()
        buf.write(f"{head},value\n")
        for a, v in zip(self.arguments, self.values):
            buf.write(f"{a:.17g},{v:.17g}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "DecayProfile":
        """Read ``t,value`` (tail) or ``h,value`` (modulus) CSV text."""
        rows = list(csv.reader(io.StringIO(text)))
        if not rows:
            raise DomainError("empty profile file")
        head = [c.strip() for c in rows[0]]
        if len(head) < 2 or head[1] != "value" or head[0] not in ("t", "h", "epsilon"):
            raise DomainError(f"profile header must be 't,value' or 'h,value', got {','.join(head)!r}")
        role = "t" if head[0] == "t" else "epsilon"
        body = [r for r in rows[1:] if r and any(c.strip() for c in r)]
        try:
            a = [float(r[0]) for r in body]
            v = [float(r[1]) for r in body]
        except (ValueError, IndexError) as exc:
            raise DomainError(f"malformed profile row: {exc}") from None
        return cls.from_pairs(a, v, role)

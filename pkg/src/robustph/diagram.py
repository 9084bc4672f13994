"""Persistence diagram container and its CSV/JSON formats."""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .exceptions import InputError, ParseError

__all__ = ["PersistenceDiagram"]


def _fmt(x):
    """Shortest round-tripping text; integral values lose their ``.0``."""
    if math.isinf(x):
        return "inf"
    text = repr(float(x))
    return text[:-2] if text.endswith(".0") else text


def _parse_value(tok, lineno):
    tok = tok.strip()
    if tok.lower() in ("inf", "+inf", "infinity"):
        return math.inf
    try:
        return float(tok)
    except ValueError:
        raise ParseError(f"bad number {tok!r}", lineno) from None


class PersistenceDiagram:
    """A multiset of ``(dim, birth, death)`` bars; ``death`` may be ``inf``.

    Bars are kept in canonical order ``(dim, birth, death)`` so two diagrams
    with the same multiset compare equal.
    """

    def __init__(self, dims=(), births=(), deaths=()):
        dims = np.asarray(dims, dtype=np.intp).reshape(-1)
        births = np.asarray(births, dtype=np.float64).reshape(-1)
        deaths = np.asarray(deaths, dtype=np.float64).reshape(-1)
        if not (len(dims) == len(births) == len(deaths)):
            raise InputError("dims, births and deaths differ in length")
        if np.any(dims < 0):
            raise InputError("negative homology dimension")
        if np.any(np.isnan(births)) or np.any(np.isnan(deaths)) or np.any(np.isinf(births)):
            raise InputError("births must be finite and deaths must not be NaN")
        if np.any(births < 0):
            raise InputError("negative birth value")
        if np.any(deaths < births):
            raise InputError("bar with death < birth")
        order = np.lexsort((deaths, births, dims))
        self.dims = dims[order]
        self.births = births[order]
        self.deaths = deaths[order]
        for a in (self.dims, self.births, self.deaths):
            a.setflags(write=False)

    @classmethod
    def from_bars(cls, bars):
        bars = list(bars)
        if not bars:
            return cls()
        d, b, e = zip(*bars)
        return cls(d, b, e)

    @property
    def bars(self):
        return [
            (int(d), float(b), float(e))
            for d, b, e in zip(self.dims, self.births, self.deaths)
        ]

    def __len__(self):
        return len(self.dims)

    def __iter__(self):
        return iter(self.bars)

    def __eq__(self, other):
        if not isinstance(other, PersistenceDiagram):
            return NotImplemented
        return (
            np.array_equal(self.dims, other.dims)
            and np.array_equal(self.births, other.births)
            and np.array_equal(self.deaths, other.deaths)
        )

    def __repr__(self):
        return f"PersistenceDiagram({self.bars!r})"

    def allclose(self, other, atol=1e-9):
        """Equal up to ``atol`` in every birth and death (same dims and infinities)."""
        if len(self) != len(other) or not np.array_equal(self.dims, other.dims):
            return False
        inf_a, inf_b = np.isinf(self.deaths), np.isinf(other.deaths)
        if not np.array_equal(inf_a, inf_b):
            return False
        return bool(
            np.allclose(self.births, other.births, rtol=0, atol=atol)
            and np.allclose(self.deaths[~inf_a], other.deaths[~inf_b], rtol=0, atol=atol)
        )

    def in_dim(self, dim):
        """``(m, 2)`` array of ``(birth, death)`` for bars of one dimension."""
        mask = self.dims == dim
        return np.column_stack([self.births[mask], self.deaths[mask]])

    def restrict(self, dim):
        mask = self.dims == dim
        return PersistenceDiagram(self.dims[mask], self.births[mask], self.deaths[mask])

    @property
    def persistence(self):
        return self.deaths - self.births

    @property
    def max_dim(self):
        return int(self.dims.max()) if len(self) else -1

    def scale(self, c):
        return PersistenceDiagram(self.dims, self.births * c, self.deaths * c)

    # --- serialisation -------------------------------------------------
    def to_csv(self, fh=None):
        """Write ``dim,birth,death`` rows; returns the text when ``fh`` is None."""
        out = io.StringIO() if fh is None else fh
        out.write("dim,birth,death\n")
        for d, b, e in self.bars:
            out.write(f"{d},{_fmt(b)},{_fmt(e)}\n")
        if fh is None:
            return out.getvalue()
        return None

    @classmethod
    def from_csv(cls, fh):
        if isinstance(fh, str):
            fh = io.StringIO(fh)
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["dim", "birth", "death"]:
            raise ParseError("expected header 'dim,birth,death'", 1)
        bars = []
        for lineno, row in enumerate(reader, 2):
            if not row or not "".join(row).strip():
                continue
            if len(row) != 3:
                raise ParseError(f"expected 3 fields, got {len(row)}", lineno)
            try:
                dim = int(row[0])
            except ValueError:
                raise ParseError(f"bad dimension {row[0]!r}", lineno) from None
            bars.append((dim, _parse_value(row[1], lineno), _parse_value(row[2], lineno)))
        return cls.from_bars(bars)

    def to_dict(self):
        return {
            "bars": [
                {"dim": d, "birth": b, "death": "inf" if math.isinf(e) else e}
                for d, b, e in self.bars
            ]
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data):
        bars = []
        for bar in data["bars"]:
            death = bar["death"]
            death = math.inf if death == "inf" else float(death)
            bars.append((int(bar["dim"]), float(bar["birth"]), death))
        return cls.from_bars(bars)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

"""Pairwise ordering of states under several measures.

Two measures order a pair of states consistently when both report the same
relation. A pair's *pattern* lists the relation of every measure, e.g.
``"C<,N>,E<"``. The census counts patterns over all unordered pairs of an
ensemble. Each unordered pair is written in its canonical orientation, the
one whose first non-equal relation is ``<``, so a pattern and its mirror
image (every ``<`` swapped with ``>``) count as one class.
"""

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Sequence, Tuple

import numpy as np

from .exceptions import MissingMeasureError
from .measures import ALIASES, RECORD_FIELDS, MeasureRecord

DEFAULT_TOL = 1e-6

SHORT_NAMES = {
    "concurrence": "C",
    "c_max": "Cmax",
    "negativity": "N",
    "log_negativity": "EN",
    "neg_eig": "NE",
    "eof": "EF",
    "ree": "E",
    "mean_qfi": "F",
    "mqfi_max": "MQFI",
    "mqfi_min": "MQFImin",
}


class Relation(Enum):
    LESS = "<"
    EQUAL = "="
    GREATER = ">"

    def flipped(self):
        return {Relation.LESS: Relation.GREATER, Relation.GREATER: Relation.LESS}.get(self, self)

    @classmethod
    def compare(cls, a, b, tol):
        if abs(a - b) <= tol:
            return cls.EQUAL
        return cls.LESS if a < b else cls.GREATER


@dataclass(frozen=True)
class OrderingClass:
    """Ordered tuple of ``(measure, Relation)``."""

    pattern: Tuple[Tuple[str, Relation], ...]

    def __str__(self):
        return ",".join(f"{SHORT_NAMES.get(m, m)}{r.value}" for m, r in self.pattern)

    def mirrored(self):
        return OrderingClass(tuple((m, r.flipped()) for m, r in self.pattern))

    def relations(self):
        return tuple(r for _, r in self.pattern)


_FROM_SHORT = {v: k for k, v in SHORT_NAMES.items()}


def resolve_measure(name):
    key = ALIASES.get(name, _FROM_SHORT.get(name, name))
    if key not in RECORD_FIELDS:
        raise MissingMeasureError(name)
    return key


def _value(rec, key):
    if isinstance(rec, MeasureRecord):
        v = getattr(rec, key)
    else:
        v = rec.get(key)
    if v is None or (isinstance(v, float) and np.isnan(v)):
        raise MissingMeasureError(f"record has no value for {key!r}")
    return float(v)


def _ree_gap(rec):
    g = rec.ree_gap if isinstance(rec, MeasureRecord) else rec.get("ree_gap")
    return 0.0 if g is None or np.isnan(g) else float(g)


def pair_tolerance(key, tol, gap1=0.0, gap2=0.0):
    """Equality tolerance for one measure: ``tol``, widened to twice the larger REE gap for REE."""
    if key == "ree":
        return max(tol, 2.0 * max(gap1, gap2))
    return tol


def classify_pair(rec1, rec2, measures: Sequence[str], tol=DEFAULT_TOL) -> OrderingClass:
    """Relation of ``rec1`` to ``rec2`` under each measure.

    Raises
    ------
    MissingMeasureError
        If either record lacks a requested measure.
    """
    g1, g2 = _ree_gap(rec1), _ree_gap(rec2)
    out = []
    for name in measures:
        key = resolve_measure(name)
        rel = Relation.compare(_value(rec1, key), _value(rec2, key), pair_tolerance(key, tol, g1, g2))
        out.append((key, rel))
    return OrderingClass(tuple(out))


def canonical(cls: OrderingClass) -> OrderingClass:
    for _, r in cls.pattern:
        if r is Relation.GREATER:
            return cls.mirrored()
        if r is Relation.LESS:
            return cls
    return cls


def _matrix(records, keys):
    vals = np.array([[_value(r, k) for k in keys] for r in records], dtype=float)
    gaps = np.array([_ree_gap(r) for r in records], dtype=float)
    return vals, gaps


def census(records, measures: Sequence[str], tol=DEFAULT_TOL) -> Dict[OrderingClass, int]:
    """Count canonical patterns over all ``n (n - 1) / 2`` unordered pairs.

    Returns
    -------
    dict
        ``OrderingClass -> count``, sorted by descending count and then by
        pattern string.
    """
    keys = [resolve_measure(m) for m in measures]
    records = list(records)
    n = len(records)
    if n < 2:
        return {}
    vals, gaps = _matrix(records, keys)
    m = len(keys)
    weights = 3 ** np.arange(m - 1, -1, -1)
    codes = Counter()
    for i in range(n - 1):
        d = vals[i + 1 :] - vals[i]
        rel = np.zeros_like(d, dtype=np.int64)
        for c, key in enumerate(keys):
            t = np.full(n - i - 1, tol)
            if key == "ree":
                t = np.maximum(t, 2.0 * np.maximum(gaps[i], gaps[i + 1 :]))
            # +1 when record i is greater, -1 when less
            rel[:, c] = np.where(np.abs(d[:, c]) <= t, 0, np.where(d[:, c] < 0, 1, -1))
        first = np.zeros(len(rel), dtype=np.int64)
        for c in range(m - 1, -1, -1):
            first = np.where(rel[:, c] != 0, rel[:, c], first)
        rel = np.where(first[:, None] > 0, -rel, rel)
        codes.update((rel + 1) @ weights)
    symbols = {0: Relation.LESS, 1: Relation.EQUAL, 2: Relation.GREATER}
    out = {}
    for code, count in codes.items():
        digits = [(int(code) // 3**p) % 3 for p in range(m - 1, -1, -1)]
        out[OrderingClass(tuple((k, symbols[dg]) for k, dg in zip(keys, digits)))] = int(count)
    return dict(sorted(out.items(), key=lambda kv: (-kv[1], str(kv[0]))))


def census_naive(records, measures, tol=DEFAULT_TOL):
    """Reference pair-by-pair census built on :func:`classify_pair`."""
    records = list(records)
    counts = Counter()
    for i in range(len(records)):
        for j in range(i + 1, len(records)):
            counts[canonical(classify_pair(records[i], records[j], measures, tol))] += 1
    return dict(counts)


def comparison_classes(records, x: str, y: str, tol=DEFAULT_TOL) -> Dict[str, int]:
    """Per-state comparison of two measures on the same state.

    Each state falls in exactly one of ``"x>0,y=0"``, ``"x<y"``, ``"x=y"`` or
    ``"x>y"`` (the last excluding the first), with measure short names in
    place of ``x`` and ``y``.
    """
    kx, ky = resolve_measure(x), resolve_measure(y)
    sx, sy = SHORT_NAMES.get(kx, kx), SHORT_NAMES.get(ky, ky)
    labels = [f"{sx}>0,{sy}=0", f"{sx}<{sy}", f"{sx}={sy}", f"{sx}>{sy}"]
    out = dict.fromkeys(labels, 0)
    for r in records:
        a, b = _value(r, kx), _value(r, ky)
        if a > tol and abs(b) <= tol:
            out[labels[0]] += 1
        elif abs(a - b) <= tol:
            out[labels[2]] += 1
        elif a < b:
            out[labels[1]] += 1
        else:
            out[labels[3]] += 1
    return out


def scatter_bounds(records, x: str, y: str, bins=20):
    """Lower and upper envelopes of ``y`` against ``x``.

    The x range is cut into ``bins`` equal bins; each non-empty bin
    contributes its lowest and highest point.

    Returns
    -------
    lower, upper : ndarray, shape (k, 2)
        ``(x, y)`` of the extreme points, ordered by bin.
    """
    kx, ky = resolve_measure(x), resolve_measure(y)
    pts = np.array([(_value(r, kx), _value(r, ky)) for r in records], dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        return np.empty((0, 2)), np.empty((0, 2))
    lo, hi = pts[:, 0].min(), pts[:, 0].max()
    if hi > lo:
        idx = np.minimum(((pts[:, 0] - lo) / (hi - lo) * bins).astype(int), bins - 1)
    else:
        idx = np.zeros(len(pts), dtype=int)
    lower, upper = [], []
    for b in np.unique(idx):
        sel = pts[idx == b]
        lower.append(sel[np.argmin(sel[:, 1])])
        upper.append(sel[np.argmax(sel[:, 1])])
    return np.array(lower), np.array(upper)

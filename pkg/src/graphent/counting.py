"""Exact path counting on graph windows.

All counts are Python integers.  The counters run a sparse dynamic program
over merged arcs ``(target, multiplicity)``, so parallel edges cost one
multiplication instead of one addition per edge.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from enum import Enum

from .graph import GraphWindow


class PathClass(str, Enum):
    """Path classes counted at a fixed vertex ``v``.

    ``THROUGH``      paths with ``v`` among their vertices
    ``SOURCE``       paths starting at ``v``
    ``SOURCE_STAR``  paths starting at ``v`` that never re-enter ``v``
    ``RANGE``        paths ending at ``v``
    ``RANGE_STAR``   paths ending at ``v`` none of whose edges leaves ``v``
    ``LOOP``         loops at ``v``
    """

    THROUGH = "through"
    SOURCE = "source"
    SOURCE_STAR = "source-star"
    RANGE = "range"
    RANGE_STAR = "range-star"
    LOOP = "loop"


@dataclass(frozen=True)
class CountSeries:
    """Counts ``a_0..a_N`` of one path class at one vertex.

    ``kind`` names derived series (cumulative sums, set counts) that are not
    one of the six path classes; for those ``path_class`` is ``None``.
    """

    vertex: object
    path_class: PathClass | None
    counts: tuple
    window_radius: int
    kind: str = ""

    @property
    def n_max(self) -> int:
        return len(self.counts) - 1

    @property
    def name(self) -> str:
        return self.kind or (self.path_class.value if self.path_class else "series")

    def __getitem__(self, n: int) -> int:
        return self.counts[n]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "count"])
        for n, a in enumerate(self.counts):
            w.writerow([n, str(a)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "vertex": str(self.vertex),
            "class": self.name,
            "n_max": self.n_max,
            "window_radius": self.window_radius,
            "counts": [str(a) for a in self.counts],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "CountSeries":
        try:
            pc = PathClass(d["class"])
            kind = ""
        except ValueError:
            pc, kind = None, d["class"]
        return cls(d["vertex"], pc, tuple(int(a) for a in d["counts"]), d["window_radius"], kind)


@dataclass(frozen=True)
class FirstReturnSeries:
    """``counts[m]`` = loops at ``vertex`` of length ``m`` that visit it only
    at their endpoints (``counts[0]`` is 0)."""

    vertex: object
    counts: tuple
    window_radius: int = 0

    @property
    def n_max(self) -> int:
        return len(self.counts) - 1

    def support(self) -> list[int]:
        return [m for m, f in enumerate(self.counts) if f]


# --------------------------------------------------------------------------
# DP kernels


def _step(vec: dict, arcs) -> dict:
    new: dict = {}
    for u, c in vec.items():
        for w, m in arcs[u]:
            new[w] = new.get(w, 0) + c * m
    return new


def _walk(window: GraphWindow, v, n_max: int, forward: bool, avoid: frozenset = frozenset()):
    """Run the DP from ``v`` (forward or backward).

    Returns the total count per length and the count of walks sitting at
    ``v`` per length.  After each step the vertices in ``avoid`` are cleared,
    so later steps never pass through them.
    """
    g = window.graph
    arcs = g.arcs_out() if forward else g.arcs_in()
    vec = {g.index[v]: 1}
    totals = [1]
    at = [1]
    target = g.index[v]
    avoid_idx = {g.index[a] for a in avoid}
    for _ in range(n_max):
        vec = _step(vec, arcs)
        at.append(vec.get(target, 0))
        for a in avoid_idx:
            vec.pop(a, None)
        totals.append(sum(vec.values()))
    return totals, at


def _through_marked(window: GraphWindow, vset, n_max: int) -> list[int]:
    """Length-n paths touching ``vset``: DP over (vertex, touched) states."""
    g = window.graph
    arcs = g.arcs_out()
    marks = {g.index[v] for v in vset}
    free = {i: 1 for i in range(len(g.vertices)) if i not in marks}
    hit = {i: 1 for i in marks}
    out = [len(marks)]
    for _ in range(n_max):
        new_free: dict = {}
        new_hit = _step(hit, arcs)
        for u, c in free.items():
            for w, m in arcs[u]:
                tgt = new_hit if w in marks else new_free
                tgt[w] = tgt.get(w, 0) + c * m
        free, hit = new_free, new_hit
        out.append(sum(hit.values()))
    return out


def _convolve(a, b, n_max: int) -> list[int]:
    return [sum(a[k] * b[n - k] for k in range(n + 1)) for n in range(n_max + 1)]


def _series(window, v, cls, n_max):
    if cls is PathClass.SOURCE:
        return _walk(window, v, n_max, True)[0]
    if cls is PathClass.RANGE:
        return _walk(window, v, n_max, False)[0]
    if cls is PathClass.SOURCE_STAR:
        return _walk(window, v, n_max, True, frozenset([v]))[0]
    if cls is PathClass.RANGE_STAR:
        return _walk(window, v, n_max, False, frozenset([v]))[0]
    if cls is PathClass.LOOP:
        return _walk(window, v, n_max, True)[1]
    raise ValueError(cls)


class InternalInconsistency(AssertionError):
    """Two independent counting routes disagreed (a bug, not an input error)."""


def count_class(window: GraphWindow, v, path_class, n_max: int, cross_check: bool = True) -> CountSeries:
    """Exact counts ``a_0..a_(n_max)`` of ``path_class`` paths at ``v``.

    ``THROUGH`` is computed by splitting each path at its first visit to
    ``v`` (range-star counts convolved with source counts); with
    ``cross_check`` the marked-vertex DP is run as well and both must agree.
    """
    path_class = PathClass(path_class)
    window.require(n_max, [v])
    if path_class is PathClass.THROUGH:
        counts = _convolve(_series(window, v, PathClass.RANGE_STAR, n_max), _series(window, v, PathClass.SOURCE, n_max), n_max)
        if cross_check:
            marked = _through_marked(window, [v], n_max)
            if marked != counts:
                bad = next(n for n in range(n_max + 1) if marked[n] != counts[n])
                raise InternalInconsistency(f"through counts disagree at n={bad}: {counts[bad]} vs {marked[bad]}")
    else:
        counts = _series(window, v, path_class, n_max)
    return CountSeries(v, path_class, tuple(counts), window.radius)


def first_return_counts(window: GraphWindow, v, n_max: int) -> FirstReturnSeries:
    window.require(n_max, [v])
    _, at = _walk(window, v, n_max, True, frozenset([v]))
    return FirstReturnSeries(v, (0,) + tuple(at[1:]), window.radius)


def renewal_failures(first: FirstReturnSeries, loops: CountSeries) -> list[int]:
    """Lengths ``n`` where ``L_n != sum_m f_m L_(n-m)`` (empty list = identity holds)."""
    n_max = min(first.n_max, loops.n_max)
    L, f = loops.counts, first.counts
    bad = []
    if L[0] != 1:
        bad.append(0)
    for n in range(1, n_max + 1):
        if L[n] != sum(f[m] * L[n - m] for m in range(1, n + 1)):
            bad.append(n)
    return bad


@dataclass
class ConvolutionReport:
    vertex: object
    n_max: int
    lhs: list = field(default_factory=list)
    rhs: list = field(default_factory=list)

    @property
    def failures(self) -> list[tuple[int, int, int]]:
        return [(n, a, b) for n, (a, b) in enumerate(zip(self.lhs, self.rhs)) if a != b]

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        return {
            "check": "through = range-star * source",
            "vertex": str(self.vertex),
            "n_max": self.n_max,
            "passed": self.passed,
            "failures": [[n, str(a), str(b)] for n, a, b in self.failures],
        }


def convolution_check(window: GraphWindow, v, n_max: int) -> ConvolutionReport:
    """Check ``|E^n(v)| = sum_k |E_r^k(v*)| |E_s^(n-k)(v)|`` exactly for ``n <= n_max``.

    The left side comes from the marked-vertex DP, the right side from the
    range-star and source counters.
    """
    window.require(n_max, [v])
    lhs = _through_marked(window, [v], n_max)
    rhs = _convolve(_series(window, v, PathClass.RANGE_STAR, n_max), _series(window, v, PathClass.SOURCE, n_max), n_max)
    return ConvolutionReport(v, n_max, lhs, rhs)


def through_set_series(window: GraphWindow, vset, n_max: int, cross_check: bool = True) -> list[int]:
    """Counts of paths of length ``0..n_max`` that touch ``vset``.

    First-touch decomposition: a path is split at its first vertex in
    ``vset``; the prefix avoids ``vset`` before its end.
    """
    vset = list(dict.fromkeys(vset))
    window.require(n_max, vset)
    avoid = frozenset(vset)
    total = [0] * (n_max + 1)
    for v in vset:
        pre = _walk(window, v, n_max, False, avoid)[0]
        suf = _series(window, v, PathClass.SOURCE, n_max)
        for n, c in enumerate(_convolve(pre, suf, n_max)):
            total[n] += c
    if cross_check:
        marked = _through_marked(window, vset, n_max)
        if marked != total:
            bad = next(n for n in range(n_max + 1) if marked[n] != total[n])
            raise InternalInconsistency(f"set counts disagree at n={bad}: {total[bad]} vs {marked[bad]}")
    return total


def count_through_set(window: GraphWindow, vset, n: int) -> int:
    return through_set_series(window, vset, n)[n]


_DUAL = {
    PathClass.SOURCE: PathClass.RANGE,
    PathClass.SOURCE_STAR: PathClass.RANGE_STAR,
}


def transpose_duality_failures(window: GraphWindow, v, n_max: int) -> list[tuple[str, int]]:
    """Compare source-side counts on the transposed window with range-side
    counts on the original (plain and starred); returns ``(class, n)`` for
    each mismatch."""
    tw = window.transposed()
    bad = []
    for src_cls, rng_cls in _DUAL.items():
        a = count_class(tw, v, src_cls, n_max).counts
        b = count_class(window, v, rng_cls, n_max).counts
        bad.extend((src_cls.value, n) for n in range(n_max + 1) if a[n] != b[n])
    return bad

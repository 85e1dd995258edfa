"""Growth rates of count series, entropy quantities and the sandwich bound.

All values are in nats.  Limsups are estimated from finite data on a tail
window ``[ceil((1 - tail_fraction) N), N]`` of the series.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
import scipy.sparse as sp

from .counting import CountSeries, PathClass, count_class
from .errors import AllZeroTail, NoCycleWarning, NotIrreducible
from .graph import (
    FiniteGraph,
    GraphOracle,
    GraphWindow,
    component_of,
    edge_matrix,
    full_window,
    has_cycle,
    is_irreducible,
    materialize,
)

METHODS = ("tail_max", "stride_subsequence", "exact_spectral", "exact_closed_form")
DEFAULT_TAIL = 0.25


@dataclass(frozen=True)
class EntropyEstimate:
    """A growth rate with the data it was estimated from.

    ``raw`` holds ``(n, log(a_n) / n)`` for every nonzero ``a_n`` with
    ``n >= 1``; ``skipped`` counts zero entries inside the tail window.
    """

    value: float
    method: str
    quantity: str = ""
    stride: int | None = None
    n_range: tuple = (0, 0)
    raw: tuple = ()
    skipped: int = 0
    notes: tuple = ()

    @property
    def bits(self) -> float:
        return self.value / math.log(2)

    def to_dict(self, provenance: str | None = None) -> dict:
        return {
            "quantity": self.quantity,
            "value_nats": _r(self.value),
            "value_bits": _r(self.bits),
            "method": self.method,
            "stride": self.stride,
            "n_range": list(self.n_range),
            "raw": [[n, _r(x)] for n, x in self.raw],
            "provenance": provenance,
        }


def _r(x: float) -> float:
    """Round to 12 significant digits for stable report output."""
    return float(f"{x:.12g}")


def support_stride(counts) -> int:
    """gcd of the gaps between consecutive nonzero entries ``a_n``, ``n >= 1``."""
    idx = [n for n, a in enumerate(counts) if n >= 1 and a]
    gaps = [b - a for a, b in zip(idx, idx[1:])]
    if not gaps:
        return idx[0] if idx else 1
    return reduce(math.gcd, gaps)


def growth_rate(
    series: CountSeries,
    stride: int | None = None,
    tail_fraction: float = DEFAULT_TAIL,
    method: str = "stride_subsequence",
) -> EntropyEstimate:
    """Estimate ``limsup (1/n) log a_n`` from the tail of ``series``.

    The tail is restricted to the indices ``n`` congruent (mod ``stride``)
    to the last nonzero index in the tail.  ``tail_max`` returns the largest
    ``(1/n) log a_n`` there; ``stride_subsequence`` returns the
    least-squares slope of ``log a_n`` against ``n`` along that subsequence,
    which is exact for ``c * lam**n`` and insensitive to the constant ``c``.
    Estimates are clamped at 0.
    """
    if method not in ("tail_max", "stride_subsequence"):
        raise ValueError(f"unknown method {method!r}")
    if not 0 < tail_fraction <= 1:
        raise ValueError("tail_fraction must lie in (0, 1]")
    counts = series.counts
    N = len(counts) - 1
    if N < 4:
        raise ValueError("need at least n_max = 4 to estimate a growth rate")
    s = 1 if stride is None else int(stride)
    if s < 1:
        raise ValueError("stride must be positive")
    raw = tuple((n, math.log(a) / n) for n, a in enumerate(counts) if n >= 1 and a > 0)
    n_lo = max(1, math.ceil((1 - tail_fraction) * N))
    tail = range(n_lo, N + 1)
    nonzero = [n for n in tail if counts[n] > 0]
    if not nonzero:
        raise AllZeroTail(f"all counts of {series.name} are zero on [{n_lo}, {N}]")
    anchor = nonzero[-1]
    picked = [n for n in tail if (anchor - n) % s == 0]
    pts = [n for n in picked if counts[n] > 0]
    skipped = len(picked) - len(pts)
    logs = [math.log(counts[n]) for n in pts]
    if method == "tail_max" or len(pts) < 2:
        value = max(lg / n for lg, n in zip(logs, pts))
        used = "tail_max" if method == "tail_max" else "stride_subsequence"
    else:
        x = np.array(pts, dtype=float)
        y = np.array(logs, dtype=float)
        value = float(np.polyfit(x, y, 1)[0])
        used = method
    return EntropyEstimate(
        value=max(value, 0.0),
        method=used,
        quantity=series.name,
        stride=s,
        n_range=(n_lo, N),
        raw=raw,
        skipped=skipped,
    )


def radius_inverse(series: CountSeries, stride: int | None = None, tail_fraction: float = DEFAULT_TAIL) -> EntropyEstimate:
    """``log R^-1`` for the generating series of ``series``.

    A series with finitely many nonzero terms (all-zero tail) is a
    polynomial; its value is reported as 0 with a note.
    """
    label = f"log R^-1 [{series.name}]"
    try:
        est = growth_rate(series, stride, tail_fraction)
    except AllZeroTail:
        N = series.n_max
        return EntropyEstimate(
            value=0.0,
            method="exact_closed_form",
            quantity=label,
            stride=stride,
            n_range=(math.ceil((1 - tail_fraction) * N), N),
            notes=("finite support: polynomial series",),
        )
    return EntropyEstimate(est.value, est.method, label, est.stride, est.n_range, est.raw, est.skipped)


def _relabel(est: EntropyEstimate, quantity: str) -> EntropyEstimate:
    return EntropyEstimate(est.value, est.method, quantity, est.stride, est.n_range, est.raw, est.skipped, est.notes)


def loop_period(window: GraphWindow, v, n_max: int) -> int:
    return support_stride(count_class(window, v, PathClass.LOOP, n_max).counts)


def loop_entropy(window: GraphWindow, v, n_max: int, stride: int | None = None, tail_fraction: float = DEFAULT_TAIL) -> EntropyEstimate:
    series = count_class(window, v, PathClass.LOOP, n_max)
    s = support_stride(series.counts) if stride is None else stride
    return _relabel(growth_rate(series, s, tail_fraction), "h_l")


def block_entropy(window: GraphWindow, v, n_max: int, stride: int | None = None, tail_fraction: float = DEFAULT_TAIL) -> EntropyEstimate:
    s = loop_period(window, v, n_max) if stride is None else stride
    series = count_class(window, v, PathClass.SOURCE, n_max)
    return _relabel(growth_rate(series, s, tail_fraction), "h_b")


def coblock_entropy(window: GraphWindow, v, n_max: int, stride: int | None = None, tail_fraction: float = DEFAULT_TAIL) -> EntropyEstimate:
    """Block entropy of the transposed graph, from paths ending at ``v``."""
    s = loop_period(window, v, n_max) if stride is None else stride
    series = count_class(window, v, PathClass.RANGE, n_max)
    return _relabel(growth_rate(series, s, tail_fraction), "h_b_t")


def through_growth(window: GraphWindow, v, n_max: int, stride: int | None = None, tail_fraction: float = DEFAULT_TAIL) -> EntropyEstimate:
    s = loop_period(window, v, n_max) if stride is None else stride
    series = count_class(window, v, PathClass.THROUGH, n_max)
    return _relabel(growth_rate(series, s, tail_fraction), "through")


# --------------------------------------------------------------------------
# identity checks


@dataclass
class CheckReport:
    """Outcome of a numerical identity check: named values plus comparisons."""

    name: str
    tol: float
    values: dict = field(default_factory=dict)
    comparisons: list = field(default_factory=list)

    def compare(self, label: str, a: float, b: float) -> None:
        self.comparisons.append((label, a, b, abs(a - b) <= self.tol))

    @property
    def passed(self) -> bool:
        return all(ok for *_, ok in self.comparisons)

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        return {
            "check": self.name,
            "tol": self.tol,
            "passed": self.passed,
            "values": {k: _r(v) for k, v in self.values.items()},
            "comparisons": [
                {"label": lbl, "lhs": _r(a), "rhs": _r(b), "passed": ok} for lbl, a, b, ok in self.comparisons
            ],
        }


def star_radius_check(window: GraphWindow, v, n_max: int, tol: float) -> CheckReport:
    """``h_b = max(log R^-1 of source-star series, h_l)`` and its transpose
    ``h_b_t = max(log R^-1 of range-star series, h_l)``."""
    rep = CheckReport("block entropy = max(star radius, loop entropy)", tol)
    period = loop_period(window, v, n_max)
    h_l = loop_entropy(window, v, n_max).value
    h_b = block_entropy(window, v, n_max, period).value
    h_bt = coblock_entropy(window, v, n_max, period).value
    rs = radius_inverse(count_class(window, v, PathClass.SOURCE_STAR, n_max)).value
    rr = radius_inverse(count_class(window, v, PathClass.RANGE_STAR, n_max)).value
    rep.values.update(h_l=h_l, h_b=h_b, h_b_t=h_bt, log_inv_R_source_star=rs, log_inv_R_range_star=rr)
    rep.compare("h_b vs max(log R_s*^-1, h_l)", h_b, max(rs, h_l))
    rep.compare("h_b_t vs max(log R_r*^-1, h_l)", h_bt, max(rr, h_l))
    return rep


def through_growth_check(window: GraphWindow, v, n_max: int, tol: float) -> CheckReport:
    """Growth of paths through ``v`` equals ``max(h_b, h_b_t)``."""
    rep = CheckReport("through growth = max(h_b, h_b_t)", tol)
    period = loop_period(window, v, n_max)
    th = through_growth(window, v, n_max, period).value
    h_b = block_entropy(window, v, n_max, period).value
    h_bt = coblock_entropy(window, v, n_max, period).value
    rep.values.update(through=th, h_b=h_b, h_b_t=h_bt)
    rep.compare("through vs max(h_b, h_b_t)", th, max(h_b, h_bt))
    return rep


# --------------------------------------------------------------------------
# finite graphs


def spectral_radius(A: sp.spmatrix, tol: float = 1e-12, max_iter: int = 100_000) -> tuple[float, str]:
    """Spectral radius of a nonnegative matrix.

    Power iteration from the all-ones vector; if the Rayleigh-type ratio
    does not settle (periodic or reducible matrices), fall back to repeated
    squaring with rescaling, whose total-sum growth converges for every
    nonnegative matrix.  Returns ``(radius, route)``.
    """
    A = sp.csr_matrix(A, dtype=float)
    n = A.shape[0]
    if n == 0 or A.nnz == 0:
        return 0.0, "empty"
    x = np.ones(n)
    lam = None
    for _ in range(max_iter):
        y = A @ x
        s = y.sum()
        if s == 0:
            return 0.0, "power"
        new = s / x.sum()
        x = y / s
        if lam is not None and abs(new - lam) <= tol * max(1.0, new):
            # guard against a transient plateau on periodic matrices
            y2 = A @ x
            if abs(y2.sum() / x.sum() - new) <= tol * max(1.0, new):
                return float(new), "power"
        lam = new
    return _squaring_radius(A), "squaring"


def _squaring_radius(A: sp.spmatrix, rounds: int = 60) -> float:
    B = np.asarray(A.toarray(), dtype=float)
    log_scale = 0.0  # A^m = exp(log_scale) * B with m = 2**i
    m = 1
    est = None
    for _ in range(rounds):
        total = B.sum()
        if total == 0:
            return 0.0
        new = (log_scale + math.log(total)) / m
        if est is not None and abs(new - est) <= 1e-14 * max(1.0, abs(new)):
            break
        est = new
        B = B @ B
        c = B.max()
        if c == 0:
            return 0.0
        B /= c
        log_scale = 2 * log_scale + math.log(c)
        m *= 2
    return math.exp(est)


def finite_entropy(g: FiniteGraph) -> EntropyEstimate:
    """``log`` of the spectral radius of the edge matrix of ``g``.

    Graphs without a cycle get 0 and a :class:`NoCycleWarning`.
    """
    if not has_cycle(g):
        warnings.warn("graph has no cycle; entropy taken as 0", NoCycleWarning, stacklevel=2)
        return EntropyEstimate(0.0, "exact_spectral", "log r(A_E)", notes=("no cycle",))
    lam, route = spectral_radius(edge_matrix(g).matrix)
    return EntropyEstimate(math.log(lam), "exact_spectral", "log r(A_E)", notes=(f"route={route}",))


def finite_coherence_check(g: FiniteGraph, v, n_max: int, tol: float) -> CheckReport:
    """Loop, block and co-block entropy and ``log r(A_E)`` agree on a
    finite irreducible graph."""
    if not is_irreducible(g):
        raise NotIrreducible("finite-graph coherence needs an irreducible graph")
    w = full_window(g)
    rep = CheckReport("finite irreducible: h_l = h_b = h_b_t = log r(A_E)", tol)
    period = loop_period(w, v, n_max)
    vals = {
        "h_l": loop_entropy(w, v, n_max, period).value,
        "h_b": block_entropy(w, v, n_max, period).value,
        "h_b_t": coblock_entropy(w, v, n_max, period).value,
        "log_r": finite_entropy(g).value,
    }
    rep.values.update(vals)
    keys = list(vals)
    for i, a in enumerate(keys):
        for b in keys[i + 1 :]:
            rep.compare(f"{a} vs {b}", vals[a], vals[b])
    return rep


def subgraph_supremum(oracle: GraphOracle, v, radii) -> list[float]:
    """Entropy of the strongly connected component of ``v`` inside growing
    windows; a non-decreasing sequence approaching the loop entropy."""
    radii = list(radii)
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly increasing")
    out = []
    for R in radii:
        comp = component_of(materialize(oracle, [v], R).graph, v)
        if comp.n_edges == 0:
            out.append(0.0)
            continue
        out.append(finite_entropy(comp).value)
    return out


# --------------------------------------------------------------------------
# sandwich


@dataclass(frozen=True)
class SandwichReport:
    """``h_l <= ht <= max(h_b, h_b_t)`` evaluated at one vertex."""

    h_l: EntropyEstimate
    h_b: EntropyEstimate
    h_b_t: EntropyEstimate
    tolerance: float
    vertex: object
    n_max: int
    window_radius: int

    @property
    def lower(self) -> float:
        return self.h_l.value

    @property
    def upper(self) -> float:
        return max(self.h_b.value, self.h_b_t.value)

    @property
    def exact(self) -> bool:
        return self.upper - self.lower <= self.tolerance

    @property
    def consistent(self) -> bool:
        return self.lower <= self.upper + self.tolerance

    @property
    def value(self) -> float | None:
        """The determined entropy when the bounds meet, else ``None``."""
        return self.lower if self.exact else None

    def to_dict(self, provenance: str | None = None) -> dict:
        return {
            "quantity": "sandwich",
            "vertex": str(self.vertex),
            "n_max": self.n_max,
            "window_radius": self.window_radius,
            "tolerance": self.tolerance,
            "lower_nats": _r(self.lower),
            "upper_nats": _r(self.upper),
            "lower_bits": _r(self.lower / math.log(2)),
            "upper_bits": _r(self.upper / math.log(2)),
            "exact": self.exact,
            "consistent": self.consistent,
            "value_nats": None if self.value is None else _r(self.value),
            "estimates": [e.to_dict(provenance) for e in (self.h_l, self.h_b, self.h_b_t)],
        }


def sandwich(oracle, v, n_max: int, tol: float, tail_fraction: float = DEFAULT_TAIL) -> SandwichReport:
    """Lower and upper entropy bounds at ``v`` from a radius-``n_max`` window.

    ``oracle`` may also be a :class:`FiniteGraph`.
    """
    if isinstance(oracle, FiniteGraph):
        window = full_window(oracle)
    else:
        window = materialize(oracle, [v], n_max)
    period = loop_period(window, v, n_max)
    return SandwichReport(
        h_l=loop_entropy(window, v, n_max, period, tail_fraction),
        h_b=block_entropy(window, v, n_max, period, tail_fraction),
        h_b_t=coblock_entropy(window, v, n_max, period, tail_fraction),
        tolerance=tol,
        vertex=v,
        n_max=n_max,
        window_radius=window.radius,
    )

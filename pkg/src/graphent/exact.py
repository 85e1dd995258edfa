"""Exact Gaussian-rational scalars and sparse rank over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping


class GaussianRational:
    """``re + im*i`` with :class:`~fractions.Fraction` parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        return cls(x)

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.coerce(other))

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        try:
            o = GaussianRational.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        if not self.im:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


ONE = GaussianRational(1)


def sparse_rank(rows: Iterable[Mapping[Hashable, object]]) -> int:
    """Rank of a list of sparse vectors ``{coordinate: value}`` over Q(i).

    Coordinates must be mutually comparable.  Each row is reduced on its
    smallest coordinate against the stored pivot rows; the smallest
    coordinate strictly grows, so reduction terminates.
    """
    pivots: dict = {}
    for row in rows:
        vec = {k: GaussianRational.coerce(v) for k, v in row.items() if v}
        while vec:
            key = min(vec)
            piv = pivots.get(key)
            if piv is None:
                inv = _inverse(vec[key])
                pivots[key] = {k: v * inv for k, v in vec.items()}
                break
            c = vec[key]
            for k, v in piv.items():
                nv = vec.get(k, GaussianRational()) - c * v
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
    return len(pivots)


def _inverse(x: GaussianRational) -> GaussianRational:
    d = x.re * x.re + x.im * x.im
    return GaussianRational(x.re / d, -x.im / d)

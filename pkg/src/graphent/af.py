"""Symbolic calculus of the words ``s_alpha s_beta^*`` with ``|alpha| = |beta|``.

A :class:`PathPair` stands for one such word.  Products follow the
Cuntz-Krieger rules for paths of equal length, and :class:`PhiRepresentation`
sends the generators with common range ``v`` to sums of matrix units indexed
by the paths that end at ``v``.  All arithmetic is exact.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterable

from .counting import CountSeries, PathClass, count_class, through_set_series
from .errors import HypothesisViolated, NotInOmega, WindowTooSmall
from .exact import GaussianRational, sparse_rank
from .graph import FiniteGraph, GraphWindow, is_irreducible, natural_key


@dataclass(frozen=True)
class Path:
    """A finite path: start vertex, edge ids, end vertex."""

    start: object
    edges: tuple = ()
    end: object = None

    def __post_init__(self):
        if self.end is None:
            if self.edges:
                raise ValueError("a path with edges needs an explicit end vertex")
            object.__setattr__(self, "end", self.start)

    @classmethod
    def vertex(cls, v) -> "Path":
        return cls(v, (), v)

    @classmethod
    def from_edges(cls, graph: FiniteGraph, edge_ids: Iterable, start=None) -> "Path":
        """Build a path from edge ids, checking that consecutive edges meet."""
        by_id = _edge_table(graph)
        ids = tuple(edge_ids)
        if not ids:
            if start is None:
                raise ValueError("an empty path needs a start vertex")
            return cls.vertex(start)
        for a, b in zip(ids, ids[1:]):
            if by_id[a].dst != by_id[b].src:
                raise ValueError(f"edges {a!r} and {b!r} are not consecutive")
        return cls(by_id[ids[0]].src, ids, by_id[ids[-1]].dst)

    def __len__(self) -> int:
        return len(self.edges)

    def sort_key(self) -> tuple:
        return (len(self.edges), tuple(natural_key(e) for e in self.edges), natural_key(self.start))

    def is_prefix_of(self, other: "Path") -> bool:
        n = len(self.edges)
        return self.start == other.start and other.edges[:n] == self.edges

    def remainder(self, prefix: "Path") -> "Path":
        """``self`` with ``prefix`` removed from the front."""
        n = len(prefix.edges)
        return Path(prefix.end, self.edges[n:], self.end)

    def __add__(self, other: "Path") -> "Path":
        if self.end != other.start:
            raise ValueError(f"cannot concatenate: {self.end!r} != {other.start!r}")
        return Path(self.start, self.edges + other.edges, other.end)

    def __str__(self) -> str:
        return f"({self.start})" if not self.edges else " ".join(map(str, self.edges))


def _edge_table(graph: FiniteGraph) -> dict:
    return {e.id: e for e in graph.edges}


@dataclass(frozen=True)
class PathPair:
    """The word ``s_alpha s_beta^*``; both paths have equal length and range."""

    alpha: Path
    beta: Path

    def __post_init__(self):
        if len(self.alpha) != len(self.beta):
            raise ValueError("paths in a pair must have equal length")
        if self.alpha.end != self.beta.end:
            raise ValueError("paths in a pair must have a common range")

    @classmethod
    def projection(cls, v) -> "PathPair":
        p = Path.vertex(v)
        return cls(p, p)

    @property
    def range(self):
        return self.alpha.end

    @property
    def length(self) -> int:
        return len(self.alpha)

    def sort_key(self) -> tuple:
        return (self.length, self.alpha.sort_key(), self.beta.sort_key())

    def __str__(self) -> str:
        return f"s[{self.alpha}] s*[{self.beta}]"


def multiply(x: PathPair, y: PathPair) -> PathPair | None:
    """Product of two words; ``None`` stands for zero."""
    alpha, beta = x.alpha, x.beta
    mu, nu = y.alpha, y.beta
    if beta.is_prefix_of(mu):
        return PathPair(alpha + mu.remainder(beta), nu)
    if mu.is_prefix_of(beta):
        return PathPair(alpha, nu + beta.remainder(mu))
    return None


def adjoint(x: PathPair) -> PathPair:
    return PathPair(x.beta, x.alpha)


# --------------------------------------------------------------------------
# linear combinations


class AlgebraElement:
    """Finite linear combination of words with Gaussian-rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for pair, c in (terms or {}).items():
            c = GaussianRational.coerce(c)
            if c:
                clean[pair] = c
        self.terms = clean

    @classmethod
    def of(cls, pair: PathPair, coeff=1) -> "AlgebraElement":
        return cls({pair: coeff})

    @classmethod
    def zero(cls) -> "AlgebraElement":
        return cls()

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = dict(self.terms)
        for p, c in other.terms.items():
            out[p] = out.get(p, GaussianRational()) + c
        return AlgebraElement(out)

    def scale(self, c) -> "AlgebraElement":
        c = GaussianRational.coerce(c)
        return AlgebraElement({p: v * c for p, v in self.terms.items()})

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        out: dict = {}
        for p, a in self.terms.items():
            for q, b in other.terms.items():
                r = multiply(p, q)
                if r is not None:
                    out[r] = out.get(r, GaussianRational()) + a * b
        return AlgebraElement(out)

    def adjoint(self) -> "AlgebraElement":
        return AlgebraElement({adjoint(p): c.conjugate() for p, c in self.terms.items()})

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c!r}*{p}" for p, c in self.items())

    def to_list(self) -> list:
        out = []
        for p, c in self.items():
            item = {"alpha": list(p.alpha.edges), "beta": list(p.beta.edges), "re": str(c.re), "im": str(c.im)}
            if p.length == 0:
                item["vertex"] = p.range
            out.append(item)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_list())

    @classmethod
    def from_list(cls, items: list, graph: FiniteGraph) -> "AlgebraElement":
        from fractions import Fraction

        terms = {}
        for it in items:
            v = it.get("vertex")
            a = Path.from_edges(graph, it["alpha"], start=v)
            b = Path.from_edges(graph, it["beta"], start=v)
            terms[PathPair(a, b)] = GaussianRational(Fraction(it["re"]), Fraction(it.get("im", "0")))
        return cls(terms)


def _as_element(x) -> AlgebraElement:
    return x if isinstance(x, AlgebraElement) else AlgebraElement.of(x)


# --------------------------------------------------------------------------
# path enumeration inside windows


def paths_into(window: GraphWindow, v, length: int) -> list[Path]:
    """All paths of the given length ending at ``v``, in canonical order.

    Raises :class:`WindowTooSmall` if the enumeration would have to expand a
    vertex whose in-edges are not all inside the window.
    """
    g = window.graph
    out = []

    def rec(suffix: tuple, u, remaining: int):
        if remaining == 0:
            out.append(Path(u, suffix, v))
            return
        if u in window.incomplete_in:
            raise WindowTooSmall(f"in-edges of {u!r} leave the window")
        for e in g.in_edges(u):
            rec((e.id,) + suffix, e.src, remaining - 1)

    rec((), v, length)
    out.sort(key=Path.sort_key)
    return out


def loops_at(window: GraphWindow, v, max_length: int) -> list[Path]:
    """Loops at ``v`` of length ``0..max_length`` (the vertex path included)."""
    g = window.graph
    out = [Path.vertex(v)]

    def rec(prefix: tuple, u, depth: int):
        if depth == max_length:
            return
        if u in window.incomplete_out:
            raise WindowTooSmall(f"out-edges of {u!r} leave the window")
        for e in g.out_edges(u):
            path = prefix + (e.id,)
            if e.dst == v:
                out.append(Path(v, path, v))
            rec(path, e.dst, depth + 1)

    rec((), v, 0)
    out.sort(key=Path.sort_key)
    return out


def omega(window: GraphWindow, v, n: int) -> list[PathPair]:
    """Generators ``s_a s_b^*`` with ``r(a) = r(b) = v`` and ``|a| = |b| <= n``."""
    window.require(n, [v])
    gens = []
    for k in range(n + 1):
        ps = paths_into(window, v, k)
        gens.extend(PathPair(a, b) for a in ps for b in ps)
    return gens


def in_omega(x: PathPair, v, n: int) -> bool:
    return x.range == v and x.length <= n


# --------------------------------------------------------------------------
# matrix representation


class SparseMatrix:
    """Square matrix over Q(i) indexed by a fixed basis of paths."""

    __slots__ = ("basis", "index", "entries")

    def __init__(self, basis: tuple, entries: dict | None = None, index: dict | None = None):
        self.basis = basis
        self.index = index if index is not None else {p: i for i, p in enumerate(basis)}
        self.entries = {k: v for k, v in (entries or {}).items() if v}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.basis == other.basis and self.entries == other.entries

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, GaussianRational()) + v
        return SparseMatrix(self.basis, out, self.index)

    def scale(self, c) -> "SparseMatrix":
        c = GaussianRational.coerce(c)
        return SparseMatrix(self.basis, {k: v * c for k, v in self.entries.items()}, self.index)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        by_row: dict = {}
        for (i, j), v in other.entries.items():
            by_row.setdefault(i, []).append((j, v))
        out: dict = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                out[(i, j)] = out.get((i, j), GaussianRational()) + a * b
        return SparseMatrix(self.basis, out, self.index)

    def adjoint(self) -> "SparseMatrix":
        return SparseMatrix(self.basis, {(j, i): v.conjugate() for (i, j), v in self.entries.items()}, self.index)

    def to_dense(self) -> list[list[GaussianRational]]:
        n = self.dim
        rows = [[GaussianRational() for _ in range(n)] for _ in range(n)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["row", "col", "re", "im"])
        for (i, j), v in sorted(self.entries.items()):
            w.writerow([str(self.basis[i]), str(self.basis[j]), str(v.re), str(v.im)])
        return buf.getvalue()


class PhiRepresentation:
    """The map ``s_a s_b^* -> sum_g e[(a g), (b g)]`` over loops ``g`` at ``v``
    with ``|a g| <= n``, into matrices indexed by paths ending at ``v`` of
    length at most ``n``."""

    def __init__(self, window: GraphWindow, v, n: int):
        window.require(2 * n, [v])
        self.window, self.v, self.n = window, v, n
        basis = []
        for k in range(n + 1):
            basis.extend(paths_into(window, v, k))
        self.basis = tuple(basis)
        self.index = {p: i for i, p in enumerate(self.basis)}
        self.loops = loops_at(window, v, n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def zero(self) -> SparseMatrix:
        return SparseMatrix(self.basis, {}, self.index)

    def image(self, x: PathPair) -> SparseMatrix:
        if not in_omega(x, self.v, self.n):
            raise NotInOmega(f"{x} is not a generator of the truncation at {self.v!r}, n={self.n}")
        entries = {}
        room = self.n - x.length
        for g in self.loops:
            if len(g) > room:
                break
            i = self.index[x.alpha + g]
            j = self.index[x.beta + g]
            entries[(i, j)] = GaussianRational(1)
        return SparseMatrix(self.basis, entries, self.index)

    def __call__(self, x) -> SparseMatrix:
        if isinstance(x, PathPair):
            return self.image(x)
        out = self.zero()
        for p, c in _as_element(x).terms.items():
            out = out + self.image(p).scale(c)
        return out


def phi(x, window: GraphWindow, v, n: int) -> SparseMatrix:
    return PhiRepresentation(window, v, n)(x)


@dataclass
class HomomorphismReport:
    vertex: object
    n: int
    n_generators: int = 0
    n_products: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        return {
            "check": "phi is a *-homomorphism on the generators",
            "vertex": str(self.vertex),
            "n": self.n,
            "generators": self.n_generators,
            "products": self.n_products,
            "passed": self.passed,
            "violations": [str(v) for v in self.violations[:20]],
        }


def verify_homomorphism(window: GraphWindow, v, n: int) -> HomomorphismReport:
    """Check ``phi(xy) = phi(x) phi(y)`` and ``phi(x*) = phi(x)*`` on all of
    ``omega(n, v)`` with exact arithmetic."""
    rep = PhiRepresentation(window, v, n)
    gens = omega(window, v, n)
    images = {x: rep.image(x) for x in gens}
    out = HomomorphismReport(v, n, len(gens))
    zero = rep.zero()
    for x in gens:
        if images[adjoint(x)] != images[x].adjoint():
            out.violations.append(("adjoint", x))
        for y in gens:
            xy = multiply(x, y)
            lhs = zero if xy is None else images.get(xy) or rep.image(xy)
            out.n_products += 1
            if lhs != images[x] @ images[y]:
                out.violations.append(("product", x, y))
    return out


@dataclass
class IndependenceReport:
    vertex: object
    n: int
    omega_cardinality: int
    rank: int

    @property
    def passed(self) -> bool:
        return self.rank == self.omega_cardinality

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        return {
            "check": "phi-images of the generators are linearly independent",
            "vertex": str(self.vertex),
            "n": self.n,
            "omega_cardinality": self.omega_cardinality,
            "rank": self.rank,
            "passed": self.passed,
        }


def check_independence_hypothesis(window: GraphWindow) -> None:
    g = window.graph
    if len(g.vertices) < 2:
        raise HypothesisViolated("independence needs a graph with at least two vertices")
    irreducible = is_irreducible(g) if window.closed else "irreducible" in window.asserted
    if not irreducible:
        raise HypothesisViolated("independence needs an irreducible graph")


def verify_independence(window: GraphWindow, v, n: int) -> IndependenceReport:
    """Rank of the phi-images of ``omega(n, v)``, computed over Q."""
    check_independence_hypothesis(window)
    rep = PhiRepresentation(window, v, n)
    gens = omega(window, v, n)
    rank = sparse_rank(rep.image(x).entries for x in gens)
    return IndependenceReport(v, n, len(gens), rank)


@dataclass(frozen=True)
class DimensionReport:
    omega_cardinality: int
    r_n: int
    r_n_squared: int

    @property
    def coincide(self) -> bool:
        return self.omega_cardinality == self.r_n_squared

    def to_dict(self) -> dict:
        return {
            "omega_cardinality": self.omega_cardinality,
            "r_n": self.r_n,
            "r_n_squared": self.r_n_squared,
            "coincide": self.coincide,
        }


def dimension_report(window: GraphWindow, v, n: int) -> DimensionReport:
    counts = count_class(window, v, PathClass.RANGE, n).counts
    r_n = sum(counts)
    return DimensionReport(sum(c * c for c in counts), r_n, r_n * r_n)


# --------------------------------------------------------------------------
# the shift map x -> sum_e s_e x s_e^*


def phi_E(x, window: GraphWindow) -> AlgebraElement:
    out: dict = {}
    g = window.graph
    for p, c in _as_element(x).terms.items():
        u = p.alpha.start
        if p.beta.start != u:
            continue
        if u in window.incomplete_in:
            raise WindowTooSmall(f"in-edges of {u!r} leave the window")
        for e in g.in_edges(u):
            ep = Path(e.src, (e.id,), e.dst)
            q = PathPair(ep + p.alpha, ep + p.beta)
            out[q] = out.get(q, GaussianRational()) + c
    return AlgebraElement(out)


def phi_E_power(x, l: int, window: GraphWindow) -> AlgebraElement:
    """``sum over |mu| = l`` of ``s_(mu a) s_(mu b)^*`` for each term ``s_a s_b^*``."""
    if l < 0:
        raise ValueError("l must be nonnegative")
    x = _as_element(x)
    if l == 0:
        return x
    out: dict = {}
    for p, c in x.terms.items():
        u = p.alpha.start
        if p.beta.start != u:
            continue
        for mu in paths_into(window, u, l):
            q = PathPair(mu + p.alpha, mu + p.beta)
            out[q] = out.get(q, GaussianRational()) + c
    return AlgebraElement(out)


def phi_E_containment(window: GraphWindow, v, n0: int, n: int) -> list:
    """Terms of ``Phi^l(omega(n0, v))``, ``0 <= l < n``, lying outside
    ``omega(n0 + n - 1, v)`` (empty list = containment holds)."""
    bad = []
    for x in omega(window, v, n0):
        for l in range(n):
            for p in phi_E_power(x, l, window).terms:
                if not in_omega(p, v, n0 + n - 1):
                    bad.append((l, x, p))
    return bad


def rank_bound_sequences(window: GraphWindow, v, n_max: int, vset=None, n1: int = 0) -> tuple[CountSeries, CountSeries]:
    """``r(n)`` = paths ending at ``v`` of length at most ``n`` and ``k_n`` =
    paths of length ``n1 + n`` touching ``vset`` (default ``{v}``)."""
    ranges = count_class(window, v, PathClass.RANGE, n_max).counts
    cum, acc = [], 0
    for c in ranges:
        acc += c
        cum.append(acc)
    vset = [v] if vset is None else list(vset)
    k = through_set_series(window, vset, n1 + n_max)[n1:]
    return (
        CountSeries(v, None, tuple(cum), window.radius, kind="r(n)"),
        CountSeries(v, None, tuple(k), window.radius, kind="k_n"),
    )

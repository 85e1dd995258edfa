"""Built-in graph families and family spec files.

The Salama graphs are ray-with-return-trunk graphs.  The bottom ray is
``0 = b0, b1, b2, ...`` with ``r_k`` parallel edges ``b(k-1) -> bk``.  Each
``bk`` has one edge up to ``v_k``, and a single shared trunk runs
``... -> t3 -> t2 -> t1 -> 0``; ``v_k`` is the trunk vertex ``t(l_k - 1)``,
so the way back from ``v_k`` to ``v_(k-1)`` has length ``l_k - l_(k-1)``.
First-return loops at ``0`` therefore have lengths ``k + l_k`` with
multiplicity ``r_1 * ... * r_k`` (plus the optional base self-loop).
"""

from __future__ import annotations

import bisect
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

import sympy

from .errors import InvalidParams, ParseError, UnknownFamily
from .graph import Edge, FiniteGraph, FiniteGraphOracle, GraphOracle, is_irreducible, read_edge_list

ROOT = "0"


class IntSequence:
    """Positive integer sequence ``k -> a_k`` for ``k >= 1``.

    Spec strings::

        const:c          a_k = c
        affine:a,b       a_k = a*k + b
        list:x1,x2,...|RULE
                         explicit head, RULE (a const/affine spec) for k > len(head)
    """

    def __init__(self, fn: Callable[[int], int], text: str):
        self._fn = fn
        self.text = text

    def __call__(self, k: int) -> int:
        if k < 1:
            raise IndexError("sequences are indexed from k = 1")
        return int(self._fn(k))

    def __repr__(self) -> str:
        return f"IntSequence({self.text!r})"

    def __eq__(self, other):
        return isinstance(other, IntSequence) and self.text == other.text

    def __hash__(self):
        return hash(self.text)

    @classmethod
    def const(cls, c: int) -> "IntSequence":
        return cls(lambda k: c, f"const:{c}")

    @classmethod
    def affine(cls, a: int, b: int) -> "IntSequence":
        return cls(lambda k: a * k + b, f"affine:{a},{b}")

    @classmethod
    def parse(cls, text: str) -> "IntSequence":
        text = text.strip()
        try:
            kind, _, body = text.partition(":")
            if kind == "const":
                return cls.const(int(body))
            if kind == "affine":
                a, b = (int(x) for x in body.split(","))
                return cls.affine(a, b)
            if kind == "list":
                head_txt, sep, tail_txt = body.partition("|")
                head = [int(x) for x in head_txt.split(",") if x.strip()]
                if not head or not sep:
                    raise ValueError("list needs a head and a tail rule")
                tail = cls.parse(tail_txt)
                return cls(lambda k: head[k - 1] if k <= len(head) else tail(k), text)
        except ValueError as exc:
            raise ParseError(f"bad sequence spec {text!r}: {exc}") from None
        raise ParseError(f"bad sequence spec {text!r}")

    def symbolic_term(self, k: sympy.Symbol):
        """Closed form in ``k`` valid for large ``k`` (the tail rule)."""
        kind, _, body = self.text.partition(":")
        if kind == "const":
            return sympy.Integer(int(body))
        if kind == "affine":
            a, b = (int(x) for x in body.split(","))
            return a * k + b
        if kind == "list":
            return IntSequence.parse(body.partition("|")[2]).symbolic_term(k)
        raise ValueError(f"no closed form for {self.text!r}")

    def head_length(self) -> int:
        kind, _, body = self.text.partition(":")
        if kind == "list":
            return len([x for x in body.partition("|")[0].split(",") if x.strip()])
        return 0


def _as_sequence(x) -> IntSequence:
    if isinstance(x, IntSequence):
        return x
    if isinstance(x, str):
        return IntSequence.parse(x)
    if isinstance(x, int):
        return IntSequence.const(x)
    raise InvalidParams(f"cannot interpret {x!r} as an integer sequence")


@dataclass(frozen=True)
class SalamaParams:
    r_seq: IntSequence
    l_seq: IntSequence
    base_loop: bool = True

    def __post_init__(self):
        object.__setattr__(self, "r_seq", _as_sequence(self.r_seq))
        object.__setattr__(self, "l_seq", _as_sequence(self.l_seq))

    def validate(self, horizon: int = 2000) -> None:
        """Check ``r_k >= 1``, ``l_1 >= 1`` and ``l_k + 1 <= l_(k+1)`` up to ``horizon``."""
        if self.l_seq(1) < 1:
            raise InvalidParams("l_1 must be at least 1")
        prev = None
        for k in range(1, horizon + 1):
            if self.r_seq(k) < 1:
                raise InvalidParams(f"r_{k} = {self.r_seq(k)} < 1")
            lk = self.l_seq(k)
            if prev is not None and lk < prev + 1:
                raise InvalidParams(f"l_{k} = {lk} violates l_(k-1) + 1 <= l_k")
            prev = lk


@dataclass(frozen=True)
class KnownEntropies:
    """Published entropy values, kept as metadata for comparison only."""

    h_l: float
    h_b: float
    h_b_t: float
    provenance: str

    def __post_init__(self):
        if not self.provenance:
            raise InvalidParams("known entropies need a provenance string")


@dataclass(frozen=True)
class FamilyDescriptor:
    name: str
    params: dict
    asserted_properties: frozenset = frozenset()
    known_entropies: KnownEntropies | None = None
    label: str | None = None
    notes: tuple = field(default_factory=tuple)


class SalamaGraph(GraphOracle):
    """Oracle for the Salama graph with the given parameters.

    Vertex labels: ``"0"`` (root), ``"b<k>"`` on the ray, ``"t<d>"`` on the
    trunk at distance ``d`` above ``0``.  Edge ids: ``"loop"``,
    ``"r<k>.<j>"`` (j-th parallel edge into ``bk``), ``"u<k>"``
    (``bk -> v_k``) and ``"c<d>"`` (``t<d> -> t<d-1>``).
    """

    def __init__(self, params: SalamaParams):
        params.validate()
        self.params = params
        self.root = ROOT
        self.asserted = frozenset({"irreducible", "locally_finite"})
        self._l_cache = [params.l_seq(1)]

    def _l(self, k: int) -> int:
        while len(self._l_cache) < k:
            nk = len(self._l_cache) + 1
            val = self.params.l_seq(nk)
            if val < self._l_cache[-1] + 1:
                raise InvalidParams(f"l_{nk} = {val} violates l_(k-1) + 1 <= l_k")
            self._l_cache.append(val)
        return self._l_cache[k - 1]

    def _k_at_trunk(self, d: int) -> int | None:
        """The k with ``l_k - 1 == d``, if any."""
        # l_k >= k, so any match has k <= d + 1
        self._l(d + 1)
        i = bisect.bisect_left(self._l_cache, d + 1, 0, d + 1)
        if i < d + 1 and self._l_cache[i] == d + 1:
            return i + 1
        return None

    @staticmethod
    def _parse(v):
        v = str(v)
        if v == ROOT:
            return ("b", 0)
        kind, num = v[0], v[1:]
        if kind in "bt" and num.isdigit() and int(num) > 0:
            return (kind, int(num))
        raise KeyError(f"no vertex {v!r} in this Salama graph")

    @staticmethod
    def _trunk(d: int) -> str:
        return ROOT if d == 0 else f"t{d}"

    @staticmethod
    def _ray(k: int) -> str:
        return ROOT if k == 0 else f"b{k}"

    def out_edges(self, v):
        kind, n = self._parse(v)
        v = str(v)
        edges = []
        if kind == "b":
            if n == 0 and self.params.base_loop:
                edges.append(Edge("loop", ROOT, ROOT))
            r = self.params.r_seq(n + 1)
            edges.extend(Edge(f"r{n + 1}.{j}", v, self._ray(n + 1)) for j in range(1, r + 1))
            if n >= 1:
                edges.append(Edge(f"u{n}", v, self._trunk(self._l(n) - 1)))
        else:
            edges.append(Edge(f"c{n}", v, self._trunk(n - 1)))
        return edges

    def in_edges(self, v):
        kind, n = self._parse(v)
        v = str(v)
        edges = []
        if kind == "b" and n >= 1:
            edges.extend(Edge(f"r{n}.{j}", self._ray(n - 1), v) for j in range(1, self.params.r_seq(n) + 1))
            return edges
        d = 0 if kind == "b" else n
        if d == 0 and self.params.base_loop:
            edges.append(Edge("loop", ROOT, ROOT))
        k = self._k_at_trunk(d)
        if k is not None:
            edges.append(Edge(f"u{k}", self._ray(k), v))
        edges.append(Edge(f"c{d + 1}", f"t{d + 1}", v))
        return edges

    def first_return_lengths(self, k_max: int) -> list[tuple[int, int]]:
        """``(length, multiplicity)`` of first-return loops at 0 through ``b1..b(k_max)``."""
        out = [(1, 1)] if self.params.base_loop else []
        mult = 1
        for k in range(1, k_max + 1):
            mult *= self.params.r_seq(k)
            out.append((k + self._l(k), mult))
        return out


def salama(params: SalamaParams) -> SalamaGraph:
    return SalamaGraph(params)


def salama_renewal_sum(params: SalamaParams, rho) -> sympy.Expr:
    """Exact value of the first-return generating function at ``rho``.

    Uses the closed forms of the tail rules, so it handles the infinite sum
    symbolically.  The loop entropy equals ``-log rho`` when this is 1.
    """
    k = sympy.Symbol("k", integer=True, positive=True)
    rho = sympy.nsimplify(rho)
    head = params.r_seq.head_length()
    total = rho if params.base_loop else sympy.Integer(0)
    # product r_1..r_k: explicit head, then tail rule which must be constant
    r_tail = params.r_seq.symbolic_term(k)
    if r_tail.free_symbols:
        raise InvalidParams("symbolic renewal sums need a constant tail for r")
    prod = sympy.Integer(1)
    for j in range(1, head + 1):
        prod *= params.r_seq(j)
        total += prod * rho ** (j + params.l_seq(j))
    l_term = params.l_seq.symbolic_term(k)
    tail = prod * r_tail ** (k - head) * rho ** (k + l_term)
    total += sympy.summation(tail, (k, head + 1, sympy.oo))
    return sympy.simplify(total)


def salama_2_8() -> tuple[SalamaGraph, FamilyDescriptor]:
    """Salama's graph with loop entropy log 2 and block entropy log 8."""
    params = SalamaParams(IntSequence.const(8), IntSequence.affine(3, 1), True)
    desc = FamilyDescriptor(
        name="salama_2_8",
        params={"r": "const:8", "l": "affine:3,1", "base_loop": True},
        asserted_properties=frozenset({"irreducible", "locally_finite"}),
        known_entropies=KnownEntropies(
            h_l=math.log(2),
            h_b=math.log(8),
            h_b_t=math.log(2),
            provenance="published values for Salama's graph E_{2,8}: h_l = log 2, h_b = log 8, h_b(tE) = h_l",
        ),
    )
    return salama(params), desc


def salama_pp_params(p: int) -> SalamaParams:
    """Integer member of the E_p family: ``l_k = k + 1``, base loop,
    ``r_k = p`` for ``k >= 2`` and ``r_1 = p (p - 1)^2``.

    The first ray step is widened so that the first-return series sums to
    exactly 1 at ``1/p``; for ``p = 2`` this is the plain ``r_k = 2`` graph.
    """
    if not isinstance(p, int) or p < 2:
        raise InvalidParams(f"p must be an integer >= 2, got {p!r}")
    r1 = p * (p - 1) ** 2
    r_seq = IntSequence.const(p) if r1 == p else IntSequence.parse(f"list:{r1}|const:{p}")
    return SalamaParams(r_seq, IntSequence.affine(1, 1), True)


def salama_pp(p: int) -> tuple[SalamaGraph, FamilyDescriptor]:
    params = salama_pp_params(p)
    value = salama_renewal_sum(params, Fraction(1, p))
    if value != 1:
        raise InvalidParams(f"renewal identity fails for p={p}: sum = {value}")
    h = math.log(p)
    desc = FamilyDescriptor(
        name="salama_pp",
        params={"p": p, "r": params.r_seq.text, "l": params.l_seq.text, "base_loop": True},
        asserted_properties=frozenset({"irreducible", "locally_finite"}),
        known_entropies=KnownEntropies(
            h_l=h,
            h_b=h,
            h_b_t=h,
            provenance=(
                f"Salama graph E_p with p={p}: h_l = h_b = log p; "
                "first-return series verified to equal 1 at 1/p"
            ),
        ),
    )
    return salama(params), desc


def random_strongly_connected(n_vertices: int, density: float, seed: int) -> FiniteGraph:
    """Random strongly connected multigraph on vertices ``"0".."n-1"``.

    A random Hamiltonian cycle guarantees strong connectivity; every ordered
    pair (self-loops included) then gets an extra edge with probability
    ``density``.  If that adds nothing while ``density > 0`` one extra edge
    is forced, so some vertex has out-degree at least 2.
    """
    if n_vertices < 1:
        raise InvalidParams("n_vertices must be >= 1")
    rng = random.Random(seed)
    labels = [str(i) for i in range(n_vertices)]
    order = labels[:]
    rng.shuffle(order)
    pairs = [(order[i], order[(i + 1) % n_vertices]) for i in range(n_vertices)]
    extra = [(a, b) for a in labels for b in labels if rng.random() < density]
    if density > 0 and not extra:
        extra = [(rng.choice(labels), rng.choice(labels))]
    edges = [Edge(f"e{i + 1}", a, b) for i, (a, b) in enumerate(pairs + extra)]
    return FiniteGraph(labels, edges)


# --------------------------------------------------------------------------
# family spec files

_SCHEMAS = {
    "salama_2_8": set(),
    "salama_pp": {"p"},
    "salama": {"r", "l", "base_loop"},
    "finite": {"path"},
    "random_strongly_connected": {"n_vertices", "density", "seed"},
}
_COMMON = {"family", "label"}


def family_from_dict(spec: dict, base_dir: Path | None = None):
    """Instantiate a family from a parsed spec object.

    Returns ``(graph, descriptor)`` where ``graph`` is a :class:`GraphOracle`
    for infinite families and a :class:`FiniteGraph` otherwise.
    """
    if not isinstance(spec, dict) or "family" not in spec:
        raise ParseError("family spec must be an object with a 'family' field")
    name = spec["family"]
    if name not in _SCHEMAS:
        raise UnknownFamily(f"unknown family {name!r}")
    allowed = _SCHEMAS[name] | _COMMON
    unknown = set(spec) - allowed
    if unknown:
        raise ParseError(f"unknown fields for family {name!r}: {sorted(unknown)}")
    missing = _SCHEMAS[name] - set(spec) - {"base_loop"}
    if missing:
        raise ParseError(f"missing fields for family {name!r}: {sorted(missing)}")
    label = spec.get("label")

    if name == "salama_2_8":
        graph, desc = salama_2_8()
    elif name == "salama_pp":
        graph, desc = salama_pp(spec["p"])
    elif name == "salama":
        params = SalamaParams(
            IntSequence.parse(str(spec["r"])),
            IntSequence.parse(str(spec["l"])),
            bool(spec.get("base_loop", True)),
        )
        graph = salama(params)
        desc = FamilyDescriptor(
            name="salama",
            params={"r": params.r_seq.text, "l": params.l_seq.text, "base_loop": params.base_loop},
            asserted_properties=frozenset({"irreducible", "locally_finite"}),
        )
    elif name == "finite":
        path = Path(spec["path"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        try:
            graph = read_edge_list(path)
        except OSError as exc:
            raise ParseError(f"cannot read edge list {path}: {exc}") from None
        flags = {"locally_finite"} | ({"irreducible"} if is_irreducible(graph) else set())
        desc = FamilyDescriptor(name="finite", params={"path": str(spec["path"])}, asserted_properties=frozenset(flags))
    else:
        try:
            graph = random_strongly_connected(int(spec["n_vertices"]), float(spec["density"]), int(spec["seed"]))
        except (TypeError, ValueError) as exc:
            raise InvalidParams(str(exc)) from None
        desc = FamilyDescriptor(
            name=name,
            params={k: spec[k] for k in ("n_vertices", "density", "seed")},
            asserted_properties=frozenset({"irreducible", "locally_finite"}),
        )
    if label is not None:
        desc = FamilyDescriptor(desc.name, desc.params, desc.asserted_properties, desc.known_entropies, label)
    return graph, desc


def load_family(path):
    path = Path(path)
    try:
        spec = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot parse family spec {path}: {exc}") from None
    return family_from_dict(spec, base_dir=path.parent)


def as_oracle(graph) -> GraphOracle:
    """Wrap a :class:`FiniteGraph` as an oracle; oracles pass through."""
    return FiniteGraphOracle(graph) if isinstance(graph, FiniteGraph) else graph

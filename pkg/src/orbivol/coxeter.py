"""Coxeter symbols, diagrams and Gram matrices.

A diagram has nodes 0..n-1 and at most one edge per pair.  An edge either
carries a weight q/p > 2 (dihedral angle p pi / q), an explicit angle in
radians (for the prism family P(alpha)), or is dashed, meaning the two
hyperplanes are ultraparallel at distance ``length`` (possibly unknown).
Absent edges are right angles.

Symbols follow the bracket notation: ``[5,3,3,3,4]`` is a linear chain,
``[5,3,3,3,3^{1,1}]`` a chain whose last node carries two branches, and
``[3^{i,j,k}]`` a Y-shaped diagram with arms of i, j and k edges.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

import mpmath
from mpmath import mp, mpf

from .errors import (
    AmbiguityError,
    DiagramError,
    NonRealizableError,
    ParseError,
    UnresolvedEdgeError,
)
from .numkernel import precision, resolve_digits

SCHEMA = "orbivol.diagram/1"


@dataclass(frozen=True)
class Edge:
    i: int
    j: int
    weight: Fraction | None = None
    angle: mpf | None = None
    dashed: bool = False
    length: mpf | None = None

    def __post_init__(self):
        if self.i == self.j:
            raise DiagramError(f"self-loop at node {self.i}")
        if self.dashed:
            if self.weight is not None or self.angle is not None:
                raise DiagramError(f"dashed edge {self.key} cannot carry an angle")
            if self.length is not None and not mpf(self.length) > 0:
                raise DiagramError(f"dashed edge {self.key} needs a positive length")
        elif self.weight is not None:
            if self.angle is not None:
                raise DiagramError(f"edge {self.key} has both weight and angle")
            if not self.weight > 2:
                raise DiagramError(f"edge {self.key}: weight {self.weight} must exceed 2")
        elif self.angle is None:
            raise DiagramError(f"edge {self.key} needs a weight, an angle or a dashed marker")
        elif not 0 < mpf(self.angle) < mp.pi / 2 + mpf(10) ** (-(mp.dps - 3)):
            raise DiagramError(f"edge {self.key}: angle must lie in (0, pi/2]")

    @property
    def key(self) -> tuple[int, int]:
        return (min(self.i, self.j), max(self.i, self.j))

    def gram_entry(self) -> mpf:
        if self.dashed:
            if self.length is None:
                raise UnresolvedEdgeError(f"dashed edge {self.key} has unknown length")
            return -mpmath.cosh(self.length)
        if self.weight is not None:
            return -mpmath.cos(mp.pi * self.weight.denominator / self.weight.numerator)
        return -mpmath.cos(self.angle)


@dataclass(frozen=True)
class CoxeterDiagram:
    n: int
    edges: tuple[Edge, ...] = ()
    symbol: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise DiagramError("a diagram needs at least one node")
        seen = set()
        for e in self.edges:
            if not (0 <= e.i < self.n and 0 <= e.j < self.n):
                raise DiagramError(f"edge {e.key} refers to a node outside 0..{self.n - 1}")
            if e.key in seen:
                raise DiagramError(f"more than one edge between nodes {e.key}")
            seen.add(e.key)

    def edge(self, i: int, j: int) -> Edge | None:
        key = (min(i, j), max(i, j))
        for e in self.edges:
            if e.key == key:
                return e
        return None

    def solid_connected(self) -> bool:
        """Whether the graph is connected after dropping dashed edges."""
        adj = {k: set() for k in range(self.n)}
        for e in self.edges:
            if not e.dashed:
                adj[e.i].add(e.j)
                adj[e.j].add(e.i)
        stack, seen = [0], {0}
        while stack:
            for m in adj[stack.pop()]:
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        return len(seen) == self.n

    def with_edge(self, edge: Edge) -> "CoxeterDiagram":
        others = tuple(e for e in self.edges if e.key != edge.key)
        return CoxeterDiagram(self.n, others + (edge,), self.symbol)

    def unknown_dashed(self) -> list[tuple[int, int]]:
        return [e.key for e in self.edges if e.dashed and e.length is None]

    def subdiagram(self, nodes) -> "CoxeterDiagram":
        nodes = list(nodes)
        index = {v: k for k, v in enumerate(nodes)}
        edges = tuple(
            replace(e, i=index[e.i], j=index[e.j]) for e in self.edges if e.i in index and e.j in index
        )
        return CoxeterDiagram(len(nodes), edges)


# --- symbols -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:3\^\{(?P<arms>[\d\s,]+)\}|(?P<num>\d+)(?:/(?P<den>\d+))?)\s*")


def parse_symbol(s: str) -> CoxeterDiagram:
    """Parse a bracketed Coxeter symbol into a diagram without dashed edges."""
    text = s.strip()
    if not text.startswith("["):
        raise ParseError("symbol must start with '['", 0)
    if not text.endswith("]"):
        raise ParseError("symbol must end with ']'", len(text))
    pos = 1
    weights: list[Fraction] = []
    arms: list[int] | None = None
    body_end = len(text) - 1
    if text[pos:body_end].strip() == "":
        return CoxeterDiagram(1, (), "[]")
    while True:
        m = _TOKEN.match(text, pos, body_end)
        if not m or m.end() == pos:
            raise ParseError("expected a weight or a 3^{...} branch token", pos)
        if arms is not None:
            raise ParseError("the 3^{...} branch token must be last", m.start())
        if m.group("arms") is not None:
            parts = [p.strip() for p in m.group("arms").split(",")]
            if len(parts) < 2 or not all(p.isdigit() and int(p) >= 1 for p in parts):
                raise ParseError("branch token needs at least two positive arm lengths", m.start("arms"))
            arms = [int(p) for p in parts]
        else:
            num, den = int(m.group("num")), int(m.group("den") or 1)
            if den == 0:
                raise ParseError("zero denominator", m.start("den"))
            w = Fraction(num, den)
            if not w > 2:
                raise DiagramError(f"weight {w} at position {m.start('num')} must exceed 2")
            weights.append(w)
        pos = m.end()
        if pos == body_end:
            break
        if text[pos] != ",":
            raise ParseError("expected ','", pos)
        pos += 1
    edges = [Edge(k, k + 1, weight=w) for k, w in enumerate(weights)]
    n = len(weights) + 1
    if arms is not None:
        centre = len(weights)
        for length in arms:
            prev = centre
            for _ in range(length):
                edges.append(Edge(prev, n, weight=Fraction(3)))
                prev = n
                n += 1
    return CoxeterDiagram(n, tuple(edges), render_weights(weights, arms))


def _fmt_weight(w: Fraction) -> str:
    return str(w.numerator) if w.denominator == 1 else f"{w.numerator}/{w.denominator}"


def render_weights(weights, arms=None) -> str:
    items = [_fmt_weight(w) for w in weights]
    if arms is not None:
        items.append("3^{" + ",".join(str(a) for a in arms) + "}")
    return "[" + ",".join(items) + "]"


def render_symbol(d: CoxeterDiagram) -> str:
    """Canonical symbol of a chain or chain-plus-branch diagram (dashed edges ignored).

    Chains are read from node 0's end; trees whose weights are all 3 are
    written in the Y form [3^{i,j,k}]; branch arm lengths are listed in
    decreasing order.
    """
    solid = [e for e in d.edges if not e.dashed]
    if any(e.weight is None for e in solid):
        raise DiagramError("only diagrams with rational weights have a symbol")
    adj = {k: {} for k in range(d.n)}
    for e in solid:
        adj[e.i][e.j] = e.weight
        adj[e.j][e.i] = e.weight
    if d.n == 1:
        return "[]"
    branch = [k for k in range(d.n) if len(adj[k]) > 2]
    if len(branch) > 1 or not d.solid_connected() or len(solid) != d.n - 1:
        raise DiagramError("diagram is not a chain or a single-branch tree")
    if not branch:
        start = min(k for k in range(d.n) if len(adj[k]) == 1)
        order, prev = [start], None
        while len(order) < d.n:
            nxt = [m for m in adj[order[-1]] if m != prev]
            prev = order[-1]
            order.append(nxt[0])
        return render_weights([adj[a][b] for a, b in zip(order, order[1:])])
    centre = branch[0]
    walks = []
    for start in adj[centre]:
        path, prev, cur = [adj[centre][start]], centre, start
        while len(adj[cur]) == 2:
            nxt = [m for m in adj[cur] if m != prev][0]
            path.append(adj[cur][nxt])
            prev, cur = cur, nxt
        walks.append(path)
    # the longest walk (or the one with non-3 weights) becomes the chain prefix
    walks.sort(key=lambda w: (any(x != 3 for x in w), len(w)), reverse=True)
    head, arms = walks[0], walks[1:]
    if any(x != 3 for a in arms for x in a):
        raise DiagramError("branch arms must carry weight 3")
    if all(x == 3 for x in head):
        arms = walks
        return render_weights([], sorted((len(a) for a in arms), reverse=True))
    return render_weights(list(reversed(head)), sorted((len(a) for a in arms), reverse=True))


# --- Gram matrices and inertia -----------------------------------------------


def gram(d: CoxeterDiagram, digits: int | None = None) -> mpmath.matrix:
    with precision(digits):
        G = mp.eye(d.n)
        for e in d.edges:
            v = e.gram_entry()
            G[e.i, e.j] = v
            G[e.j, e.i] = v
        return G


@dataclass(frozen=True)
class Inertia:
    positive: int
    negative: int
    zero: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.positive, self.negative, self.zero)


def default_inertia_tol(digits: int | None = None) -> mpf:
    d = resolve_digits(digits)
    with precision(d):
        return mpf(10) ** (-(d // 2))


def inertia(G, tol=None, digits: int | None = None) -> Inertia:
    """Sign counts of the eigenvalues of a symmetric matrix."""
    with precision(digits):
        G = mpmath.matrix(G)
        if G.rows != G.cols:
            raise DiagramError("Gram matrix must be square")
        tol = default_inertia_tol(digits) if tol is None else mpf(tol)
        evals = mp.eigsy(G, eigvals_only=True)
        pos = sum(1 for x in evals if x > tol)
        neg = sum(1 for x in evals if x < -tol)
        return Inertia(pos, neg, G.rows - pos - neg)


def eigenvalues(G, digits: int | None = None) -> list[mpf]:
    with precision(digits):
        return sorted(mp.eigsy(mpmath.matrix(G), eigvals_only=True))


# --- dashed edges --------------------------------------------------------------


def _det_at(d: CoxeterDiagram, key, c) -> mpf:
    G = gram(d.with_edge(Edge(*key, dashed=True, length=mpf(1))), None)
    G[key[0], key[1]] = -c
    G[key[1], key[0]] = -c
    return mp.det(G)


@dataclass(frozen=True)
class DashedSolution:
    length: mpf
    cosh: mpf
    det_residual: mpf
    inertia: Inertia


def solve_dashed_detail(d: CoxeterDiagram, edge: tuple[int, int], dim: int | None = None, digits: int | None = None) -> DashedSolution:
    """Length l of the dashed edge making the Gram matrix singular.

    det G is a quadratic in c = cosh l; among its real roots with c > 1 the
    one giving Lorentzian inertia (dim, 1, n - dim - 1) is returned.
    """
    key = (min(edge), max(edge))
    e = d.edge(*key)
    if e is None or not e.dashed:
        raise DiagramError(f"no dashed edge between nodes {key}")
    unknown = d.unknown_dashed()
    others = [k for k in unknown if k != key]
    if others:
        raise UnresolvedEdgeError(f"dashed edges {others} also have unknown length")
    dim = d.n - 2 if dim is None else dim
    want = (dim, 1, d.n - dim - 1)
    with precision(digits):
        f0, f1, f2 = (_det_at(d, key, mpf(c)) for c in (0, 1, 2))
        a = (f2 - 2 * f1 + f0) / 2
        b = f1 - f0 - a
        c0 = f0
        scale = max(abs(a), abs(b), abs(c0), mpf(1))
        eps = mpf(10) ** (-(mp.dps - 5)) * scale
        if abs(a) <= eps:
            roots = [] if abs(b) <= eps else [-c0 / b]
        else:
            disc = b * b - 4 * a * c0
            if disc < -eps:
                roots = []
            else:
                sq = mpmath.sqrt(max(disc, mpf(0)))
                roots = sorted({(-b - sq) / (2 * a), (-b + sq) / (2 * a)})
        one = 1 + mpf(10) ** (-(mp.dps // 2))
        candidates = []
        for c in roots:
            if c <= one:
                continue
            l = mpmath.acosh(c)
            sol = d.with_edge(Edge(*key, dashed=True, length=l))
            G = gram(sol)
            inert = inertia(G, digits=digits)
            if inert.as_tuple() == want:
                candidates.append(DashedSolution(l, c, abs(mp.det(G)), inert))
        if not candidates:
            found = ", ".join(mpmath.nstr(r, 12) for r in roots) or "none"
            raise NonRealizableError(
                f"no cosh(l) > 1 gives inertia {want} for edge {key} (real roots of det: {found})"
            )
        if len(candidates) > 1:
            raise AmbiguityError(
                f"two lengths realize edge {key}", [mpmath.nstr(s.length, 20) for s in candidates]
            )
        return candidates[0]


def solve_dashed(d: CoxeterDiagram, edge: tuple[int, int], dim: int | None = None, digits: int | None = None) -> mpf:
    return solve_dashed_detail(d, edge, dim, digits).length


def resolve(d: CoxeterDiagram, edge: tuple[int, int], dim: int | None = None, digits: int | None = None) -> CoxeterDiagram:
    """The diagram with the unknown dashed edge replaced by its solved length."""
    l = solve_dashed(d, edge, dim, digits)
    return d.with_edge(Edge(min(edge), max(edge), dashed=True, length=l))


# --- the prisms P(alpha) and the double P1 -------------------------------------


def prism_diagram(alpha=None, attach: int = 5, weight=None) -> CoxeterDiagram:
    """Chain [5,3,3,3,alpha] plus the polar node 6 dashed to ``attach``.

    The truncated vertex is the one where facets 0..4 meet (their subdiagram
    [5,3,3,3] is hyperbolic), so the polar mirror is orthogonal to them and
    ultraparallel to facet 5.  Pass ``weight`` (e.g. Fraction(4)) for a
    rational last angle, or ``alpha`` in radians.
    """
    if not 0 <= attach <= 5:
        raise DiagramError("attach must be a chain node 0..5")
    if (alpha is None) == (weight is None):
        raise DiagramError("give exactly one of alpha and weight")
    last = Edge(4, 5, weight=Fraction(weight)) if weight is not None else Edge(4, 5, angle=mpf(alpha))
    chain = [Edge(0, 1, weight=Fraction(5))] + [Edge(k, k + 1, weight=Fraction(3)) for k in (1, 2, 3)]
    return CoxeterDiagram(7, tuple(chain + [last, Edge(attach, 6, dashed=True)]))


def polytope_diagram(pid: str, digits: int | None = None) -> CoxeterDiagram:
    """Fully resolved diagrams of P0, P1, P2 with dashed lengths solved."""
    if pid in ("P0", "P2"):
        d = prism_diagram(weight=3 if pid == "P0" else 4)
        return resolve(d, (5, 6), digits=digits)
    if pid == "P1":
        l0 = solve_dashed(prism_diagram(weight=3), (5, 6), digits=digits)
        d = parse_symbol("[5,3,3,3,3^{1,1}]")
        with precision(digits):
            return d.with_edge(Edge(5, 6, dashed=True, length=2 * l0))
    raise DiagramError(f"unknown polytope {pid!r}")


# --- JSON diagram files -----------------------------------------------------------


def diagram_to_dict(d: CoxeterDiagram, digits: int | None = None) -> dict:
    dd = resolve_digits(digits)
    edges = []
    for e in sorted(d.edges, key=lambda e: e.key):
        rec = {"i": e.key[0], "j": e.key[1]}
        if e.dashed:
            rec["dashed"] = True
            rec["length"] = None if e.length is None else mpmath.nstr(e.length, dd, strip_zeros=False)
        elif e.weight is not None:
            rec["weight"] = _fmt_weight(e.weight)
        else:
            rec["angle"] = mpmath.nstr(e.angle, dd, strip_zeros=False)
        edges.append(rec)
    return {"schema": SCHEMA, "nodes": d.n, "edges": edges}


def diagram_from_dict(data: dict, digits: int | None = None) -> CoxeterDiagram:
    from .cli_expr import parse_expr

    try:
        n = data["nodes"]
        n = len(n) if isinstance(n, list) else int(n)
        edges = []
        with precision(digits):
            for rec in data.get("edges", []):
                i, j = int(rec["i"]), int(rec["j"])
                if rec.get("dashed"):
                    length = rec.get("length")
                    edges.append(Edge(i, j, dashed=True, length=None if length is None else parse_expr(str(length))))
                elif "weight" in rec:
                    edges.append(Edge(i, j, weight=Fraction(str(rec["weight"]))))
                elif "angle" in rec:
                    edges.append(Edge(i, j, angle=parse_expr(str(rec["angle"]))))
                else:
                    raise DiagramError(f"edge record {rec} needs weight, angle or dashed")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DiagramError):
            raise
        raise DiagramError(f"malformed diagram record: {exc}") from None
    return CoxeterDiagram(n, tuple(edges))


def load_diagram(path: str | Path, digits: int | None = None) -> CoxeterDiagram:
    return diagram_from_dict(json.loads(Path(path).read_text()), digits)


def dump_diagram(d: CoxeterDiagram, path: str | Path, digits: int | None = None) -> None:
    Path(path).write_text(json.dumps(diagram_to_dict(d, digits), indent=2) + "\n")

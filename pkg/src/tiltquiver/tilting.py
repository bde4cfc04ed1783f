"""Tilting modules, add(T)-approximations, mutation and the Hasse diagram.

A vertex of the diagram is a basic tilting module, stored as the ordered
list of its indecomposable summands.  An arrow ``T -> T'`` exists when
``T = X + Tbar`` and ``T' = Y + Tbar`` with a non-split exact sequence
``0 -> X -> M -> Y -> 0`` and ``M`` in ``add(Tbar)``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence

from .algebra import AlgebraPresentation
from .exactla import Mat, hstack, solve, vstack
from .repmod import (ExceedsCap, Morphism, Representation, cokernel, direct_sum_module,
                     dual_regular, endo_structure, ext_dim, fingerprint, hom_space,
                     identity, is_indecomposable, is_isomorphic, kernel, pd, regular)


class VertexCapExceeded(RuntimeError):
    pass


class MutationRejected(ValueError):
    pass


class NotTilting(ValueError):
    """A diagram was asked to start from a module that is not tilting."""


class TiltingCandidate:
    """Ordered list of indecomposable summands ``T_1 + ... + T_n``."""

    def __init__(self, summands: Sequence[Representation], label: str = ""):
        summands = list(summands)
        if not summands:
            raise ValueError("a candidate needs at least one summand")
        self.summands = tuple(summands)
        self.algebra = summands[0].algebra
        self.label = label
        self._pds: dict = {}

    def __len__(self):
        return len(self.summands)

    def __iter__(self):
        return iter(self.summands)

    def __getitem__(self, i):
        return self.summands[i]

    @property
    def module(self) -> Representation:
        m = getattr(self, "_module", None)
        if m is None:
            m = direct_sum_module(self.summands)
            self._module = m
        return m

    def fingerprint(self) -> tuple:
        return tuple(sorted(fingerprint(s) for s in self.summands))

    def pd(self, i: int, cap: int) -> int:
        if i not in self._pds:
            self._pds[i] = pd(self.summands[i], cap)
        return self._pds[i]

    def replace(self, i: int, new: Representation) -> "TiltingCandidate":
        s = list(self.summands)
        s[i] = new
        return TiltingCandidate(s)

    def rest(self, i: int) -> list:
        return [s for j, s in enumerate(self.summands) if j != i]

    def dimvecs(self) -> list:
        return [s.dimvec for s in self.summands]

    def __repr__(self):
        return f"TiltingCandidate({self.label or self.dimvecs()})"


def regular_candidate(algebra: AlgebraPresentation) -> TiltingCandidate:
    return TiltingCandidate(regular(algebra), label="A")


def dual_regular_candidate(algebra: AlgebraPresentation) -> TiltingCandidate:
    return TiltingCandidate(dual_regular(algebra), label="DA")


def same_candidate(a: TiltingCandidate, b: TiltingCandidate, seed: int = 0) -> bool:
    """Equality up to isomorphism of the summand multisets."""
    if len(a) != len(b) or a.fingerprint() != b.fingerprint():
        return False
    used = set()
    for s in a.summands:
        fs = fingerprint(s)
        for j, t in enumerate(b.summands):
            if j not in used and fingerprint(t) == fs and is_isomorphic(s, t, seed):
                used.add(j)
                break
        else:
            return False
    return True


def in_add(x: Representation, gens: Sequence[Representation], seed: int = 0) -> bool:
    """Whether an indecomposable ``x`` is isomorphic to one of ``gens``."""
    fx = fingerprint(x)
    return any(fingerprint(g) == fx and is_isomorphic(x, g, seed) for g in gens)


# verdicts


@dataclass(frozen=True)
class Verdict:
    status: str  # "yes" | "no" | "exceeds_cap"
    reason: str = ""

    def __bool__(self):
        return self.status == "yes"


# tilting axioms


def is_basic(t: TiltingCandidate, seed: int = 0) -> bool:
    ss = t.summands
    for i in range(len(ss)):
        for j in range(i + 1, len(ss)):
            if fingerprint(ss[i]) == fingerprint(ss[j]) and is_isomorphic(ss[i], ss[j], seed):
                return False
    return True


def is_selforthogonal(t: TiltingCandidate, cap: int | None = None) -> bool:
    cap = t.algebra.dim if cap is None else cap
    for i, x in enumerate(t.summands):
        d = t.pd(i, cap)
        for deg in range(1, d + 1):
            for y in t.summands:
                if ext_dim(x, y, deg, cap):
                    return False
    return True


def _mor_block(maps: Sequence[Morphism], source: Representation, target: Representation, stack) -> Morphism:
    vs = source.algebra.quiver.vertices
    f = source.field
    out = {}
    for v in vs:
        blocks = [m.maps[v] for m in maps]
        if stack is vstack:
            out[v] = vstack(blocks, source.dims[v], f) if blocks else Mat.zero(0, source.dims[v], f)
        else:
            out[v] = hstack(blocks, target.dims[v], f) if blocks else Mat.zero(target.dims[v], 0, f)
    return Morphism(source, target, out)


def _radical_maps(gens: Sequence[Representation], k: int, j: int) -> list[Morphism]:
    """Basis of the radical of ``Hom(gens[k], gens[j])`` for pairwise non-isomorphic indecomposables."""
    h = hom_space(gens[k], gens[j])
    if k != j:
        return h.basis
    es = endo_structure(gens[j])
    return [es.space.combination(v) for v in es.radical]


def _complement_maps(h, spanning: list[Morphism]) -> list[Morphism]:
    """Basis elements of ``h`` completing the span of ``spanning`` to all of ``h``."""
    from .exactla import rref_rows

    f = h.source.field
    coords = [h.coordinates(g) for g in spanning]
    coords = [c for c in coords if any(c)]
    if coords:
        _, piv = rref_rows(coords, h.dim, f)
    else:
        piv = []
    pivset = set(piv)
    return [h.basis[j] for j in range(h.dim) if j not in pivset]


def left_approximation(x: Representation, gens: Sequence[Representation], minimal: bool = True) -> Morphism:
    """Left ``add(gens)``-approximation ``x -> M0``.

    With ``minimal=False`` this is the universal map into
    ``+_j G_j^{dim Hom(x, G_j)}``.  The minimal version drops the maps that
    factor through radical maps between the generators, which requires the
    generators to be pairwise non-isomorphic indecomposables.
    """
    gens = list(gens)
    chosen: list[tuple[int, Morphism]] = []
    for j, g in enumerate(gens):
        h = hom_space(x, g)
        if not h.dim:
            continue
        if not minimal:
            chosen.extend((j, b) for b in h.basis)
            continue
        factoring = []
        for k in range(len(gens)):
            rad = _radical_maps(gens, k, j)
            if not rad:
                continue
            for b in hom_space(x, gens[k]).basis:
                factoring.extend(r @ b for r in rad)
        chosen.extend((j, b) for b in _complement_maps(h, factoring))
    if not chosen:
        zero = Representation(x.algebra, {}, check=False)
        return Morphism(x, zero, {})
    target = direct_sum_module([gens[j] for j, _ in chosen])
    return _mor_block([b for _, b in chosen], x, target, vstack)


def right_approximation(y: Representation, gens: Sequence[Representation], minimal: bool = True) -> Morphism:
    """Right ``add(gens)``-approximation ``M0 -> y``; see :func:`left_approximation`."""
    gens = list(gens)
    chosen: list[tuple[int, Morphism]] = []
    for j, g in enumerate(gens):
        h = hom_space(g, y)
        if not h.dim:
            continue
        if not minimal:
            chosen.extend((j, b) for b in h.basis)
            continue
        factoring = []
        for k in range(len(gens)):
            rad = _radical_maps(gens, j, k)
            if not rad:
                continue
            for b in hom_space(gens[k], y).basis:
                factoring.extend(b @ r for r in rad)
        chosen.extend((j, b) for b in _complement_maps(h, factoring))
    if not chosen:
        zero = Representation(y.algebra, {}, check=False)
        return Morphism(zero, y, {})
    source = direct_sum_module([gens[j] for j, _ in chosen])
    return _mor_block([b for _, b in chosen], source, y, hstack)


def splits_left(u: Morphism) -> bool:
    """Whether ``u: X -> M`` has a retraction ``r`` with ``r o u = id``."""
    h = hom_space(u.target, u.source)
    if not h.dim:
        return u.source.is_zero()
    f = u.source.field
    cols = [(b @ u).vector() for b in h.basis]
    target = identity(u.source).vector()
    a = Mat.from_columns(cols, len(target), f)
    return solve(a, Mat.from_columns([target], len(target), f)) is not None


def splits_right(v: Morphism) -> bool:
    """Whether ``v: M -> Y`` has a section ``s`` with ``v o s = id``."""
    h = hom_space(v.target, v.source)
    if not h.dim:
        return v.target.is_zero()
    f = v.source.field
    cols = [(v @ b).vector() for b in h.basis]
    target = identity(v.target).vector()
    a = Mat.from_columns(cols, len(target), f)
    return solve(a, Mat.from_columns([target], len(target), f)) is not None


def coresolution_of_A(t: TiltingCandidate, cap: int | None = None, max_steps: int | None = None):
    """``0 -> A -> T^0 -> ... -> T^r -> 0`` by iterated minimal left approximations.

    Returns the list of approximation maps, or ``None`` when one of them is
    not injective or the process does not stop.
    """
    alg = t.algebra
    if max_steps is None:
        max_steps = len(alg.quiver.vertices) + 1
    cache = alg.__dict__.setdefault("_module_cache", {})
    cur = cache.get("regular_sum")
    if cur is None:
        cur = cache["regular_sum"] = direct_sum_module(regular(alg))
    maps = []
    for _ in range(max_steps + 1):
        if cur.is_zero():
            return maps
        u = left_approximation(cur, t.summands)
        if not u.is_injective():
            return None
        maps.append(u)
        cur = cokernel(u)[0]
    return None


def is_tilting(t: TiltingCandidate, cap: int | None = None, seed: int = 0) -> Verdict:
    alg = t.algebra
    cap = alg.dim if cap is None else cap
    for s in t.summands:
        if s.is_zero() or not is_indecomposable(s, seed):
            return Verdict("no", "summand not indecomposable")
    if not is_basic(t, seed):
        return Verdict("no", "not basic")
    try:
        for i in range(len(t)):
            t.pd(i, cap)
    except ExceedsCap:
        return Verdict("exceeds_cap", "projective dimension beyond cap")
    if not is_selforthogonal(t, cap):
        return Verdict("no", "not selforthogonal")
    if len(t) != len(alg.quiver.vertices):
        return Verdict("no", f"{len(t)} summands, expected {len(alg.quiver.vertices)}")
    if coresolution_of_A(t, cap) is None:
        return Verdict("no", "regular module has no add(T)-coresolution")
    return Verdict("yes")


# mutation


@dataclass
class ExchangeEdge:
    source: TiltingCandidate
    target: TiltingCandidate
    index: int  # summand position exchanged (same position in both)
    x: Representation
    middle: Representation
    y: Representation
    u: Morphism  # X -> M
    v: Morphism  # M -> Y

    @property
    def exchanged(self) -> tuple:
        return (self.x.dimvec, self.y.dimvec)


# Each mutation tests both "the new summand is not in add(rest)" and "the
# exchange sequence does not split".  For a tilting start the first implies
# the second, so any case where exactly one of them fires is appended here.
GATE_DISAGREEMENTS: list = []


def _gates_reject(new: Representation, rest, split: bool, side: str, seed: int) -> bool:
    in_rest = in_add(new, rest, seed)
    if in_rest != split:
        GATE_DISAGREEMENTS.append({"side": side, "dimvec": new.dimvec, "in_add": in_rest, "split": split})
    return in_rest or split


def mutate_left(t: TiltingCandidate, i: int, cap: int | None = None, seed: int = 0,
                verify: bool = True, known: Callable | None = None):
    """Exchange summand ``i`` along its left ``add(Tbar)``-approximation.

    Returns ``(T', edge)`` for an arrow ``T -> T'`` or ``None``.  ``known``
    may short-circuit the tilting re-check for candidates already verified.
    """
    x = t.summands[i]
    rest = t.rest(i)
    u = left_approximation(x, rest)
    if not u.is_injective():
        return None
    y, v = cokernel(u)
    if y.is_zero() or not is_indecomposable(y, seed):
        return None
    if _gates_reject(y, rest, splits_left(u), "left", seed):
        return None
    new = t.replace(i, y)
    if verify and not (known is not None and known(new)):
        if not is_tilting(new, cap, seed):
            return None
    return new, ExchangeEdge(t, new, i, x, u.target, y, u, v)


def mutate_right(t: TiltingCandidate, i: int, cap: int | None = None, seed: int = 0,
                 verify: bool = True, known: Callable | None = None):
    """Exchange summand ``i`` along its right approximation; arrow ``T' -> T``."""
    y = t.summands[i]
    rest = t.rest(i)
    v = right_approximation(y, rest)
    if not v.is_surjective():
        return None
    x, u = kernel(v)
    if x.is_zero() or not is_indecomposable(x, seed):
        return None
    if _gates_reject(x, rest, splits_right(v), "right", seed):
        return None
    new = t.replace(i, x)
    if verify and not (known is not None and known(new)):
        if not is_tilting(new, cap, seed):
            return None
    return new, ExchangeEdge(new, t, i, x, v.source, y, u, v)


# the Hasse diagram


class TiltingDiagram:
    def __init__(self, algebra: AlgebraPresentation, seed: int = 0):
        self.algebra = algebra
        self.seed = seed
        self.vertices: list[TiltingCandidate] = []
        self.edges: list[tuple[int, int, ExchangeEdge]] = []
        self._by_fp: dict = {}
        self._edge_set: set = set()

    def find(self, t: TiltingCandidate) -> int | None:
        for k in self._by_fp.get(t.fingerprint(), []):
            if same_candidate(self.vertices[k], t, self.seed):
                return k
        return None

    def add_vertex(self, t: TiltingCandidate) -> int:
        k = len(self.vertices)
        self.vertices.append(t)
        self._by_fp.setdefault(t.fingerprint(), []).append(k)
        return k

    def add_edge(self, a: int, b: int, edge: ExchangeEdge) -> bool:
        if (a, b) in self._edge_set:
            return False
        self._edge_set.add((a, b))
        self.edges.append((a, b, edge))
        return True

    def successors(self, k: int) -> list[int]:
        return sorted({b for a, b, _ in self.edges if a == k})

    def predecessors(self, k: int) -> list[int]:
        return sorted({a for a, b, _ in self.edges if b == k})

    def sources(self) -> list[int]:
        return [k for k in range(len(self.vertices)) if not self.predecessors(k)]

    def sinks(self) -> list[int]:
        return [k for k in range(len(self.vertices)) if not self.successors(k)]

    def index_of(self, t) -> int:
        if isinstance(t, int):
            return t
        k = self.find(t)
        if k is None:
            raise KeyError("vertex not in diagram")
        return k

    def reachable_from(self, k: int) -> set:
        seen = {k}
        todo = [k]
        while todo:
            a = todo.pop()
            for b in self.successors(a):
                if b not in seen:
                    seen.add(b)
                    todo.append(b)
        return seen

    def reaching(self, k: int) -> set:
        seen = {k}
        todo = [k]
        while todo:
            a = todo.pop()
            for b in self.predecessors(a):
                if b not in seen:
                    seen.add(b)
                    todo.append(b)
        return seen

    def distances_from(self, k: int) -> dict:
        """Longest-path distance from ``k`` (the diagram is acyclic)."""
        order = self._topological()
        dist = {k: 0}
        for a in order:
            if a not in dist:
                continue
            for b in self.successors(a):
                dist[b] = max(dist.get(b, 0), dist[a] + 1)
        return dist

    def _topological(self) -> list:
        indeg = {k: len(self.predecessors(k)) for k in range(len(self.vertices))}
        todo = deque(sorted(k for k, d in indeg.items() if d == 0))
        out = []
        while todo:
            a = todo.popleft()
            out.append(a)
            for b in self.successors(a):
                indeg[b] -= 1
                if indeg[b] == 0:
                    todo.append(b)
        return out

    def label(self, k: int) -> str:
        t = self.vertices[k]
        if t.label:
            return t.label
        return " + ".join("".join(str(d) for d in dv) for dv in t.dimvecs())

    def to_dot(self, name: str = "K") -> str:
        lines = [f'digraph "{name}" {{']
        for k in range(len(self.vertices)):
            dv = " | ".join(",".join(str(d) for d in s.dimvec) for s in self.vertices[k].summands)
            extra = f"{self.vertices[k].label}: " if self.vertices[k].label else ""
            lines.append(f'  v{k} [label="{extra}{dv}"];')
        for a, b, e in sorted(self.edges, key=lambda x: (x[0], x[1])):
            lines.append(f'  v{a} -> v{b} [label="{e.index}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def report(self) -> dict:
        return {
            "vertices": len(self.vertices),
            "edges": len(self.edges),
            "summands": [[list(s.dimvec) for s in t.summands] for t in self.vertices],
            "labels": [self.vertices[k].label for k in range(len(self.vertices))],
            "arrows": [[a, b, e.index] for a, b, e in sorted(self.edges, key=lambda x: (x[0], x[1]))],
            "sources": self.sources(),
            "sinks": self.sinks(),
        }


def hasse_diagram(algebra: AlgebraPresentation, start: TiltingCandidate | None = None,
                  vertex_cap: int = 10_000, pd_cap: int | None = None, seed: int = 0,
                  directions: str = "both") -> TiltingDiagram:
    """Closure of ``start`` under left and right mutation.

    ``directions`` may be ``"left"`` or ``"right"`` to follow only arrows
    out of (respectively into) visited vertices.
    """
    if start is None:
        start = regular_candidate(algebra)
    pd_cap = algebra.dim if pd_cap is None else pd_cap
    v = is_tilting(start, pd_cap, seed)
    if v.status == "exceeds_cap":
        raise ExceedsCap(pd_cap)
    if not v:
        raise NotTilting(f"start is not tilting: {v.reason}")
    d = TiltingDiagram(algebra, seed)
    d.add_vertex(start)
    queue = deque([0])

    def known(cand):
        return d.find(cand) is not None

    while queue:
        k = queue.popleft()
        t = d.vertices[k]
        steps = []
        if directions in ("both", "left"):
            steps.append(mutate_left)
        if directions in ("both", "right"):
            steps.append(mutate_right)
        for step in steps:
            for i in range(len(t)):
                res = step(t, i, pd_cap, seed, known=known)
                if res is None:
                    continue
                new, edge = res
                j = d.find(new)
                if j is None:
                    if len(d.vertices) >= vertex_cap:
                        raise VertexCapExceeded(f"more than {vertex_cap} tilting modules")
                    j = d.add_vertex(new)
                    queue.append(j)
                if step is mutate_left:
                    d.add_edge(k, j, edge)
                else:
                    d.add_edge(j, k, edge)
    _tag_endpoints(d, seed)
    return d


def _tag_endpoints(d: TiltingDiagram, seed: int):
    alg = d.algebra
    a = d.find(regular_candidate(alg))
    if a is not None and not d.vertices[a].label:
        d.vertices[a].label = "A"
    da = d.find(dual_regular_candidate(alg))
    if da is not None and not d.vertices[da].label:
        d.vertices[da].label = "DA"
    d.regular_index = a
    d.dual_index = da


def is_predecessor(d: TiltingDiagram, t1, t2) -> bool:
    a, b = d.index_of(t1), d.index_of(t2)
    return b in d.reachable_from(a)


def convex_hull(d: TiltingDiagram, t1, t2) -> tuple[list[int], list[tuple[int, int]]]:
    """Vertices on some oriented path ``t1 -> ... -> t2`` and the arrows between them."""
    a, b = d.index_of(t1), d.index_of(t2)
    if a == b:
        return [a], []
    hull = d.reachable_from(a) & d.reaching(b)
    if not hull:
        return sorted({a, b}), []
    verts = sorted(hull)
    arrows = sorted((x, y) for x, y, _ in d.edges if x in hull and y in hull)
    return verts, arrows


def leq(t1: TiltingCandidate, t2: TiltingCandidate, cap: int | None = None) -> bool:
    """``t1 <= t2`` tested as ``Ext^i(t2, t1) = 0`` for all ``i >= 1``."""
    cap = t1.algebra.dim if cap is None else cap
    for i, x in enumerate(t2.summands):
        for deg in range(1, t2.pd(i, cap) + 1):
            for y in t1.summands:
                if ext_dim(x, y, deg, cap):
                    return False
    return True

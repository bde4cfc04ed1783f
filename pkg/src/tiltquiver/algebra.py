"""Bound quiver algebras ``kQ/I`` given by a quiver and admissible relations.

Paths are stored target-to-source, the way compositions are written: the
path ``d a`` (first ``a``, then ``d``) has ``arrows == ("d", "a")``.  With
this convention the product ``p * q`` ("p after q") is tuple concatenation.

Relations are completed to a confluent rewriting system (a noncommutative
Groebner basis) for the order "longer paths first, ties broken
lexicographically on arrow ids".  Irreducible paths then form a basis.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .exactla import QQ, Field, rref_rows


class AlgebraError(ValueError):
    pass


class NotAdmissible(AlgebraError):
    def __init__(self, cap: int, reason: str = ""):
        self.cap = cap
        super().__init__(f"ideal is not admissible within length cap {cap}" + (f": {reason}" if reason else ""))


class MalformedRelation(AlgebraError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


class Quiver:
    """Finite quiver with named vertices and arrows."""

    def __init__(self, vertices: Iterable, arrows: Iterable):
        self.vertices = tuple(str(v) for v in vertices)
        arrs = []
        for a in arrows:
            if not isinstance(a, Arrow):
                a = Arrow(*(str(x) for x in a))
            arrs.append(a)
        self.arrows = tuple(arrs)
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraError("duplicate vertex ids")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise AlgebraError("duplicate arrow ids")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise AlgebraError(f"arrow {a.name} has an undeclared endpoint")
        self.arrow = {a.name: a for a in self.arrows}
        self.vindex = {v: i for i, v in enumerate(self.vertices)}
        self.out_arrows = {v: [a for a in self.arrows if a.source == v] for v in self.vertices}
        self.in_arrows = {v: [a for a in self.arrows if a.target == v] for v in self.vertices}

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, [Arrow(a.name, a.target, a.source) for a in self.arrows])

    def __eq__(self, other):
        return isinstance(other, Quiver) and self.vertices == other.vertices and self.arrows == other.arrows

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        arrs = ", ".join(f"{a.name}:{a.source}->{a.target}" for a in self.arrows)
        return f"Quiver({list(self.vertices)}; {arrs})"


@dataclass(frozen=True)
class Path:
    source: str
    target: str
    arrows: tuple = ()

    @classmethod
    def trivial(cls, v: str) -> "Path":
        return cls(v, v, ())

    @classmethod
    def of(cls, quiver: Quiver, arrows: Sequence[str]) -> "Path":
        """Path from arrow ids written target-to-source (``["d", "a"]`` is ``d a``)."""
        arrows = tuple(arrows)
        if not arrows:
            raise AlgebraError("use Path.trivial for trivial paths")
        try:
            arrs = [quiver.arrow[n] for n in arrows]
        except KeyError as exc:
            raise AlgebraError(f"unknown arrow {exc.args[0]}") from None
        for later, earlier in zip(arrs, arrs[1:]):
            if earlier.target != later.source:
                raise AlgebraError(f"arrows {later.name} and {earlier.name} do not compose")
        return cls(arrs[-1].source, arrs[0].target, arrows)

    @property
    def length(self) -> int:
        return len(self.arrows)

    def __mul__(self, other: "Path") -> "Path":
        if other.target != self.source:
            raise AlgebraError(f"{self} cannot follow {other}")
        return Path(other.source, self.target, self.arrows + other.arrows)

    def reversed(self) -> "Path":
        return Path(self.target, self.source, self.arrows[::-1])

    def key(self):
        return (len(self.arrows), self.arrows, self.source, self.target)

    def __str__(self):
        if not self.arrows:
            return f"e{self.source}"
        return "*".join(self.arrows)


def _path_key(p: Path):
    return p.key()


class RelationCombo:
    """A nonzero combination of parallel paths of length at least two."""

    def __init__(self, terms: Iterable, field: Field = QQ):
        acc: dict[Path, object] = {}
        for c, p in terms:
            c = field(c)
            acc[p] = acc.get(p, field.zero) + c
            if field.p:
                acc[p] %= field.p
        items = [(c, p) for p, c in acc.items() if c]
        if not items:
            raise MalformedRelation("relation has no nonzero term")
        ends = {(p.source, p.target) for _, p in items}
        if len(ends) != 1:
            raise MalformedRelation("relation terms are not parallel")
        if any(p.length < 2 for _, p in items):
            raise MalformedRelation("relation terms must have length at least 2")
        items.sort(key=lambda cp: _path_key(cp[1]), reverse=True)
        self.terms = tuple(items)
        self.field = field
        self.source, self.target = ends.pop()

    def as_dict(self) -> dict:
        return {p: c for c, p in self.terms}

    def reversed(self) -> "RelationCombo":
        return RelationCombo([(c, p.reversed()) for c, p in self.terms], self.field)

    def __eq__(self, other):
        return isinstance(other, RelationCombo) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return " + ".join(f"{self.field.format(c)}*{p}" for c, p in self.terms)


def monomial(quiver: Quiver, arrows: Sequence[str], field: Field = QQ) -> RelationCombo:
    return RelationCombo([(1, Path.of(quiver, arrows))], field)


# rewriting


def _lead(f: Mapping) -> Path:
    return max(f, key=_path_key)


def _find_sub(word: tuple, sub: tuple) -> int:
    n, m = len(word), len(sub)
    for i in range(n - m + 1):
        if word[i:i + m] == sub:
            return i
    return -1


class _Rewriter:
    """Reduction of path combinations modulo a monic Groebner basis."""

    def __init__(self, field: Field):
        self.field = field
        self.rules: list[tuple[tuple, Path, dict]] = []  # (lead word, lead path, tail = lead - f)

    def set_basis(self, elems: Sequence[dict]):
        self.rules = []
        for f in elems:
            lp = _lead(f)
            tail = {p: -c for p, c in f.items() if p != lp}
            if self.field.p:
                tail = {p: c % self.field.p for p, c in tail.items()}
            self.rules.append((lp.arrows, lp, tail))

    def reducible_at(self, word: tuple):
        for lw, _lp, tail in self.rules:
            i = _find_sub(word, lw)
            if i >= 0:
                return i, lw, tail
        return None

    def reduce(self, combo: Mapping) -> dict:
        field = self.field
        p = field.p
        todo = {q: c for q, c in combo.items() if c}
        out: dict = {}
        while todo:
            q = max(todo, key=_path_key)
            c = todo.pop(q)
            hit = self.reducible_at(q.arrows) if q.arrows else None
            if hit is None:
                out[q] = c
                continue
            i, lw, tail = hit
            left, right = q.arrows[:i], q.arrows[i + len(lw):]
            for t, tc in tail.items():
                w = Path(q.source, q.target, left + t.arrows + right)
                v = todo.get(w, field.zero) + c * tc
                if p:
                    v %= p
                if v:
                    todo[w] = v
                else:
                    todo.pop(w, None)
        return out


def _monic(f: dict, field: Field) -> dict:
    lc = f[_lead(f)]
    inv = field.inv(lc)
    if field.p:
        return {q: (c * inv) % field.p for q, c in f.items()}
    return {q: c * inv for q, c in f.items()}


def _shift(f: Mapping, left: tuple, right: tuple, source: str, target: str) -> dict:
    return {Path(source, target, left + q.arrows + right): c for q, c in f.items()}


def _sub(f: Mapping, g: Mapping, field: Field) -> dict:
    out = dict(f)
    for q, c in g.items():
        v = out.get(q, field.zero) - c
        if field.p:
            v %= field.p
        if v:
            out[q] = v
        else:
            out.pop(q, None)
    return out


def groebner(relations: Sequence[RelationCombo], field: Field, cap: int) -> list[dict]:
    """Complete relations to a reduced monic Groebner basis.

    Raises :class:`NotAdmissible` when a leading path longer than ``2*cap``
    is produced, which bounds the completion for non-admissible input.
    """
    rw = _Rewriter(field)
    basis: list[dict] = []
    queue: list[dict] = [r.as_dict() for r in relations]
    limit = 2 * cap

    def add(f):
        nonlocal basis
        rw.set_basis(basis)
        f = rw.reduce(f)
        if not f:
            return False
        f = _monic(f, field)
        lw = _lead(f).arrows
        if len(lw) > limit:
            raise NotAdmissible(cap, f"leading path of length {len(lw)} during completion")
        keep = []
        for g in basis:
            if _find_sub(_lead(g).arrows, lw) >= 0:
                queue.append(g)
            else:
                keep.append(g)
        basis = keep + [f]
        return True

    while queue:
        queue.sort(key=lambda f: _path_key(_lead(f)) if f else (0,))
        f = queue.pop(0)
        if not f or not add(f):
            continue
        new = basis[-1]
        # overlaps of the new element with everything (both orders, and itself)
        pending = []
        u = _lead(new)
        for g in basis:
            v = _lead(g)
            for a, b, fa, fb in ((u, v, new, g), (v, u, g, new)):
                wa, wb = a.arrows, b.arrows
                for k in range(1, min(len(wa), len(wb))):
                    if wa[-k:] == wb[:k]:
                        left = wa[:-k]
                        right = wb[k:]
                        src = b.source
                        tgt = a.target
                        s = _sub(_shift(fa, (), right, src, tgt), _shift(fb, left, (), src, tgt), field)
                        if s:
                            pending.append(s)
                if g is new:
                    break
        queue.extend(pending)
    # interreduce tails
    out = []
    for i, f in enumerate(basis):
        rw.set_basis(basis[:i] + basis[i + 1:])
        lp = _lead(f)
        tail = rw.reduce({q: c for q, c in f.items() if q != lp})
        g = {lp: f[lp]}
        g.update(tail)
        out.append(g)
    out.sort(key=lambda f: _path_key(_lead(f)))
    return out


class AlgebraPresentation:
    """``kQ/I`` with a path basis and multiplication by normal forms."""

    def __init__(self, quiver: Quiver, relations: Sequence[RelationCombo] = (), cap: int | None = None,
                 field: Field = QQ, name: str = ""):
        self.quiver = quiver
        self.field = field
        self.name = name
        rels = []
        for r in relations:
            if not isinstance(r, RelationCombo):
                raise MalformedRelation(f"not a relation: {r!r}")
            for _, p in r.terms:
                for a in p.arrows:
                    if a not in quiver.arrow:
                        raise MalformedRelation(f"relation uses unknown arrow {a}")
                Path.of(quiver, p.arrows)
            rels.append(r if r.field == field else RelationCombo([(c, p) for c, p in r.terms], field))
        self.relations = tuple(rels)
        if cap is None:
            cap = max(2 * len(quiver.vertices) * len(quiver.arrows), 2)
        self.cap = cap
        self.gb = groebner(self.relations, field, cap)
        self._rw = _Rewriter(field)
        self._rw.set_basis(self.gb)
        self.basis = self._enumerate_basis()
        self.index = {p: i for i, p in enumerate(self.basis)}
        self._check_nilpotent()
        self._opposite: AlgebraPresentation | None = None

    # construction helpers

    def _enumerate_basis(self) -> list[Path]:
        found = [Path.trivial(v) for v in self.quiver.vertices]
        frontier = list(found)
        while frontier:
            nxt = []
            for p in frontier:
                for a in self.quiver.out_arrows[p.target]:
                    w = (a.name,) + p.arrows
                    if any(w[:len(lw)] == lw for lw, _, _ in self._rw.rules):
                        continue
                    q = Path(p.source, a.target, w)
                    if q.length >= self.cap:
                        raise NotAdmissible(self.cap, f"irreducible path {q} survives")
                    nxt.append(q)
            found.extend(nxt)
            frontier = nxt
        found.sort(key=_path_key)
        return found

    def _check_nilpotent(self):
        # powers of the arrow ideal inside A must reach zero within the cap
        n = len(self.basis)
        cur = [self.vector({Path.of(self.quiver, [a.name]): self.field.one}) for a in self.quiver.arrows]
        cur = [v for v in cur if any(v)]
        for step in range(1, self.cap + 1):
            if not cur:
                self.loewy_length = step
                return
            red, _ = rref_rows(cur, n, self.field)
            cur = []
            for a in self.quiver.arrows:
                ap = Path.of(self.quiver, [a.name])
                for v in red:
                    prod = self.multiply({ap: self.field.one}, self.combo(v))
                    if prod:
                        cur.append(self.vector(prod))
        raise NotAdmissible(self.cap, "arrow ideal is not nilpotent")

    # linear combinations

    def normal_form(self, combo: Mapping) -> dict:
        for q in combo:
            if q.arrows:
                Path.of(self.quiver, q.arrows)
            elif q.source not in self.quiver.vindex:
                raise AlgebraError(f"foreign path {q}")
        return self._rw.reduce({q: self.field(c) for q, c in combo.items()})

    def reduce_path(self, p: Path) -> dict:
        if p in self.index:
            return {p: self.field.one}
        return self._rw.reduce({p: self.field.one})

    def multiply(self, x: Mapping, y: Mapping) -> dict:
        """Normal form of ``x * y`` (``x`` after ``y``)."""
        acc: dict = {}
        f = self.field
        for p, c in x.items():
            for q, d in y.items():
                if q.target != p.source:
                    continue
                w = Path(q.source, p.target, p.arrows + q.arrows)
                acc[w] = acc.get(w, f.zero) + c * d
        return self._rw.reduce({k: (v % f.p if f.p else v) for k, v in acc.items() if v})

    def vector(self, combo: Mapping) -> list:
        v = [self.field.zero] * len(self.basis)
        for p, c in self.normal_form(combo).items():
            v[self.index[p]] = c
        return v

    def combo(self, vec: Sequence) -> dict:
        return {self.basis[i]: c for i, c in enumerate(vec) if c}

    # structure

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def vertices(self):
        return self.quiver.vertices

    @cached_property
    def mult_table(self) -> dict:
        """``(i, j) -> normal form of basis[i] * basis[j]`` for composable pairs."""
        table = {}
        for i, p in enumerate(self.basis):
            for j, q in enumerate(self.basis):
                if q.target == p.source:
                    table[(i, j)] = self.reduce_path(p * q)
        return table

    def paths_between(self, x: str, y: str) -> list[Path]:
        return [p for p in self.basis if p.source == x and p.target == y]

    def paths_from(self, x: str) -> list[Path]:
        return [p for p in self.basis if p.source == x]

    def hom_space_dims(self) -> list[list[int]]:
        """Entry ``[j][i]`` is ``dim e_j A e_i`` (paths from vertex i to vertex j)."""
        vi = self.quiver.vindex
        n = len(self.quiver.vertices)
        out = [[0] * n for _ in range(n)]
        for p in self.basis:
            out[vi[p.target]][vi[p.source]] += 1
        return out

    def is_sink(self, x: str) -> bool:
        return not self.quiver.out_arrows[x]

    def opposite(self) -> "AlgebraPresentation":
        if self._opposite is None:
            op = AlgebraPresentation(self.quiver.opposite(), [r.reversed() for r in self.relations],
                                     cap=self.cap, field=self.field,
                                     name=f"{self.name}^op" if self.name else "")
            op._opposite = self
            self._opposite = op
        return self._opposite

    def same_presentation(self, other: "AlgebraPresentation") -> bool:
        return (self.quiver == other.quiver and self.field == other.field
                and set(self.relations) == set(other.relations))

    def __repr__(self):
        return f"AlgebraPresentation({self.name or '?'}, dim={self.dim})"


def build_presentation(quiver: Quiver, relations: Sequence[RelationCombo] = (), cap: int | None = None,
                       field: Field = QQ, name: str = "") -> AlgebraPresentation:
    return AlgebraPresentation(quiver, relations, cap=cap, field=field, name=name)


def normal_form(p: AlgebraPresentation, combo: Mapping) -> dict:
    return p.normal_form(combo)


def opposite(p: AlgebraPresentation) -> AlgebraPresentation:
    return p.opposite()


def hom_space_dims(p: AlgebraPresentation) -> list[list[int]]:
    return p.hom_space_dims()


def path_algebra(vertices, arrows, relations=(), field: Field = QQ, cap=None, name="") -> AlgebraPresentation:
    """Convenience constructor: relations given as lists of ``(coeff, [arrow ids])``
    or as a bare arrow-id list for a monomial relation."""
    q = Quiver(vertices, arrows)
    rels = []
    for r in relations:
        if r and isinstance(r[0], str):
            rels.append(monomial(q, r, field))
        else:
            rels.append(RelationCombo([(c, Path.of(q, ws)) for c, ws in r], field))
    return AlgebraPresentation(q, rels, cap=cap, field=field, name=name)


def quiver_isomorphisms(a: AlgebraPresentation, b: AlgebraPresentation):
    """Yield vertex bijections ``a -> b`` preserving arrow multiplicities."""
    from itertools import permutations

    va, vb = a.quiver.vertices, b.quiver.vertices
    if len(va) != len(vb) or len(a.quiver.arrows) != len(b.quiver.arrows):
        return

    def mult(q, x, y):
        return sum(1 for ar in q.arrows if ar.source == x and ar.target == y)

    for perm in permutations(vb):
        m = dict(zip(va, perm))
        if all(mult(a.quiver, x, y) == mult(b.quiver, m[x], m[y]) for x in va for y in va):
            yield m

"""Finite-dimensional modules over a bound quiver algebra, as representations.

A representation assigns a vector space ``k^{d_x}`` to every vertex and a
``d_t x d_s`` matrix to every arrow ``s -> t``.  Morphisms are families of
matrices, one per vertex, commuting with the arrow actions.
"""
from __future__ import annotations

import random
from functools import cached_property
from typing import Mapping, Sequence

from .algebra import AlgebraPresentation, Path
from .exactla import (Field, Mat, block_diag, hstack, inverse, kernel_basis, kernel_with_free, rank,
                      rref_rows, solve)


class ModuleError(ValueError):
    pass


class ExceedsCap(RuntimeError):
    def __init__(self, cap: int, what: str = "projective resolution"):
        self.cap = cap
        super().__init__(f"{what} still nonzero at cap {cap}")


class NonSplitEndomorphism(ArithmeticError):
    """Raised when an endomorphism ring does not split over the ground field."""


class Representation:
    """A module over ``algebra`` given by one matrix per arrow."""

    def __init__(self, algebra: AlgebraPresentation, dims: Mapping, mats: Mapping | None = None,
                 check: bool = True, name: str = ""):
        self.algebra = algebra
        self.field = algebra.field
        q = algebra.quiver
        self.dims = {v: int(dims.get(v, 0)) for v in q.vertices}
        if any(d < 0 for d in self.dims.values()):
            raise ModuleError("negative dimension")
        mats = dict(mats or {})
        out = {}
        for a in q.arrows:
            shape = (self.dims[a.target], self.dims[a.source])
            m = mats.pop(a.name, None)
            if m is None:
                m = Mat.zero(*shape, self.field)
            elif not isinstance(m, Mat):
                m = Mat(self.field, shape[0], shape[1], m)
            if m.shape != shape:
                raise ModuleError(f"arrow {a.name}: matrix shape {m.shape}, expected {shape}")
            out[a.name] = m
        if mats:
            raise ModuleError(f"unknown arrows {sorted(mats)}")
        self.mats = out
        self.name = name
        self._cache: dict = {}
        if check:
            self.check_relations()

    # basic data

    @property
    def dimvec(self) -> tuple:
        return tuple(self.dims[v] for v in self.algebra.quiver.vertices)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def action(self, p: Path) -> Mat:
        """Matrix of a path ``s -> t`` (product of arrow matrices)."""
        m = Mat.identity(self.dims[p.source], self.field)
        for a in reversed(p.arrows):
            m = self.mats[a] @ m
        return m

    def evaluate(self, combo: Mapping) -> Mat:
        items = list(combo.items())
        p0 = items[0][0]
        acc = Mat.zero(self.dims[p0.target], self.dims[p0.source], self.field)
        for p, c in items:
            acc = acc + self.action(p).scale(c)
        return acc

    def check_relations(self):
        for r in self.algebra.relations:
            if self.dims[r.source] == 0 or self.dims[r.target] == 0:
                continue
            if not self.evaluate(r.as_dict()).is_zero():
                raise ModuleError(f"relation {r} does not vanish")

    def __eq__(self, other):
        return (isinstance(other, Representation) and other.algebra is self.algebra
                and self.dims == other.dims and self.mats == other.mats)

    def __hash__(self):
        return hash((self.dimvec, tuple(self.mats[a.name] for a in self.algebra.quiver.arrows)))

    def __repr__(self):
        label = f"{self.name} " if self.name else ""
        return f"<Representation {label}dim={self.dimvec}>"


class Morphism:
    """A module homomorphism: one ``dim N(x) x dim M(x)`` matrix per vertex."""

    def __init__(self, source: Representation, target: Representation, maps: Mapping, check: bool = False):
        self.source = source
        self.target = target
        f = source.field
        out = {}
        for v in source.algebra.quiver.vertices:
            shape = (target.dims[v], source.dims[v])
            m = maps.get(v)
            if m is None:
                m = Mat.zero(*shape, f)
            if m.shape != shape:
                raise ModuleError(f"vertex {v}: map shape {m.shape}, expected {shape}")
            out[v] = m
        self.maps = out
        if check and not self.is_intertwining():
            raise ModuleError("maps do not commute with the arrow actions")

    def is_intertwining(self) -> bool:
        for a in self.source.algebra.quiver.arrows:
            lhs = self.target.mats[a.name] @ self.maps[a.source]
            rhs = self.maps[a.target] @ self.source.mats[a.name]
            if lhs != rhs:
                return False
        return True

    def __matmul__(self, other: "Morphism") -> "Morphism":
        """Composition ``self o other``."""
        return Morphism(other.source, self.target, {v: self.maps[v] @ other.maps[v] for v in self.maps})

    def __add__(self, other: "Morphism") -> "Morphism":
        return Morphism(self.source, self.target, {v: self.maps[v] + other.maps[v] for v in self.maps})

    def __sub__(self, other: "Morphism") -> "Morphism":
        return Morphism(self.source, self.target, {v: self.maps[v] - other.maps[v] for v in self.maps})

    def scale(self, c) -> "Morphism":
        return Morphism(self.source, self.target, {v: m.scale(c) for v, m in self.maps.items()})

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.maps.values())

    def is_injective(self) -> bool:
        return all(rank(m) == m.ncols for m in self.maps.values())

    def is_surjective(self) -> bool:
        return all(rank(m) == m.nrows for m in self.maps.values())

    def is_iso(self) -> bool:
        return all(m.nrows == m.ncols and rank(m) == m.nrows for m in self.maps.values())

    def inverse(self) -> "Morphism":
        return Morphism(self.target, self.source, {v: inverse(m) if m.nrows else m.T for v, m in self.maps.items()})

    def trace(self):
        f = self.source.field
        s = f.zero
        for m in self.maps.values():
            s += m.trace()
        return s % f.p if f.p else s

    def vector(self) -> list:
        out = []
        for v in self.source.algebra.quiver.vertices:
            for r in self.maps[v].rows:
                out.extend(r)
        return out

    def __eq__(self, other):
        return isinstance(other, Morphism) and self.maps == other.maps

    def __hash__(self):
        return hash(tuple(self.maps.values()))

    def __repr__(self):
        return f"<Morphism {self.source.dimvec} -> {self.target.dimvec}>"


def identity(m: Representation) -> Morphism:
    return Morphism(m, m, {v: Mat.identity(d, m.field) for v, d in m.dims.items()})


def zero_morphism(m: Representation, n: Representation) -> Morphism:
    return Morphism(m, n, {})


def _same_algebra(m: Representation, n: Representation):
    if m.algebra is not n.algebra:
        raise ModuleError("modules live over different algebras")


# Hom spaces


class HomSpace:
    """Basis of ``Hom(M, N)`` with constant-time coordinates.

    The basis comes from the reduced echelon form of the intertwining
    equations: each basis vector has a 1 at its own free unknown and 0 at the
    other free unknowns.
    """

    def __init__(self, m: Representation, n: Representation):
        _same_algebra(m, n)
        self.source, self.target = m, n
        q = m.algebra.quiver
        f = m.field
        offsets = {}
        pos = 0
        for v in q.vertices:
            offsets[v] = pos
            pos += m.dims[v] * n.dims[v]
        self.offsets = offsets
        self.nvars = pos
        rows = []
        zero = f.zero
        for a in q.arrows:
            s, t = a.source, a.target
            ms, mt, ns, nt = m.dims[s], m.dims[t], n.dims[s], n.dims[t]
            if nt == 0 or ms == 0:
                continue
            na, ma = n.mats[a.name].rows, m.mats[a.name].rows
            os_, ot = offsets[s], offsets[t]
            for i in range(nt):
                for j in range(ms):
                    row = [zero] * pos
                    nz = False
                    # (N(a) f_s)[i, j] = sum_k N(a)[i,k] f_s[k,j]
                    for k in range(ns):
                        c = na[i][k]
                        if c:
                            row[os_ + k * ms + j] += c
                            nz = True
                    # (f_t M(a))[i, j] = sum_l f_t[i,l] M(a)[l,j]
                    for l in range(mt):
                        c = ma[l][j]
                        if c:
                            row[ot + i * mt + l] -= c
                            nz = True
                    if nz:
                        if f.p:
                            row = [x % f.p for x in row]
                        rows.append(row)
        if pos == 0:
            vecs, free = [], []
        elif rows:
            vecs, free = kernel_with_free(Mat._raw(f, len(rows), pos, tuple(tuple(r) for r in rows)))
        else:
            vecs = []
            free = list(range(pos))
            for j in free:
                e = [zero] * pos
                e[j] = f.one
                vecs.append(tuple(e))
        self.vectors = vecs
        self.free = free
        self.basis = [self.morphism(v) for v in vecs]

    def __len__(self):
        return len(self.basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def morphism(self, vec: Sequence) -> Morphism:
        m, n = self.source, self.target
        f = m.field
        maps = {}
        for v in m.algebra.quiver.vertices:
            r, c = n.dims[v], m.dims[v]
            o = self.offsets[v]
            maps[v] = Mat._raw(f, r, c, tuple(tuple(vec[o + i * c: o + (i + 1) * c]) for i in range(r)))
        return Morphism(m, n, maps)

    def coordinates(self, g: Morphism) -> list:
        vec = g.vector()
        return [vec[j] for j in self.free]

    def combination(self, coeffs: Sequence) -> Morphism:
        f = self.source.field
        vec = [f.zero] * self.nvars
        for c, b in zip(coeffs, self.vectors):
            if c:
                for j, x in enumerate(b):
                    if x:
                        vec[j] += c * x
        if f.p:
            vec = [x % f.p for x in vec]
        return self.morphism(vec)


def hom_space(m: Representation, n: Representation) -> HomSpace:
    key = ("hom", id(n))
    cache = m._cache
    hit = cache.get(key)
    if hit is not None and hit.target is n:
        return hit
    h = HomSpace(m, n)
    cache[key] = h
    return h


def hom_basis(m: Representation, n: Representation) -> list[Morphism]:
    return hom_space(m, n).basis


def hom_dim(m: Representation, n: Representation) -> int:
    return hom_space(m, n).dim


# constructions


def simple(algebra: AlgebraPresentation, x: str) -> Representation:
    return Representation(algebra, {x: 1}, name=f"S{x}")


def projective(algebra: AlgebraPresentation, x: str) -> Representation:
    """``P_x = A e_x``: irreducible paths starting at ``x``, arrows act on the left."""
    key = ("projective", x)
    hit = algebra.__dict__.setdefault("_module_cache", {}).get(key)
    if hit is not None:
        return hit
    f = algebra.field
    paths = {v: [] for v in algebra.quiver.vertices}
    for p in algebra.paths_from(x):
        paths[p.target].append(p)
    idx = {v: {p: i for i, p in enumerate(ps)} for v, ps in paths.items()}
    mats = {}
    for a in algebra.quiver.arrows:
        src, tgt = paths[a.source], paths[a.target]
        rows = [[f.zero] * len(src) for _ in tgt]
        ap = Path(a.source, a.target, (a.name,))
        for j, p in enumerate(src):
            for r, c in algebra.reduce_path(ap * p).items():
                rows[idx[a.target][r]][j] = c
        mats[a.name] = Mat(f, len(tgt), len(src), rows)
    rep = Representation(algebra, {v: len(ps) for v, ps in paths.items()}, mats, check=False, name=f"P{x}")
    rep._cache["basis_paths"] = paths
    algebra._module_cache[key] = rep
    return rep


def injective(algebra: AlgebraPresentation, x: str) -> Representation:
    """``I_x = D(e_x A)``, the dual of the projective at ``x`` over the opposite algebra."""
    key = ("injective", x)
    hit = algebra.__dict__.setdefault("_module_cache", {}).get(key)
    if hit is not None:
        return hit
    rep = dual(projective(algebra.opposite(), x))
    rep.name = f"I{x}"
    algebra._module_cache[key] = rep
    return rep


def regular(algebra: AlgebraPresentation) -> list[Representation]:
    return [projective(algebra, x) for x in algebra.quiver.vertices]


def dual_regular(algebra: AlgebraPresentation) -> list[Representation]:
    return [injective(algebra, x) for x in algebra.quiver.vertices]


def dual(m: Representation) -> Representation:
    """``D M = Hom_k(M, k)`` as a module over the opposite algebra."""
    op = m.algebra.opposite()
    return Representation(op, m.dims, {a: mat.T for a, mat in m.mats.items()}, check=False,
                          name=f"D{m.name}" if m.name else "")


def dual_morphism(f: Morphism) -> Morphism:
    return Morphism(dual(f.target), dual(f.source), {v: m.T for v, m in f.maps.items()})


def direct_sum(mods: Sequence[Representation]):
    """Direct sum with its injections and projections."""
    mods = list(mods)
    if not mods:
        raise ModuleError("empty direct sum")
    alg = mods[0].algebra
    for m in mods[1:]:
        _same_algebra(mods[0], m)
    f = alg.field
    dims = {v: sum(m.dims[v] for m in mods) for v in alg.quiver.vertices}
    mats = {a.name: block_diag([m.mats[a.name] for m in mods], f) for a in alg.quiver.arrows}
    total = Representation(alg, dims, mats, check=False)
    inj, proj = [], []
    off = {v: 0 for v in alg.quiver.vertices}
    for m in mods:
        imaps, pmaps = {}, {}
        for v in alg.quiver.vertices:
            d, o, D = m.dims[v], off[v], dims[v]
            e = Mat._raw(f, D, d, tuple(tuple(f.one if (i - o) == j else f.zero for j in range(d)) for i in range(D)))
            imaps[v] = e
            pmaps[v] = e.T
            off[v] += d
        inj.append(Morphism(m, total, imaps))
        proj.append(Morphism(total, m, pmaps))
    return total, inj, proj


def direct_sum_module(mods: Sequence[Representation]) -> Representation:
    return direct_sum(mods)[0]


def sub_representation(m: Representation, bases: Mapping) -> tuple[Representation, Morphism]:
    """Submodule spanned at each vertex by the given columns (assumed stable)."""
    f = m.field
    incl = {}
    for v in m.algebra.quiver.vertices:
        cols = list(bases.get(v, []))
        incl[v] = Mat.from_columns(cols, m.dims[v], f) if cols else Mat.zero(m.dims[v], 0, f)
    dims = {v: incl[v].ncols for v in incl}
    mats = {}
    for a in m.algebra.quiver.arrows:
        s, t = a.source, a.target
        if dims[s] == 0 or dims[t] == 0:
            continue
        x = solve(incl[t], m.mats[a.name] @ incl[s])
        if x is None:
            raise ModuleError("subspaces are not stable under the arrow actions")
        mats[a.name] = x
    sub = Representation(m.algebra, dims, mats, check=False)
    return sub, Morphism(sub, m, incl)


def quotient_representation(m: Representation, bases: Mapping) -> tuple[Representation, Morphism]:
    """Quotient by the submodule spanned by ``bases``; returns it with the projection."""
    f = m.field
    proj, lifts = {}, {}
    for v in m.algebra.quiver.vertices:
        d = m.dims[v]
        cols = [tuple(c) for c in bases.get(v, [])]
        if cols:
            red, piv = rref_rows(cols, d, f)
            sub = [tuple(r) for r in red]
        else:
            piv, sub = [], []
        pivset = set(piv)
        comp = []
        for j in range(d):
            if j not in pivset:
                e = [f.zero] * d
                e[j] = f.one
                comp.append(tuple(e))
        if not comp:
            proj[v] = Mat.zero(0, d, f)
            lifts[v] = Mat.zero(d, 0, f)
            continue
        full = Mat.from_columns(sub + comp, d, f)
        inv = inverse(full)
        proj[v] = inv.submatrix(range(len(sub), d), range(d))
        lifts[v] = Mat.from_columns(comp, d, f)
    dims = {v: proj[v].nrows for v in proj}
    mats = {}
    for a in m.algebra.quiver.arrows:
        s, t = a.source, a.target
        if dims[s] == 0 or dims[t] == 0:
            continue
        mats[a.name] = proj[t] @ m.mats[a.name] @ lifts[s]
    q = Representation(m.algebra, dims, mats, check=False)
    return q, Morphism(m, q, proj)


def kernel(f: Morphism) -> tuple[Representation, Morphism]:
    return sub_representation(f.source, {v: kernel_basis(mat) for v, mat in f.maps.items()})


def image(f: Morphism) -> tuple[Representation, Morphism]:
    bases = {}
    for v, mat in f.maps.items():
        if mat.nrows == 0 or mat.ncols == 0:
            bases[v] = []
            continue
        red, _ = rref_rows(mat.T.rows, mat.nrows, mat.field)
        bases[v] = [tuple(r) for r in red]
    return sub_representation(f.target, bases)


def cokernel(f: Morphism) -> tuple[Representation, Morphism]:
    return quotient_representation(f.target, {v: mat.columns() for v, mat in f.maps.items()})


# radical, top, projective cover


def radical_spaces(m: Representation) -> dict:
    f = m.field
    out = {}
    for v in m.algebra.quiver.vertices:
        cols = []
        for a in m.algebra.quiver.in_arrows[v]:
            cols.extend(m.mats[a.name].columns())
        cols = [c for c in cols if any(c)]
        if cols:
            red, _ = rref_rows(cols, m.dims[v], f)
            out[v] = [tuple(r) for r in red]
        else:
            out[v] = []
    return out


def radical(m: Representation) -> tuple[Representation, Morphism]:
    return sub_representation(m, radical_spaces(m))


def top(m: Representation) -> tuple[Representation, Morphism]:
    return quotient_representation(m, radical_spaces(m))


def top_dims(m: Representation) -> dict:
    return {v: m.dims[v] - len(b) for v, b in radical_spaces(m).items()}


def projective_cover(m: Representation) -> tuple[Morphism, list]:
    """Minimal projective cover ``P -> M``; also returns the vertex of each summand of ``P``."""
    hit = m._cache.get("cover")
    if hit is not None:
        return hit
    alg = m.algebra
    f = m.field
    rad = radical_spaces(m)
    gens = []  # (vertex, vector in M(vertex))
    for v in alg.quiver.vertices:
        red, piv = rref_rows(rad[v], m.dims[v], f) if rad[v] else ([], [])
        pivset = set(piv)
        for j in range(m.dims[v]):
            if j not in pivset:
                e = [f.zero] * m.dims[v]
                e[j] = f.one
                gens.append((v, tuple(e)))
    summands = [projective(alg, v) for v, _ in gens]
    if not summands:
        p = Representation(alg, {}, check=False)
        res = (Morphism(p, m, {}), [])
        m._cache["cover"] = res
        return res
    total, _, projs = direct_sum(summands)
    # map on each summand: basis path q from v to y goes to M(q) * gen
    blocks = {y: [] for y in alg.quiver.vertices}
    for (v, vec), pv in zip(gens, summands):
        paths = pv._cache["basis_paths"]
        for y in alg.quiver.vertices:
            cols = [m.action(q).apply(vec) for q in paths[y]]
            blocks[y].append(Mat.from_columns(cols, m.dims[y], f) if cols else Mat.zero(m.dims[y], 0, f))
    maps = {y: hstack(blocks[y], m.dims[y], f) if blocks[y] else Mat.zero(m.dims[y], 0, f) for y in blocks}
    cover = Morphism(total, m, maps)
    res = (cover, [v for v, _ in gens])
    m._cache["cover"] = res
    return res


def syzygy(m: Representation) -> Representation:
    hit = m._cache.get("syzygy")
    if hit is None:
        cover, _ = projective_cover(m)
        hit = kernel(cover)[0]
        m._cache["syzygy"] = hit
    return hit


class Resolution:
    """Minimal projective resolution ``... -> P_1 -> P_0 -> M``."""

    def __init__(self, module: Representation, projectives: list, tops: list, differentials: list,
                 augmentation: Morphism, complete: bool):
        self.module = module
        self.projectives = projectives
        self.tops = tops
        self.differentials = differentials
        self.augmentation = augmentation
        self.complete = complete

    @property
    def length(self) -> int:
        return len(self.projectives) - 1


def projective_resolution(m: Representation, cap: int) -> Resolution:
    if cap < 0:
        raise ValueError("cap must be non-negative")
    cover, tops = projective_cover(m)
    projs, top_list, diffs = [cover.source], [tops], []
    prev_cover = cover
    complete = False
    for _ in range(cap + 1):
        k, incl = kernel(prev_cover)
        if k.is_zero():
            complete = True
            break
        if len(projs) > cap:
            break
        c, t = projective_cover(k)
        diffs.append(incl @ c)
        projs.append(c.source)
        top_list.append(t)
        prev_cover = c
    if m.is_zero():
        complete = True
    return Resolution(m, projs, top_list, diffs, cover, complete)


def pd(m: Representation, cap: int | None = None) -> int:
    """Projective dimension; raises :class:`ExceedsCap` beyond ``cap``."""
    if cap is None:
        cap = m.algebra.dim
    cur = m
    for n in range(cap + 1):
        if syzygy(cur).is_zero():
            return n
        cur = syzygy(cur)
    raise ExceedsCap(cap)


def nth_syzygy(m: Representation, n: int) -> Representation:
    cur = m
    for _ in range(n):
        if cur.is_zero():
            return cur
        cur = syzygy(cur)
    return cur


def ext1_dim(x: Representation, n: Representation) -> int:
    if x.is_zero():
        return 0
    om = syzygy(x)
    if om.is_zero():
        return 0
    tops = projective_cover(x)[1]
    hp = sum(n.dims[v] for v in tops)
    return hom_dim(om, n) - hp + hom_dim(x, n)


def ext_dim(m: Representation, n: Representation, i: int, cap: int | None = None) -> int:
    """``dim Ext^i(M, N)`` via ``Ext^i(M, N) = Ext^1(Omega^{i-1} M, N)``."""
    if i < 1:
        raise ValueError("degree must be at least 1")
    if cap is None:
        cap = m.algebra.dim
    if i > cap + 1:
        raise ExceedsCap(cap, "Ext degree")
    return ext1_dim(nth_syzygy(m, i - 1), n)


# endomorphism rings


class EndoStructure:
    """``End(M)`` with its radical and semisimple quotient dimension."""

    def __init__(self, m: Representation):
        self.module = m
        self.space = hom_space(m, m)
        self.basis = self.space.basis
        f = m.field
        d = len(self.basis)
        if d == 0:
            self.radical = []
        elif f.p == 0:
            gram = [[(self.basis[i] @ self.basis[j]).trace() for j in range(d)] for i in range(d)]
            self.radical = kernel_basis(Mat(f, d, d, gram).T)
        else:
            self.radical = _radical_char_p(self)
        self.dim = d
        self.radical_dim = len(self.radical)
        self.semisimple_dim = d - self.radical_dim

    @cached_property
    def structure_constants(self) -> dict:
        """``(i, j) -> coordinates of basis[i] o basis[j]``."""
        return {(i, j): self.space.coordinates(a @ b)
                for i, a in enumerate(self.basis) for j, b in enumerate(self.basis)}

    def is_local(self) -> bool:
        return self.semisimple_dim == 1


def _block_matrix(f: Morphism) -> Mat:
    vs = f.source.algebra.quiver.vertices
    return block_diag([f.maps[v] for v in vs], f.source.field)


def _radical_char_p(es: EndoStructure) -> list:
    """Radical of a matrix algebra over F_p by iterated refinement of trace conditions.

    Level ``i`` keeps the ``x`` in the previous space with
    ``trace(lift(x y)^(p^i)) / p^i == 0 (mod p)`` for every basis ``y``.
    """
    f = es.module.field
    p = f.p
    basis = es.basis
    d = len(basis)
    n = es.module.total_dim
    mats = [_block_matrix(b) for b in basis]
    cur = [tuple(f.one if i == j else f.zero for j in range(d)) for i in range(d)]
    level = 0
    while p ** level <= n and cur:
        mod = p ** (level + 1)
        rows = []
        for y in mats:
            row = []
            for v in cur:
                # combination x = sum v_k basis_k, integer lift of x y
                x = None
                for c, mk in zip(v, mats):
                    if c:
                        x = mk.scale(c) if x is None else x + mk.scale(c)
                if x is None:
                    row.append(0)
                    continue
                prod = [[int(e) for e in r] for r in (x @ y).rows]
                pw = _int_matpow(prod, p ** level, mod)
                tr = sum(pw[i][i] for i in range(len(pw))) % mod
                row.append((tr // (p ** level)) % p)
            rows.append(row)
        # the map v -> row values is linear on cur (standard fact); keep its kernel
        k = kernel_basis(Mat(f, len(rows), len(cur), rows)) if rows else []
        cur = [tuple(sum(c * vv[j] for c, vv in zip(kv, cur)) % p for j in range(d)) for kv in k]
        level += 1
    return cur


def _int_matpow(m, e, mod):
    n = len(m)
    res = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    base = [[x % mod for x in r] for r in m]
    while e:
        if e & 1:
            res = [[sum(res[i][k] * base[k][j] for k in range(n)) % mod for j in range(n)] for i in range(n)]
        e >>= 1
        if e:
            base = [[sum(base[i][k] * base[k][j] for k in range(n)) % mod for j in range(n)] for i in range(n)]
    return res


def endo_structure(m: Representation) -> EndoStructure:
    hit = m._cache.get("endo")
    if hit is None:
        hit = EndoStructure(m)
        m._cache["endo"] = hit
    return hit


# decomposition


def _rational_roots(coeffs: list, field: Field) -> list:
    """Roots in the ground field of a polynomial given highest degree first."""
    if field.p:
        p = field.p
        if p < 5000:
            out = []
            for t in range(p):
                acc = 0
                for c in coeffs:
                    acc = (acc * t + c) % p
                if acc == 0:
                    out.append(t)
            return out
        import sympy

        x = sympy.Symbol("x")
        poly = sympy.Poly([int(c) for c in coeffs], x, modulus=p)
        return sorted({int(-fac.all_coeffs()[-1]) % p for fac, _ in poly.factor_list()[1] if fac.degree() == 1})
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in coeffs], x, domain="QQ")
    roots = sympy.roots(poly, filter="Q")
    from fractions import Fraction

    return [Fraction(int(r.p), int(r.q)) for r in roots]


def _charpoly(mat: Mat) -> list:
    """Characteristic polynomial, highest degree first."""
    from sympy.polys.matrices import DomainMatrix
    from sympy import QQ as SQQ, GF as SGF

    f = mat.field
    if f.p:
        dom = SGF(f.p)
        rows = [[dom(int(x)) for x in r] for r in mat.rows]
    else:
        dom = SQQ
        rows = [[dom(x.numerator, x.denominator) for x in r] for r in mat.rows]
    dm = DomainMatrix(rows, mat.shape, dom)
    cp = dm.charpoly()
    from fractions import Fraction

    if f.p:
        return [int(c) % f.p for c in cp]
    return [Fraction(int(c.numerator), int(c.denominator)) for c in cp]


def _fitting_split(m: Representation, phi: Morphism):
    """Fitting decomposition ``M = ker phi^N + im phi^N``."""
    n = m.total_dim
    power = phi
    e = 1
    while e < n:
        power = power @ power
        e *= 2
    ker_sp = {v: kernel_basis(mat) for v, mat in power.maps.items()}
    im_sp = {}
    for v, mat in power.maps.items():
        if mat.nrows == 0 or mat.ncols == 0:
            im_sp[v] = []
            continue
        red, _ = rref_rows(mat.T.rows, mat.nrows, mat.field)
        im_sp[v] = [tuple(r) for r in red]
    return ker_sp, im_sp


def _split_once(m: Representation, rng: random.Random, trials: int = 24):
    """Try to write ``m`` as a proper direct sum; returns two modules or ``None``."""
    es = endo_structure(m)
    if es.semisimple_dim <= 1:
        return None
    f = m.field
    d = es.dim
    # complement of the radical in End(M) to work in End(M)/rad
    if es.radical:
        red, piv = rref_rows(es.radical, d, f)
    else:
        red, piv = [], []
    pivset = set(piv)
    comp = [j for j in range(d) if j not in pivset]
    s = len(comp)
    rad_rows = [list(r) for r in red]

    def mod_rad(vec):
        # reduce a coordinate vector modulo the radical, return complement coordinates
        v = list(vec)
        for r, c in zip(rad_rows, piv):
            if v[c]:
                a = v[c]
                v = [(x - a * y) % f.p if f.p else x - a * y for x, y in zip(v, r)]
        return [v[j] for j in comp]

    candidates = []
    for j in comp:
        candidates.append([f.one if i == j else f.zero for i in range(d)])
    for t in range(trials):
        bound = 3 + 2 * t
        candidates.append([f(rng.randint(-bound, bound)) for _ in range(d)])
    for coeffs in candidates:
        x = es.space.combination(coeffs)
        # left multiplication by x on End(M)/rad
        cols = []
        for j in comp:
            e = es.basis[j]
            cols.append(mod_rad(es.space.coordinates(x @ e)))
        lm = Mat.from_columns(cols, s, f)
        for lam in _rational_roots(_charpoly(lm), f):
            phi = x - identity(m).scale(lam)
            ker_sp, im_sp = _fitting_split(m, phi)
            kd = sum(len(b) for b in ker_sp.values())
            if 0 < kd < m.total_dim:
                a, _ = sub_representation(m, ker_sp)
                b, _ = sub_representation(m, im_sp)
                return a, b
    raise NonSplitEndomorphism(
        f"End(M) has semisimple quotient of dimension {es.semisimple_dim} but no splitting was found over {f!r}")


def is_indecomposable(m: Representation, seed: int = 0) -> bool:
    if m.is_zero():
        return False
    es = endo_structure(m)
    if es.semisimple_dim == 1:
        return True
    return _split_once(m, random.Random(seed)) is None


def indecomposable_summands(m: Representation, seed: int = 0) -> list[Representation]:
    """Indecomposable summands of ``m`` (with repetition)."""
    if m.is_zero():
        return []
    rng = random.Random(seed)
    out = []
    todo = [m]
    while todo:
        cur = todo.pop()
        if endo_structure(cur).semisimple_dim == 1:
            out.append(cur)
            continue
        parts = _split_once(cur, rng)
        if parts is None:
            out.append(cur)
        else:
            todo.extend(parts)
    out.sort(key=lambda r: (r.dimvec, r.total_dim))
    return out


def fingerprint(m: Representation) -> tuple:
    es = endo_structure(m)
    return (m.dimvec, es.dim, es.radical_dim)


def decompose(m: Representation, seed: int = 0) -> list[tuple[Representation, int]]:
    groups: list[list] = []
    for s in indecomposable_summands(m, seed):
        for g in groups:
            if fingerprint(g[0]) == fingerprint(s) and is_isomorphic(g[0], s, seed):
                g[1] += 1
                break
        else:
            groups.append([s, 1])
    return [(g[0], g[1]) for g in groups]


def find_isomorphism(m: Representation, n: Representation, seed: int = 0, trials: int = 32,
                     bound: int = 8) -> Morphism | None:
    """An invertible element of ``Hom(m, n)`` if one is found.

    Random combinations of a Hom basis with coefficients in ``[-bound, bound]``
    (widened on retries), then a deterministic sweep over single basis
    elements and sums of pairs.  A ``None`` answer is one-sided: it is exact
    whenever the dimension checks already fail.
    """
    _same_algebra(m, n)
    if m.dims != n.dims:
        return None
    if m.is_zero():
        return Morphism(m, n, {})
    h = hom_space(m, n)
    if h.dim == 0:
        return None
    if hom_dim(n, m) != h.dim or hom_dim(m, m) != h.dim:
        return None
    f = m.field
    rng = random.Random(seed)
    for t in range(trials):
        b = bound * (1 + t // 8)
        g = h.combination([f(rng.randint(-b, b)) for _ in range(h.dim)])
        if g.is_iso():
            return g
    k = h.dim
    for i in range(k):
        if h.basis[i].is_iso():
            return h.basis[i]
        for j in range(i + 1, k):
            g = h.basis[i] + h.basis[j]
            if g.is_iso():
                return g
    return None


def is_isomorphic(m: Representation, n: Representation, seed: int = 0) -> bool:
    return find_isomorphism(m, n, seed) is not None


def is_projective(m: Representation) -> bool:
    return syzygy(m).is_zero()

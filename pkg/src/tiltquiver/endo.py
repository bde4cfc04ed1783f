"""``End_A(T)`` as a bound quiver algebra and the transport ``X -> Hom_A(X, T)``.

``Hom_A(X, T) = +_i Hom_A(X, T_i)`` is a left ``B``-module, ``B = End_A(T)``,
through post-composition: the arrow of ``B`` attached to a radical map
``f: T_i -> T_j`` sends ``u`` to ``f o u``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .algebra import (AlgebraPresentation, NotAdmissible, Path, Quiver, RelationCombo, build_presentation)
from .exactla import Mat, kernel_basis, rank, rref_rows
from .repmod import (Morphism, Representation, endo_structure, hom_space, indecomposable_summands)
from .tilting import (MutationRejected, TiltingCandidate, TiltingDiagram, convex_hull, hasse_diagram,
                      is_tilting, mutate_left, regular_candidate, same_candidate)


@dataclass
class EndoPresentation:
    """``B = End_A(T)`` presented by a quiver with relations.

    ``vertex_of[i]`` is the vertex of ``B`` for summand ``T_i`` and
    ``arrow_maps`` records the radical morphism chosen for every arrow.
    """

    tilting: TiltingCandidate
    algebra: AlgebraPresentation
    vertex_of: list
    arrow_maps: dict
    arrow_degree: dict = field(default_factory=dict)

    def __post_init__(self):
        self._transports: dict = {}

    @property
    def summands(self):
        return self.tilting.summands

    def summand_index(self, vertex: str) -> int:
        return self.vertex_of.index(vertex)

    def path_value(self, p: Path) -> Morphism:
        """The morphism ``T_i -> T_j`` represented by a path of ``B``."""
        i = self.summand_index(p.source)
        from .repmod import identity

        val = identity(self.summands[i])
        for a in reversed(p.arrows):
            val = self.arrow_maps[a] @ val
        return val


def _span_coords(h, morphisms) -> list:
    return [c for c in (h.coordinates(g) for g in morphisms) if any(c)]


def endo_presentation(t: TiltingCandidate, grading: Callable | None = None, degrees: Sequence = (0,),
                      zero_degree=0, add=None, name: str = "B") -> EndoPresentation:
    """Quiver and relations of ``End_A(T)``.

    ``grading(i, j, g, f)`` may project a morphism ``f: T_i -> T_j`` to its
    degree-``g`` component; arrows and relations are then chosen homogeneous
    and ``arrow_degree`` records the degree of each arrow.  ``add`` combines
    degrees (defaults to ``+``).
    """
    summands = list(t.summands)
    n = len(summands)
    alg = t.algebra
    f = alg.field
    if add is None:
        add = lambda g, h: g + h  # noqa: E731
    if grading is None:
        grading = lambda i, j, g, m: m  # noqa: E731
        degrees = [zero_degree]
    names = [f"t{i + 1}" for i in range(n)]
    H = {(i, j): hom_space(summands[i], summands[j]) for i in range(n) for j in range(n)}
    # radical of the category add(T)
    rad = {}
    for i in range(n):
        for j in range(n):
            if i != j:
                rad[(i, j)] = list(H[(i, j)].basis)
            else:
                es = endo_structure(summands[i])
                rad[(i, j)] = [es.space.combination(v) for v in es.radical]
    rad2 = {}
    for i in range(n):
        for j in range(n):
            prods = []
            for k in range(n):
                for a in rad[(i, k)]:
                    for b in rad[(k, j)]:
                        prods.append(b @ a)
            rad2[(i, j)] = prods
    # arrows: homogeneous complement of rad^2 inside rad
    arrows = []
    arrow_maps = {}
    arrow_degree = {}
    for i in range(n):
        for j in range(n):
            h = H[(i, j)]
            for g in degrees:
                pieces = [grading(i, j, g, m) for m in rad[(i, j)]]
                sq = [grading(i, j, g, m) for m in rad2[(i, j)]]
                sq_coords = _span_coords(h, sq)
                base = len(rref_rows(sq_coords, h.dim, f)[1]) if sq_coords else 0
                cur = list(sq_coords)
                for m in pieces:
                    c = h.coordinates(m)
                    if not any(c):
                        continue
                    trial = cur + [c]
                    r = len(rref_rows(trial, h.dim, f)[1])
                    if r > base:
                        cur, base = trial, r
                        name_a = f"a{len(arrows) + 1}"
                        arrows.append((name_a, names[i], names[j]))
                        arrow_maps[name_a] = m
                        arrow_degree[name_a] = g
    quiver = Quiver(names, arrows)
    ep = EndoPresentation(t, None, names, arrow_maps, arrow_degree)
    # enumerate nonzero paths; collect zero monomials and dependencies
    nonzero = {}
    zero_paths = []
    frontier = []
    for a_name, s, tt in arrows:
        p = Path(s, tt, (a_name,))
        m = arrow_maps[a_name]
        nonzero[p] = (m, arrow_degree[a_name])
        frontier.append(p)
    longest = 1
    while frontier:
        nxt = []
        for p in frontier:
            m, g = nonzero[p]
            for a in quiver.out_arrows[p.target]:
                q = Path(p.source, a.target, (a.name,) + p.arrows)
                val = arrow_maps[a.name] @ m
                if val.is_zero():
                    zero_paths.append(q)
                else:
                    nonzero[q] = (val, add(g, arrow_degree[a.name]))
                    nxt.append(q)
                    longest = max(longest, q.length)
        frontier = nxt
        if longest > alg.dim * n + 1:
            raise RuntimeError("radical of End(T) does not look nilpotent")
    groups: dict = {}
    for p, (m, g) in nonzero.items():
        if p.length >= 2:
            groups.setdefault((p.source, p.target, g), []).append(p)
    candidates = [RelationCombo([(1, p)], f) for p in zero_paths]
    for (s, tt, g), paths in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1], str(kv[0][2]))):
        paths.sort(key=lambda p: p.key(), reverse=True)
        h = H[(names.index(s), names.index(tt))]
        cols = [h.coordinates(nonzero[p][0]) for p in paths]
        mat = Mat.from_columns(cols, h.dim, f)
        for v in _reduced_kernel(mat):
            candidates.append(RelationCombo([(c, p) for c, p in zip(v, paths) if c], f))
    dim_b = sum(H[k].dim for k in H)
    relations = _minimal_relations(quiver, candidates, dim_b, f, max(longest + 1, 2))
    cap = max(2 * len(names) * max(len(arrows), 1), longest + 2)
    B = build_presentation(quiver, relations, cap=cap, field=f, name=name)
    if B.dim != dim_b:
        raise RuntimeError(f"presentation has dimension {B.dim}, End(T) has {dim_b}")
    ep.algebra = B
    _check_basis_values(ep, H)
    return ep


def _reduced_kernel(mat: Mat) -> list:
    """Null space basis in reduced echelon form (distinct leading terms)."""
    ker = kernel_basis(mat)
    if not ker:
        return []
    red, _ = rref_rows(ker, mat.ncols, mat.field)
    return red


def _minimal_relations(quiver: Quiver, candidates: list, target_dim: int, f, trunc: int) -> list:
    """Greedy generating set: keep a candidate unless it already lies in the ideal."""
    from .algebra import groebner, _Rewriter

    candidates = sorted(candidates, key=lambda r: r.terms[0][1].key())
    # all paths of length ``trunc`` vanish; use them to keep the completion finite
    trunc_paths = _paths_of_length(quiver, trunc)
    trunc_rels = [RelationCombo([(1, p)], f) for p in trunc_paths]
    kept: list = []
    for r in candidates:
        gb = groebner(kept + trunc_rels, f, cap=trunc + 2)
        rw = _Rewriter(f)
        rw.set_basis(gb)
        if rw.reduce(r.as_dict()):
            kept.append(r)
    try:
        B = build_presentation(quiver, kept, field=f, cap=max(trunc + 2, 2 * len(quiver.vertices) * max(len(quiver.arrows), 1)))
        if B.dim == target_dim:
            return kept
    except NotAdmissible:
        pass
    extra = list(trunc_rels)
    for r in list(extra):
        trial = [e for e in extra if e is not r]
        try:
            B = build_presentation(quiver, kept + trial, field=f, cap=trunc + 2)
        except NotAdmissible:
            continue
        if B.dim == target_dim:
            extra = trial
    return kept + extra


def _paths_of_length(quiver: Quiver, n: int) -> list:
    cur = [Path.trivial(v) for v in quiver.vertices]
    for _ in range(n):
        cur = [Path(p.source, a.target, (a.name,) + p.arrows) for p in cur for a in quiver.out_arrows[p.target]]
    return cur


def _check_basis_values(ep: EndoPresentation, H: dict):
    B = ep.algebra
    f = B.field
    for (i, j), h in H.items():
        s, t = ep.vertex_of[i], ep.vertex_of[j]
        paths = B.paths_between(s, t)
        if len(paths) != h.dim:
            raise RuntimeError("basis paths do not match Hom dimensions")
        if paths:
            coords = [h.coordinates(ep.path_value(p)) for p in paths]
            if len(rref_rows(coords, h.dim, f)[1]) != h.dim:
                raise RuntimeError("basis paths do not give a basis of Hom")


# transport


@dataclass
class TransportImage:
    source: Representation
    module: Representation
    spaces: list  # HomSpace(X, T_i) per summand


def transport(x: Representation, ep: EndoPresentation) -> TransportImage:
    key = id(x)
    hit = ep._transports.get(key)
    if hit is not None and hit.source is x:
        return hit
    B = ep.algebra
    f = B.field
    spaces = [hom_space(x, s) for s in ep.summands]
    dims = {ep.vertex_of[i]: spaces[i].dim for i in range(len(spaces))}
    mats = {}
    for a in B.quiver.arrows:
        i, j = ep.summand_index(a.source), ep.summand_index(a.target)
        fa = ep.arrow_maps[a.name]
        cols = [spaces[j].coordinates(fa @ b) for b in spaces[i].basis]
        mats[a.name] = Mat.from_columns(cols, spaces[j].dim, f) if cols else Mat.zero(spaces[j].dim, 0, f)
    mod = Representation(B, dims, mats, check=True, name=f"Hom({x.name or 'X'},T)")
    img = TransportImage(x, mod, spaces)
    ep._transports[key] = img
    return img


def transport_mor(u: Morphism, ep: EndoPresentation) -> Morphism:
    """``Hom(u, T): Y_T -> X_T`` for ``u: X -> Y``."""
    xt = transport(u.source, ep)
    yt = transport(u.target, ep)
    f = ep.algebra.field
    maps = {}
    for i, v in enumerate(ep.vertex_of):
        cols = [xt.spaces[i].coordinates(phi @ u) for phi in yt.spaces[i].basis]
        maps[v] = Mat.from_columns(cols, xt.spaces[i].dim, f) if cols else Mat.zero(xt.spaces[i].dim, 0, f)
    return Morphism(yt.module, xt.module, maps)


@dataclass
class ThetaResult:
    matrix: Mat
    injective: bool
    surjective: bool

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective


def theta(x: Representation, y: Representation, ep: EndoPresentation) -> ThetaResult:
    """``Hom_A(X, Y) -> Hom_B(Y_T, X_T)``, ``u -> Hom(u, T)``, in Hom bases."""
    hxy = hom_space(x, y)
    yt = transport(y, ep).module
    xt = transport(x, ep).module
    hb = hom_space(yt, xt)
    f = ep.algebra.field
    cols = [hb.coordinates(transport_mor(u, ep)) for u in hxy.basis]
    mat = Mat.from_columns(cols, hb.dim, f) if cols else Mat.zero(hb.dim, 0, f)
    r = rank(mat) if cols and hb.dim else 0
    return ThetaResult(mat, r == hxy.dim, r == hb.dim)


def transport_candidate(x: TiltingCandidate, ep: EndoPresentation, seed: int = 0) -> TiltingCandidate:
    """``Hom_A(X, T)`` split into indecomposable ``B``-modules."""
    parts = []
    for s in x.summands:
        parts.extend(indecomposable_summands(transport(s, ep).module, seed))
    return TiltingCandidate(parts)


# APR tilts


class NotASink(ValueError):
    pass


def apr_tilt(algebra: AlgebraPresentation, x: str, cap: int | None = None, seed: int = 0) -> TiltingCandidate:
    if not algebra.is_sink(x):
        raise NotASink(f"vertex {x} has outgoing arrows")
    a = regular_candidate(algebra)
    i = algebra.quiver.vindex[x]
    res = mutate_left(a, i, cap, seed)
    if res is None:
        raise MutationRejected(f"no left mutation of A at P{x}")
    t = res[0]
    t.label = f"apr:{x}"
    return t


# convex hulls and the comparison theorem


def predecessor_diagram(algebra: AlgebraPresentation, t: TiltingCandidate, vertex_cap: int = 10_000,
                        pd_cap: int | None = None, seed: int = 0) -> TiltingDiagram:
    """All predecessors of ``t`` with the arrows between them (closure under right mutation)."""
    return hasse_diagram(algebra, t, vertex_cap=vertex_cap, pd_cap=pd_cap, seed=seed, directions="right")


def hull_from_regular(algebra: AlgebraPresentation, t: TiltingCandidate, vertex_cap: int = 10_000,
                      pd_cap: int | None = None, seed: int = 0):
    """Convex hull of ``{A, t}``: diagram of predecessors, hull vertex list, hull arrows, index of A and t."""
    d = predecessor_diagram(algebra, t, vertex_cap, pd_cap, seed)
    a = d.find(regular_candidate(algebra))
    ti = 0
    if a is None:
        return d, sorted({ti}), [], None, ti
    verts, arrows = convex_hull(d, a, ti)
    return d, verts, arrows, a, ti


@dataclass
class HullComparison:
    hull_a: int
    hull_b: int
    vertex_map: list
    checks: dict
    counterexample: str = ""

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def as_dict(self) -> dict:
        return {
            "hull_sizes": [self.hull_a, self.hull_b],
            "vertex_map": self.vertex_map,
            "checks": dict(self.checks),
            "passed": self.passed,
            "counterexample": self.counterexample,
        }


def compare_hulls(algebra: AlgebraPresentation, t: TiltingCandidate, vertex_cap: int = 10_000,
                  pd_cap: int | None = None, seed: int = 0, ep: EndoPresentation | None = None) -> HullComparison:
    """Check that ``X -> Hom_A(X, T)`` maps the hull of ``{A, T}`` onto the
    opposite of the hull of ``{B, T_B}`` in the diagram of ``B``."""
    if ep is None:
        ep = endo_presentation(t)
    B = ep.algebra
    da, verts_a, arrows_a, ia, it = hull_from_regular(algebra, t, vertex_cap, pd_cap, seed)
    tb = transport_candidate(regular_candidate(algebra), ep, seed)
    db, verts_b, arrows_b, ib, itb = hull_from_regular(B, tb, vertex_cap, pd_cap, seed)
    checks = {}
    vmap = {}
    bad = ""
    for k in verts_a:
        img = transport_candidate(da.vertices[k], ep, seed)
        j = db.find(img)
        if j is None or j not in verts_b:
            bad = bad or f"image of hull vertex {da.label(k)} is not in the B-side hull"
            vmap[k] = None
        else:
            vmap[k] = j
    images = [j for j in vmap.values() if j is not None]
    checks["injective_on_vertices"] = len(set(images)) == len(images) and None not in vmap.values()
    checks["bijective"] = checks["injective_on_vertices"] and set(images) == set(verts_b)
    rev = set(arrows_b)
    checks["reverses_arrows"] = all(vmap.get(y) is not None and vmap.get(x) is not None
                                    and (vmap[y], vmap[x]) in rev for x, y in arrows_a)
    checks["arrow_count"] = len(arrows_a) == len(arrows_b)
    checks["A_to_T"] = ia is not None and vmap.get(ia) == itb
    checks["T_to_B"] = ib is not None and vmap.get(it) == ib
    if not checks["reverses_arrows"] and not bad:
        bad = "some hull arrow is not sent to a reversed arrow"
    pairs = [[list(map(list, [s.dimvec for s in da.vertices[k].summands])),
              None if vmap[k] is None else [list(s.dimvec) for s in db.vertices[vmap[k]].summands]]
             for k in verts_a]
    return HullComparison(len(verts_a), len(verts_b), pairs, checks, bad)


# checks of the individual steps behind the comparison theorem


def _distinct(mods: list, seed: int = 0) -> list:
    from .repmod import is_isomorphic

    out = []
    for m in mods:
        if not any(n.dims == m.dims and is_isomorphic(n, m, seed) for n in out):
            out.append(m)
    return out


def theta_check(algebra: AlgebraPresentation, t: TiltingCandidate, ep: EndoPresentation | None = None,
                extra: Sequence[Representation] = (), vertex_cap: int = 10_000, pd_cap: int | None = None,
                seed: int = 0, beyond_steps: int = 0) -> dict:
    """``theta(X, Y)`` for ``Y`` a summand of a predecessor of ``T``.

    ``X`` runs over the hull vertices of ``{A, T}`` (as modules), their
    summands, the simple and indecomposable injective modules and ``extra``.

    With ``beyond_steps > 0`` the same ``X`` are also paired with summands of
    the modules reached from ``T`` by up to that many left mutations.  Those
    pairs carry no claim: they are tallied under ``"beyond"`` and never
    affect ``"passed"``.
    """
    from .repmod import injective, simple

    if ep is None:
        ep = endo_presentation(t)
    d, verts, _arrows, _a, _t = hull_from_regular(algebra, t, vertex_cap, pd_cap, seed)
    preds = range(len(d.vertices))  # the diagram holds exactly the predecessors of t
    ys = _distinct([s for k in preds for s in d.vertices[k].summands], seed)
    xs = [d.vertices[k].module for k in verts]
    xs += _distinct([s for k in verts for s in d.vertices[k].summands]
                    + [simple(algebra, v) for v in algebra.quiver.vertices]
                    + [injective(algebra, v) for v in algebra.quiver.vertices] + list(extra), seed)
    failures = []
    count = 0
    for x in xs:
        for y in ys:
            r = theta(x, y, ep)
            count += 1
            if not r.bijective:
                failures.append({"x": list(x.dimvec), "y": list(y.dimvec),
                                 "injective": r.injective, "surjective": r.surjective})
    out = {"passed": not failures, "pairs": count, "failures": failures,
           "predecessors": len(d.vertices), "hull": len(verts)}
    if beyond_steps > 0:
        out["beyond"] = _theta_beyond(t, xs, ys, ep, beyond_steps, pd_cap, seed)
    return out


def _theta_beyond(t: TiltingCandidate, xs, ys, ep: EndoPresentation, steps: int, pd_cap, seed: int) -> dict:
    from .tilting import mutate_left

    frontier, later = [t], []
    for _ in range(steps):
        nxt = []
        for u in frontier:
            for i in range(len(u)):
                res = mutate_left(u, i, pd_cap, seed)
                if res is not None:
                    nxt.append(res[0])
        later.extend(nxt)
        frontier = nxt
    from .repmod import is_isomorphic

    new_ys = [y for y in _distinct([s for u in later for s in u.summands], seed)
              if not any(y.dims == z.dims and is_isomorphic(y, z, seed) for z in ys)]
    tally = {"successors": len(later), "pairs": 0, "bijective": 0, "not_bijective": []}
    for x in xs:
        for y in new_ys:
            tally["pairs"] += 1
            if theta(x, y, ep).bijective:
                tally["bijective"] += 1
            else:
                tally["not_bijective"].append({"x": list(x.dimvec), "y": list(y.dimvec)})
    return tally


def _summand_index(t: TiltingCandidate, m: Representation, seed: int = 0) -> int | None:
    from .repmod import is_isomorphic

    for i, s in enumerate(t.summands):
        if s.dims == m.dims and is_isomorphic(s, m, seed):
            return i
    return None


def _exact_short(u: Morphism, v: Morphism) -> bool:
    comp = v @ u
    if not comp.is_zero():
        return False
    return u.is_injective() and v.is_surjective() and \
        u.source.total_dim + v.target.total_dim == u.target.total_dim


def arrow_transport_check(algebra: AlgebraPresentation, t: TiltingCandidate, ep: EndoPresentation | None = None,
                          vertex_cap: int = 10_000, pd_cap: int | None = None, seed: int = 0) -> dict:
    """Every arrow ``X -> Y`` between predecessors of ``T`` becomes an arrow ``Y_T -> X_T``.

    The transported exchange sequence is checked for exactness and the arrow
    is reproduced by a left mutation of ``Y_T`` in the diagram of ``B``.
    """
    from .tilting import splits_left

    if ep is None:
        ep = endo_presentation(t)
    B = ep.algebra
    cap_b = B.dim if pd_cap is None else pd_cap
    d = predecessor_diagram(algebra, t, vertex_cap, pd_cap, seed)
    failures = []
    for a, b, edge in d.edges:
        xt = transport_candidate(d.vertices[a], ep, seed)
        yt = transport_candidate(d.vertices[b], ep, seed)
        info = {"arrow": [a, b]}
        if not (is_tilting(xt, cap_b, seed) and is_tilting(yt, cap_b, seed)):
            failures.append({**info, "reason": "transport is not tilting"})
            continue
        ut = transport_mor(edge.v, ep)  # N_T -> X'_T
        vt = transport_mor(edge.u, ep)  # X'_T -> M_T
        if not _exact_short(ut, vt):
            failures.append({**info, "reason": "transported sequence is not exact"})
            continue
        if splits_left(ut):
            failures.append({**info, "reason": "transported sequence splits"})
            continue
        k = _summand_index(yt, transport(edge.y, ep).module, seed)
        res = mutate_left(yt, k, cap_b, seed) if k is not None else None
        if res is None or not same_candidate(res[0], xt, seed):
            failures.append({**info, "reason": "no arrow Y_T -> X_T"})
    return {"passed": not failures, "arrows": len(d.edges), "failures": failures}


def reachable_from_regular(algebra: AlgebraPresentation, target: TiltingCandidate, cap: int | None = None,
                           seed: int = 0, vertex_cap: int = 10_000) -> bool:
    """Whether ``target`` lies on a path of left mutations starting at the regular module.

    Only vertices ``t`` with ``target <= t`` are expanded, which keeps the
    search finite when the hull is.
    """
    from collections import deque

    from .tilting import leq

    cap = algebra.dim if cap is None else cap
    start = regular_candidate(algebra)
    seen = [start]
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if same_candidate(cur, target, seed):
            return True
        for i in range(len(cur)):
            res = mutate_left(cur, i, cap, seed)
            if res is None:
                continue
            new = res[0]
            if not leq(target, new, cap):
                continue
            if any(same_candidate(new, s, seed) for s in seen):
                continue
            if len(seen) >= vertex_cap:
                raise RuntimeError("reachability search exceeded the vertex cap")
            seen.append(new)
            queue.append(new)
    return False


def path_from_B_check(algebra: AlgebraPresentation, t: TiltingCandidate, ep: EndoPresentation | None = None,
                      vertex_cap: int = 10_000, pd_cap: int | None = None, seed: int = 0) -> dict:
    """For every predecessor ``X`` of ``T``, ``X_T`` is tilting and reachable from ``B``."""
    if ep is None:
        ep = endo_presentation(t)
    B = ep.algebra
    cap_b = B.dim if pd_cap is None else pd_cap
    d = predecessor_diagram(algebra, t, vertex_cap, pd_cap, seed)
    failures = []
    for k, x in enumerate(d.vertices):
        xt = transport_candidate(x, ep, seed)
        if not is_tilting(xt, cap_b, seed):
            failures.append({"vertex": k, "reason": "transport is not tilting"})
        elif not reachable_from_regular(B, xt, cap_b, seed, vertex_cap):
            failures.append({"vertex": k, "reason": "not reachable from B"})
    return {"passed": not failures, "vertices": len(d.vertices), "failures": failures}

"""Random small algebras and modules for property tests and benchmarks."""
from __future__ import annotations

import random

from .algebra import AlgebraPresentation, path_algebra
from .exactla import QQ, Field, Mat, column_space_basis
from .repmod import Representation, hom_space


def random_linear_nakayama(rng: random.Random, max_vertices: int = 4, field: Field = QQ) -> AlgebraPresentation:
    """``1 -> 2 -> ... -> n`` modulo a random set of zero paths.

    Each vertex ``i`` gets a random bound ``c_i`` on the length of paths
    starting there, made admissible (``c_i <= c_(i+1) + 1``, paths of length
    at least one always survive).  The zero relations are the minimal paths
    exceeding these bounds.
    """
    n = rng.randint(2, max_vertices)
    verts = [str(i + 1) for i in range(n)]
    arrows = [(f"x{i + 1}", verts[i], verts[i + 1]) for i in range(n - 1)]
    c = [0] * n
    for i in range(n - 2, -1, -1):
        c[i] = rng.randint(1, c[i + 1] + 1)
    rels = []
    for i in range(n):
        ln = c[i] + 1
        if i + ln <= n - 1:
            # path from vertex i of length c_i + 1, minimal when the next vertex does not already kill it
            if c[i + 1] + 1 > c[i]:
                rels.append([f"x{k + 1}" for k in range(i + ln - 1, i - 1, -1)])
    return path_algebra(verts, arrows, rels, field=field, name=f"N{n}:{''.join(map(str, c))}")


def random_module(alg: AlgebraPresentation, rng: random.Random, max_summands: int = 2,
                  max_generators: int = 2) -> Representation:
    """A random quotient of a sum of one or two indecomposable projectives.

    The quotient is taken by the submodule generated by up to
    ``max_generators`` random vectors with entries in ``{-2..2}``.
    """
    from .repmod import direct_sum_module, projective, quotient_representation

    parts = [projective(alg, rng.choice(alg.quiver.vertices)) for _ in range(rng.randint(1, max_summands))]
    m = direct_sum_module(parts) if len(parts) > 1 else parts[0]
    gens: dict = {v: [] for v in alg.quiver.vertices}
    for _ in range(rng.randint(0, max_generators)):
        v = rng.choice([x for x in alg.quiver.vertices if m.dims[x]])
        vec = [m.field(rng.randint(-2, 2)) for _ in range(m.dims[v])]
        for x, cols in _generated_submodule(m, v, vec).items():
            gens[x].extend(cols)
    q, _ = quotient_representation(m, gens)
    return q if not q.is_zero() else m


def _generated_submodule(m: Representation, v: str, vec: list) -> dict:
    """Spanning sets (per vertex) of the submodule generated by ``vec`` at ``v``."""
    alg = m.algebra
    gens = {x: [] for x in alg.quiver.vertices}
    for p in alg.paths_from(v):
        w = m.action(p).apply(vec)
        if any(w):
            gens[p.target].append(list(w))
    out = {}
    for x, cols in gens.items():
        if cols:
            out[x] = column_space_basis(Mat.from_columns(cols, m.dims[x], m.field))
        else:
            out[x] = []
    return out


def random_morphism(m: Representation, n: Representation, rng: random.Random):
    h = hom_space(m, n)
    return h.combination([m.field(rng.randint(-3, 3)) for _ in range(h.dim)])

"""Command-line interface.

Exit codes: 0 when every assertion holds, 1 when one fails, 2 for unusable
input and 3 when a computation hits one of the caps.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path as FsPath

import click

from .algebra import AlgebraError, AlgebraPresentation, NotAdmissible
from .covering import (CoveringError, FiniteGroup, ValidationFailed, build_covering, connected_components,
                       endo_covering, module_first_kind, pullup, pullup_tilting_check, pushdown,
                       verify_covering_functor)
from .endo import (NotASink, apr_tilt, arrow_transport_check, compare_hulls, endo_presentation,
                   path_from_B_check, theta_check, transport)
from .exactla import FieldError
from .formats import (AlgebraSpecFile, FormatError, GradingFile, digest, format_summands,
                      parse_module_document, read_algebra, report_document)
from .repmod import ExceedsCap, ModuleError, decompose, hom_dim, projective
from .tilting import (MutationRejected, NotTilting, TiltingCandidate, VertexCapExceeded,
                      dual_regular_candidate, hasse_diagram, is_tilting, regular_candidate)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class _Ctx:
    def __init__(self, seed, cap_pd, cap_vertices, cap_length):
        self.seed = seed
        self.cap_pd = cap_pd
        self.cap_vertices = cap_vertices
        self.cap_length = cap_length


def _emit(text: str, out: str | None):
    if out:
        FsPath(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _finish(command: str, texts: list, seed: int, assertions: dict, payload: dict, out: str | None):
    _emit(report_document(command, digest(*texts), seed, assertions, payload), out)
    sys.exit(EXIT_OK if all(assertions.values()) else EXIT_FAIL)


def _run(fn):
    """Map library errors to exit codes."""
    try:
        fn()
    except (VertexCapExceeded, ExceedsCap) as exc:
        click.echo(f"cap exceeded: {exc}", err=True)
        sys.exit(EXIT_CAP)
    except (FormatError, AlgebraError, ModuleError, FieldError, CoveringError, NotASink, NotTilting,
            FileNotFoundError, json.JSONDecodeError) as exc:
        click.echo(f"input error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    except (MutationRejected, ValidationFailed, AssertionError) as exc:
        click.echo(f"assertion failed: {exc}", err=True)
        sys.exit(EXIT_FAIL)


def _algebra(ctx: _Ctx, ref: str) -> tuple[AlgebraPresentation, str]:
    try:
        return read_algebra(ref, ctx.cap_length)
    except NotAdmissible as exc:
        raise FormatError(str(exc)) from None


def _tilting(ctx: _Ctx, alg: AlgebraPresentation, spec: str) -> tuple[TiltingCandidate, str]:
    """``A``, ``DA``, ``apr:<sink>`` or a module file (one module or a list of summands)."""
    if spec == "A":
        return regular_candidate(alg), spec
    if spec == "DA":
        return dual_regular_candidate(alg), spec
    if spec.startswith("apr:"):
        return apr_tilt(alg, spec[4:], ctx.cap_pd, ctx.seed), spec
    path = FsPath(spec)
    if not path.is_file():
        raise FormatError(f"tilting module {spec!r} is neither A, DA, apr:<sink> nor a file")
    text = path.read_text()
    mods = [m.build(alg) for m in parse_module_document(text)]
    parts = []
    for m in mods:
        for r, k in decompose(m, ctx.seed):
            parts.extend([r] * k)
    return TiltingCandidate(parts), text


def _module(alg: AlgebraPresentation, spec: str) -> tuple[list, str]:
    text = FsPath(spec).read_text()
    return [m.build(alg) for m in parse_module_document(text)], text


def _shared_options(fn):
    """Let the shared flags also follow the subcommand name."""
    import functools

    @click.option("--seed", "seed_", type=int, default=None, help="Overrides the group-level --seed.")
    @click.option("--cap-pd", "cap_pd_", type=int, default=None)
    @click.option("--cap-vertices", "cap_vertices_", type=int, default=None)
    @click.option("--cap-length", "cap_length_", type=int, default=None)
    @functools.wraps(fn)
    def wrapper(obj, *args, seed_=None, cap_pd_=None, cap_vertices_=None, cap_length_=None, **kwargs):
        for attr, val in (("seed", seed_), ("cap_pd", cap_pd_), ("cap_vertices", cap_vertices_),
                          ("cap_length", cap_length_)):
            if val is not None:
                setattr(obj, attr, val)
        return fn(obj, *args, **kwargs)

    return wrapper


def _dimvecs(t: TiltingCandidate) -> list:
    return [list(s.dimvec) for s in t.summands]


@click.group()
@click.option("--seed", default=0, show_default=True, help="Seed for randomized isomorphism tests.")
@click.option("--cap-pd", type=int, default=None, help="Bound on projective dimensions (default: dim A).")
@click.option("--cap-vertices", type=int, default=10_000, show_default=True, help="Bound on diagram size.")
@click.option("--cap-length", type=int, default=None, help="Path length cap for admissibility.")
@click.pass_context
def main(ctx, seed, cap_pd, cap_vertices, cap_length):
    """Tilting modules, their Hasse diagrams, endomorphism algebras and coverings."""
    ctx.obj = _Ctx(seed, cap_pd, cap_vertices, cap_length)


@main.command()
@click.argument("algebra")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
@_shared_options
def basis(obj: _Ctx, algebra, out):
    """Dimension and path basis of ALGEBRA (fixture name or file)."""

    def go():
        alg, text = _algebra(obj, algebra)
        payload = {
            "dimension": alg.dim,
            "basis": [str(p) for p in alg.basis],
            "groebner": [[[alg.field.format(c), list(p.arrows)] for p, c in sorted(g.items(), key=lambda x: x[0].key(),
                                                                                     reverse=True)]
                         for g in alg.gb],
            "hom_dims": alg.hom_space_dims(),
        }
        _finish("basis", [text], obj.seed, {"admissible": True}, payload, out)

    _run(go)


@main.command()
@click.argument("algebra")
@click.option("--start", default="A", show_default=True, help="A, DA, apr:<sink> or a module file.")
@click.option("--format", "fmt", type=click.Choice(["dot", "report"]), default="report", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
@_shared_options
def hasse(obj: _Ctx, algebra, start, fmt, out):
    """Hasse diagram of basic tilting modules reachable from START."""

    def go():
        alg, text = _algebra(obj, algebra)
        t, ttext = _tilting(obj, alg, start)
        d = hasse_diagram(alg, t, obj.cap_vertices, obj.cap_pd, obj.seed)
        if fmt == "dot":
            _emit(d.to_dot(alg.name or "K"), out)
            return
        cap = alg.dim if obj.cap_pd is None else obj.cap_pd
        order = d._topological()
        assertions = {
            "all_vertices_tilting": all(bool(is_tilting(v, cap, obj.seed)) for v in d.vertices),
            "acyclic": len(order) == len(d.vertices),
        }
        payload = d.report()
        payload["regular"] = d.regular_index
        payload["dual_regular"] = d.dual_index
        _finish("hasse", [text, ttext], obj.seed, assertions, payload, out)

    _run(go)


@main.command()
@click.argument("algebra")
@click.argument("tilting")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Report destination.")
@click.option("--emit-algebra", type=click.Path(dir_okay=False), default=None,
              help="Write the presentation of End(T) as an algebra file.")
@click.pass_obj
@_shared_options
def endo(obj: _Ctx, algebra, tilting, out, emit_algebra):
    """Presentation of End(T) and the B-modules Hom(P_x, T)."""

    def go():
        alg, text = _algebra(obj, algebra)
        t, ttext = _tilting(obj, alg, tilting)
        ep = endo_presentation(t)
        B = ep.algebra
        spec = AlgebraSpecFile.from_algebra(B)
        spec_text = spec.format()
        if emit_algebra:
            FsPath(emit_algebra).write_text(spec_text)
        hom_dim_total = sum(hom_dim(s, r) for s in t.summands for r in t.summands)
        payload = {
            "dimension": B.dim,
            "summands": _dimvecs(t),
            "algebra": spec.to_doc(),
            "projective_transports": {x: list(transport(projective(alg, x), ep).module.dimvec)
                                      for x in alg.quiver.vertices},
        }
        assertions = {"dimension_matches_hom": B.dim == hom_dim_total}
        _finish("endo", [text, ttext], obj.seed, assertions, payload, out)

    _run(go)


@main.command()
@click.argument("algebra")
@click.argument("check", type=click.Choice(["hulls", "theta", "arrows", "reachable"]))
@click.argument("tilting")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--beyond-steps", type=int, default=0, show_default=True,
              help="theta only: also tally theta on summands up to this many left mutations past T "
                   "(reported, never asserted).")
@click.pass_obj
@_shared_options
def verify(obj: _Ctx, algebra, check, tilting, out, beyond_steps):
    """Check the comparison between the diagrams of A and End(T) for T = TILTING."""

    def go():
        alg, text = _algebra(obj, algebra)
        t, ttext = _tilting(obj, alg, tilting)
        ep = endo_presentation(t)
        kw = dict(vertex_cap=obj.cap_vertices, pd_cap=obj.cap_pd, seed=obj.seed)
        if check == "hulls":
            rep = compare_hulls(alg, t, ep=ep, **kw)
            assertions, payload = dict(rep.checks), rep.as_dict()
        else:
            fn = {"theta": theta_check, "arrows": arrow_transport_check, "reachable": path_from_B_check}[check]
            if check == "theta" and beyond_steps > 0:
                kw["beyond_steps"] = beyond_steps
            payload = fn(alg, t, ep, **kw)
            assertions = {check: payload["passed"]}
        _finish(f"verify {check}", [text, ttext], obj.seed, assertions, payload, out)

    _run(go)


# coverings


def _grading(grading: str | None, weights: tuple, group: str | None):
    if grading:
        g = GradingFile.parse(FsPath(grading).read_text())
        G = FiniteGroup.parse(group or g.group)
        w = dict(g.weights)
    else:
        G = FiniteGroup.parse(group or "1")
        w = {}
    for item in weights:
        if "=" not in item:
            raise FormatError(f"weight {item!r} is not of the form arrow=residue[,residue...]")
        a, v = item.split("=", 1)
        try:
            w[a] = [int(x) for x in v.split(",")]
        except ValueError:
            raise FormatError(f"weight {item!r} has a non-integer residue") from None
    return G, w


@main.command()
@click.argument("action", type=click.Choice(["build", "verify", "pushdown", "pullup", "first-kind",
                                             "pullup-tilting", "endo-cover"]))
@click.argument("algebra")
@click.argument("inputs", nargs=-1)
@click.option("--grading", type=click.Path(exists=True, dir_okay=False), default=None, help="Grading file.")
@click.option("--weight", "weights", multiple=True, help="Arrow weight, e.g. --weight a=1.")
@click.option("--group", default=None, help="Group such as Z/2 or Z/2xZ/3 (overrides the grading file).")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--emit-algebra", type=click.Path(dir_okay=False), default=None,
              help="Write the covering algebra as an algebra file (build, endo-cover).")
@click.pass_obj
@_shared_options
def cover(obj: _Ctx, action, algebra, inputs, grading, weights, group, out, emit_algebra):
    """Galois covering of ALGEBRA given by a grading with a finite abelian group.

    INPUTS are module files (pushdown reads modules over the covering, the
    others over ALGEBRA) or a tilting spec for first-kind, pullup-tilting and
    endo-cover.
    """

    def go():
        alg, text = _algebra(obj, algebra)
        G, w = _grading(grading, weights, group)
        cd = build_covering(alg, w, G)
        texts = [text, json.dumps({"group": str(G), "weights": {k: list(v) for k, v in sorted(cd.weights.items())}})]
        C = cd.cover
        if emit_algebra and action == "build":
            FsPath(emit_algebra).write_text(AlgebraSpecFile.from_algebra(C).format())
        if action in ("build", "verify"):
            rep = verify_covering_functor(cd)
            comps = connected_components(C)
            payload = {"group": str(G), "vertices": list(C.quiver.vertices),
                       "arrows": [[a.name, a.source, a.target] for a in C.quiver.arrows],
                       "dimension": C.dim, "connected": len(comps) == 1, "components": len(comps),
                       "failures": rep["failures"]}
            assertions = dict(rep["checks"]) if action == "verify" else {"covering": rep["passed"]}
            _finish(f"cover {action}", texts, obj.seed, assertions, payload, out)
        if action in ("pushdown", "pullup"):
            mods = []
            for spec in inputs:
                ms, mtext = _module(C if action == "pushdown" else alg, spec)
                mods.extend(ms)
                texts.append(mtext)
            res = [pushdown(cd, m) if action == "pushdown" else pullup(cd, m) for m in mods]
            payload = {"modules": json.loads(format_summands(res))["summands"]}
            _finish(f"cover {action}", texts, obj.seed, {"computed": True}, payload, out)
        if not inputs:
            raise FormatError(f"{action} needs a tilting spec or module file")
        if action == "first-kind":
            parts = []
            for spec in inputs:
                if FsPath(spec).is_file():
                    ms, mtext = _module(alg, spec)
                    parts.extend(ms)
                else:
                    t, mtext = _tilting(obj, alg, spec)
                    parts.extend(t.summands)
                texts.append(mtext)
            v = module_first_kind(cd, TiltingCandidate(parts), obj.seed)
            wit = [None if x is None else {"lift": list(x.hat.dimvec), "iso_verified": x.verify()}
                   for x in v.witnesses]
            payload = {"summands": [list(s.dimvec) for s in v.summands], "witnesses": wit}
            _finish("cover first-kind", texts, obj.seed, {"first_kind": v.passed}, payload, out)
        t, ttext = _tilting(obj, alg, inputs[0])
        texts.append(ttext)
        if action == "pullup-tilting":
            rep = pullup_tilting_check(cd, t, obj.cap_pd, obj.seed)
            payload = {k: v for k, v in rep.items() if k != "checks"}
            _finish("cover pullup-tilting", texts, obj.seed, dict(rep["checks"]), payload, out)
        # endo-cover
        ec = endo_covering(cd, t, seed=obj.seed)
        if emit_algebra:
            FsPath(emit_algebra).write_text(AlgebraSpecFile.from_algebra(ec.covering.cover).format())
        payload = dict(ec.report)
        payload["base"] = AlgebraSpecFile.from_algebra(ec.presentation.algebra).to_doc()
        payload["vertices"] = list(ec.covering.cover.quiver.vertices)
        payload["arrows"] = [[a.name, a.source, a.target] for a in ec.covering.cover.quiver.arrows]
        checks = {k: v for k, v in ec.report["checks"].items() if k != "connected"}
        _finish("cover endo-cover", texts, obj.seed, checks, payload, out)

    _run(go)


if __name__ == "__main__":  # pragma: no cover
    main()

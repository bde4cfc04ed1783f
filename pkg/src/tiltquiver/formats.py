"""JSON documents for algebras, modules, gradings and reports.

Every document is written with two-space indentation, keys in a fixed order
and a trailing newline, so formatting a parsed document reproduces the
original bytes.
"""
from __future__ import annotations

import hashlib
import json
from functools import lru_cache
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path as FsPath

from .algebra import AlgebraPresentation, Path, RelationCombo, build_presentation, Quiver
from .exactla import Field, Mat
from .repmod import Representation


class FormatError(ValueError):
    pass


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _load(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}") from None


def _need(doc: dict, key: str, kind):
    if key not in doc:
        raise FormatError(f"missing field {key!r}")
    if not isinstance(doc[key], kind):
        raise FormatError(f"field {key!r} has the wrong type")
    return doc[key]


# algebras


@dataclass
class AlgebraSpecFile:
    name: str
    field: str
    vertices: list
    arrows: list  # [id, source, target]
    relations: list  # [[coef string, [arrow ids]], ...] per relation
    cap: int | None = None
    description: str = ""

    def to_doc(self) -> dict:
        doc = {"name": self.name}
        if self.description:
            doc["description"] = self.description
        doc["field"] = self.field
        doc["vertices"] = list(self.vertices)
        doc["arrows"] = [{"id": a, "source": s, "target": t} for a, s, t in self.arrows]
        doc["relations"] = [[[c, list(p)] for c, p in r] for r in self.relations]
        if self.cap is not None:
            doc["cap"] = self.cap
        return doc

    def format(self) -> str:
        return _dump(self.to_doc())

    @classmethod
    def from_doc(cls, doc) -> "AlgebraSpecFile":
        if not isinstance(doc, dict):
            raise FormatError("algebra document must be an object")
        verts = [str(v) for v in _need(doc, "vertices", list)]
        arrows = []
        for a in _need(doc, "arrows", list):
            if not isinstance(a, dict) or not {"id", "source", "target"} <= set(a):
                raise FormatError("each arrow needs id, source and target")
            arrows.append((str(a["id"]), str(a["source"]), str(a["target"])))
        rels = []
        for r in doc.get("relations", []):
            if not isinstance(r, list) or not r:
                raise FormatError("each relation is a nonempty list of [coefficient, path] terms")
            terms = []
            for term in r:
                if not (isinstance(term, list) and len(term) == 2 and isinstance(term[1], list)):
                    raise FormatError("relation terms are [coefficient, [arrow ids]]")
                terms.append((str(term[0]), tuple(str(x) for x in term[1])))
            rels.append(terms)
        cap = doc.get("cap")
        if cap is not None and not isinstance(cap, int):
            raise FormatError("cap must be an integer")
        return cls(str(doc.get("name", "")), str(doc.get("field", "Q")), verts, arrows, rels, cap,
                   str(doc.get("description", "")))

    @classmethod
    def parse(cls, text: str) -> "AlgebraSpecFile":
        return cls.from_doc(_load(text))

    def build(self, cap: int | None = None) -> AlgebraPresentation:
        try:
            f = Field.from_name(self.field)
        except ValueError as exc:
            raise FormatError(str(exc)) from None
        q = Quiver(self.vertices, self.arrows)
        rels = []
        for r in self.relations:
            terms = []
            for c, p in r:
                try:
                    coef = f.parse(c)
                except (ValueError, ZeroDivisionError):
                    raise FormatError(f"bad coefficient {c!r}") from None
                terms.append((coef, Path.of(q, p)))
            rels.append(RelationCombo(terms, f))
        return build_presentation(q, rels, cap=cap if cap is not None else self.cap, field=f, name=self.name)

    @classmethod
    def from_algebra(cls, alg: AlgebraPresentation, description: str = "") -> "AlgebraSpecFile":
        f = alg.field
        rels = [[(f.format(c), p.arrows) for c, p in r.terms] for r in alg.relations]
        return cls(alg.name, f.name, list(alg.quiver.vertices),
                   [(a.name, a.source, a.target) for a in alg.quiver.arrows], rels, None, description)


# modules


@dataclass
class ModuleSpecFile:
    algebra: str
    dims: dict
    mats: dict  # arrow id -> rows of coefficient strings
    name: str = ""

    def to_doc(self) -> dict:
        doc = {"algebra": self.algebra}
        if self.name:
            doc["name"] = self.name
        doc["dims"] = dict(self.dims)
        doc["mats"] = {a: [list(r) for r in m] for a, m in self.mats.items()}
        return doc

    def format(self) -> str:
        return _dump(self.to_doc())

    @classmethod
    def from_doc(cls, doc) -> "ModuleSpecFile":
        if not isinstance(doc, dict):
            raise FormatError("module document must be an object")
        dims = {str(k): int(v) for k, v in _need(doc, "dims", dict).items()}
        mats = {}
        for a, rows in doc.get("mats", {}).items():
            if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
                raise FormatError(f"matrix for {a} must be a list of rows")
            mats[str(a)] = [[str(x) for x in r] for r in rows]
        return cls(str(doc.get("algebra", "")), dims, mats, str(doc.get("name", "")))

    @classmethod
    def parse(cls, text: str) -> "ModuleSpecFile":
        return cls.from_doc(_load(text))

    def build(self, alg: AlgebraPresentation) -> Representation:
        if self.algebra and alg.name and self.algebra != alg.name:
            raise FormatError(f"module is over {self.algebra!r}, not {alg.name!r}")
        f = alg.field
        unknown = set(self.dims) - set(alg.quiver.vertices)
        if unknown:
            raise FormatError(f"unknown vertices {sorted(unknown)}")
        mats = {}
        for a in alg.quiver.arrows:
            rows = self.mats.get(a.name)
            nr, nc = self.dims.get(a.target, 0), self.dims.get(a.source, 0)
            if rows is None:
                continue
            if nr == 0 and rows in ([], [[]]):
                rows = []
            try:
                mats[a.name] = Mat(f, nr, nc, [[f.parse(x) for x in r] for r in rows])
            except (ValueError, ZeroDivisionError) as exc:
                raise FormatError(f"matrix for {a.name}: {exc}") from None
        extra = set(self.mats) - set(alg.quiver.arrow)
        if extra:
            raise FormatError(f"unknown arrows {sorted(extra)}")
        try:
            return Representation(alg, self.dims, mats, check=True, name=self.name)
        except ValueError as exc:
            raise FormatError(str(exc)) from None

    @classmethod
    def from_module(cls, m: Representation, name: str = "") -> "ModuleSpecFile":
        f = m.field
        mats = {a: [[f.format(x) for x in r] for r in mat.rows] for a, mat in m.mats.items()}
        return cls(m.algebra.name, dict(m.dims), mats, name or m.name)


def parse_module_document(text: str) -> list:
    """A module file holds one module or ``{"summands": [...]}``."""
    doc = _load(text)
    if isinstance(doc, dict) and "summands" in doc:
        return [ModuleSpecFile.from_doc(d) for d in _need(doc, "summands", list)]
    return [ModuleSpecFile.from_doc(doc)]


def format_summands(mods) -> str:
    return _dump({"summands": [ModuleSpecFile.from_module(m).to_doc() for m in mods]})


# gradings


@dataclass
class GradingFile:
    group: str
    weights: dict = field(default_factory=dict)  # arrow id -> list of residues

    def format(self) -> str:
        return _dump({"group": self.group, "weights": {a: list(w) for a, w in self.weights.items()}})

    @classmethod
    def parse(cls, text: str) -> "GradingFile":
        doc = _load(text)
        if not isinstance(doc, dict):
            raise FormatError("grading document must be an object")
        w = {}
        for a, v in doc.get("weights", {}).items():
            if isinstance(v, int):
                v = [v]
            if not isinstance(v, list) or not all(isinstance(x, int) for x in v):
                raise FormatError(f"weight of {a} must be a list of integers")
            w[str(a)] = v
        return cls(str(doc.get("group", "1")), w)


# reports


def digest(*texts: str) -> str:
    h = hashlib.sha256()
    for t in texts:
        h.update(t.encode())
        h.update(b"\0")
    return h.hexdigest()[:16]


def report_document(command: str, inputs_digest: str, seed: int, assertions: dict, payload: dict) -> str:
    return _dump({
        "command": command,
        "inputs": inputs_digest,
        "seed": seed,
        "passed": all(assertions.values()),
        "assertions": assertions,
        "payload": payload,
    })


# bundled fixtures

FIXTURES = ("A2", "EX49A", "EX49B", "EX65A")


def fixture_text(name: str) -> str:
    try:
        return resources.files("tiltquiver").joinpath("fixtures", f"{name}.json").read_text()
    except FileNotFoundError:
        raise FormatError(f"no bundled fixture {name!r}") from None


@lru_cache(maxsize=None)
def load_fixture(name: str) -> AlgebraPresentation:
    """The bundled algebra ``name``; repeated calls return the same object."""
    return AlgebraSpecFile.parse(fixture_text(name)).build()


def read_algebra(ref: str, cap: int | None = None) -> tuple[AlgebraPresentation, str]:
    """Load a bundled fixture by name or an algebra file by path; returns the algebra and its text."""
    p = FsPath(ref)
    if p.is_file():
        text = p.read_text()
    elif ref in FIXTURES:
        text = fixture_text(ref)
    else:
        raise FormatError(f"no algebra file or fixture named {ref!r}")
    return AlgebraSpecFile.parse(text).build(cap), text

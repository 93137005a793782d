"""Canonical JSON interchange and DOT rendering.

The semigroupoid document has top-level keys ``objects`` (list of
{id,name}), ``arrows`` (list of {id,dom,cod,label}) and ``table`` (list
of [x,y,xy] triples), plus optional ``statespace``, ``graph``,
``morphism`` and ``provenance`` blocks.  Serialization is canonical:
identical inputs produce byte-identical text.
"""

from __future__ import annotations

import json
from typing import Mapping, Sequence

from .decomposition import Decomposition, EmulationReport
from .errors import SchemaError
from .semigroupoid import Arrow, Morphism, Obj, Semigroupoid
from .statespace import PartialTransformation, StateSpace, TypedGeneratorGraph


def dumps(document: dict) -> str:
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def loads(text: str) -> dict:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as err:
        raise SchemaError(f"not valid JSON: {err}") from None
    if not isinstance(document, dict):
        raise SchemaError("document must be a JSON object")
    return document


def _expect(condition: bool, message: str):
    if not condition:
        raise SchemaError(message)


# --- semigroupoid ------------------------------------------------------------

def semigroupoid_to_dict(s: Semigroupoid) -> dict:
    return {
        "objects": [{"id": o.id, "name": o.name} for o in s.objects],
        "arrows": [{"id": a.id, "dom": a.dom, "cod": a.cod, "label": a.label}
                   for a in s.arrows],
        "table": sorted([x, y, z] for (x, y), z in s.table.items()),
    }


def semigroupoid_from_dict(document: Mapping) -> Semigroupoid:
    for key in ("objects", "arrows", "table"):
        _expect(key in document, f"missing {key!r} block")
        _expect(isinstance(document[key], list), f"{key!r} must be a list")
    objects = []
    for i, entry in enumerate(document["objects"]):
        _expect(isinstance(entry, dict) and {"id", "name"} <= set(entry),
                "objects entries need 'id' and 'name'")
        _expect(entry["id"] == i, "object ids must be dense and ascending")
        objects.append(Obj(id=i, name=str(entry["name"])))
    arrows = []
    for i, entry in enumerate(document["arrows"]):
        _expect(isinstance(entry, dict) and {"id", "dom", "cod", "label"} <= set(entry),
                "arrows entries need 'id', 'dom', 'cod', 'label'")
        _expect(entry["id"] == i, "arrow ids must be dense and ascending")
        _expect(isinstance(entry["dom"], int) and 0 <= entry["dom"] < len(objects),
                f"arrow {i} has an invalid dom")
        _expect(isinstance(entry["cod"], int) and 0 <= entry["cod"] < len(objects),
                f"arrow {i} has an invalid cod")
        arrows.append(Arrow(id=i, dom=entry["dom"], cod=entry["cod"],
                            label=str(entry["label"])))
    table: dict[tuple[int, int], int] = {}
    for entry in document["table"]:
        _expect(isinstance(entry, list) and len(entry) == 3
                and all(isinstance(v, int) for v in entry),
                "table entries must be [x, y, xy] triples")
        x, y, z = entry
        _expect(all(0 <= v < len(arrows) for v in (x, y, z)),
                f"table triple {entry} uses unknown arrow ids")
        _expect((x, y) not in table, f"duplicate table entry for ({x},{y})")
        table[(x, y)] = z
    return Semigroupoid(objects=tuple(objects), arrows=tuple(arrows), table=table)


# --- optional blocks ---------------------------------------------------------

def statespace_block(space: StateSpace,
                     transformations: Sequence[PartialTransformation],
                     closure_size: int) -> dict:
    return {
        "states": list(space.names),
        "cap": space.cap,
        "modulus": space.modulus,
        "generators": list(space.generators),
        "transformations": [
            {"label": pt.label,
             "images": [v for v in pt.images]}
            for pt in transformations],
        "closure_size": closure_size,
    }


def graph_block(graph: TypedGeneratorGraph) -> dict:
    return {
        "objects": [{"id": i, "name": name}
                    for i, name in enumerate(graph.object_names)],
        "edges": [[s, label, t] for s, label, t in graph.edges],
    }


def graph_from_dict(document: Mapping) -> TypedGeneratorGraph:
    _expect("objects" in document and "edges" in document,
            "graph needs 'objects' and 'edges'")
    names = []
    for i, entry in enumerate(document["objects"]):
        _expect(isinstance(entry, dict) and {"id", "name"} <= set(entry),
                "graph objects need 'id' and 'name'")
        _expect(entry["id"] == i, "graph object ids must be dense and ascending")
        names.append(str(entry["name"]))
    edges = []
    for entry in document["edges"]:
        _expect(isinstance(entry, list) and len(entry) == 3,
                "edges must be [source, label, target] triples")
        s, label, t = entry
        _expect(isinstance(s, int) and isinstance(t, int)
                and 0 <= s < len(names) and 0 <= t < len(names),
                f"edge {entry} uses unknown objects")
        edges.append((s, str(label), t))
    return TypedGeneratorGraph(object_names=tuple(names), edges=tuple(edges))


def morphism_to_dict(phi: Morphism) -> dict:
    return {
        "object_map": list(phi.object_map),
        "arrow_map": list(phi.arrow_map),
        "target": semigroupoid_to_dict(phi.target),
    }


def morphism_from_dict(document: Mapping, source: Semigroupoid) -> Morphism:
    for key in ("object_map", "arrow_map", "target"):
        _expect(key in document, f"morphism needs {key!r}")
    target = semigroupoid_from_dict(document["target"])
    object_map = document["object_map"]
    arrow_map = document["arrow_map"]
    _expect(isinstance(object_map, list) and all(isinstance(v, int) for v in object_map),
            "object_map must be a list of ids")
    _expect(isinstance(arrow_map, list) and all(isinstance(v, int) for v in arrow_map),
            "arrow_map must be a list of ids")
    return Morphism(source=source, target=target,
                    object_map=tuple(object_map), arrow_map=tuple(arrow_map))


def decomposition_to_dict(d: Decomposition, emulation: EmulationReport) -> dict:
    return {
        "top": semigroupoid_to_dict(d.top),
        "morphism": {"object_map": list(d.morphism.object_map),
                     "arrow_map": list(d.morphism.arrow_map)},
        "components": [
            {"top_arrow": c.top_arrow, "members": list(c.members)}
            for c in d.components],
        "classes": [
            {"representative": cls.representative,
             "members": [
                 {"component": m.component,
                  "object_map": {str(k): v for k, v in sorted(m.object_map.items())},
                  "arrow_map": {str(k): v for k, v in sorted(m.arrow_map.items())}}
                 for m in cls.members]}
            for cls in d.classes],
        "emulation": {
            "ok": emulation.ok,
            "pairs_checked": emulation.pairs_checked,
            "violations": [v.message for v in emulation.violations],
        },
    }


# --- DOT ---------------------------------------------------------------------

def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(names: Sequence[str], edges: Sequence[tuple[int, str, int]],
           graph_name: str = "semigroupoid") -> str:
    lines = [f"digraph {graph_name} {{"]
    for i, name in enumerate(names):
        lines.append(f"  n{i} [label={_dot_quote(name)}];")
    for s, label, t in edges:
        lines.append(f"  n{s} -> n{t} [label={_dot_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def document_to_dot(document: Mapping) -> str:
    """Render a semigroupoid or generator-graph document.

    Graph documents (or semigroupoid documents carrying a ``graph``
    block) draw one edge per generator entry; bare semigroupoid
    documents draw every arrow.
    """
    if "graph" in document:
        graph = graph_from_dict(document["graph"])
        return to_dot(graph.object_names, graph.edges)
    if "edges" in document:
        graph = graph_from_dict(document)
        return to_dot(graph.object_names, graph.edges)
    s = semigroupoid_from_dict(document)
    names = [o.name for o in s.objects]
    edges = [(a.dom, a.label, a.cod) for a in s.arrows]
    return to_dot(names, edges)

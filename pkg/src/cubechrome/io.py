"""JSON encodings for hypercube colorings, general graphs and list assignments."""

from __future__ import annotations

import json
from pathlib import Path

from .coloring import ListAssignment, PartialColoring
from .graph import GeneralGraph
from .hypercube import Edge, build


class FormatError(ValueError):
    pass


def edge_to_json(e: Edge) -> dict:
    return {"base": e.base, "dim": e.dim}


def edge_from_json(obj) -> Edge:
    try:
        return Edge(int(obj["base"]), int(obj["dim"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad edge record {obj!r}") from exc


def coloring_to_json(c: PartialColoring) -> dict:
    host = c.host
    if isinstance(host, GeneralGraph):
        return {
            **graph_to_json(host),
            "palette": c.palette,
            "precoloring": [{"edge": list(e), "color": col} for e, col in c.items()],
        }
    return {
        "d": host.d,
        "palette": c.palette,
        "edges": [{"base": e.base, "dim": e.dim, "color": col} for e, col in c.items()],
    }


def coloring_from_json(obj) -> PartialColoring:
    if not isinstance(obj, dict):
        raise FormatError("coloring must be a JSON object")
    try:
        if "n" in obj:
            g = graph_from_json(obj)
            items = [((int(r["edge"][0]), int(r["edge"][1])), int(r["color"])) for r in obj.get("precoloring", [])]
            return PartialColoring.from_edges(g, items, int(obj.get("palette", g.max_degree or 1)))
        cube = build(int(obj["d"]))
        items = [(edge_from_json(r), int(r["color"])) for r in obj.get("edges", [])]
        return PartialColoring.from_edges(cube, items, int(obj.get("palette", cube.d)))
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise FormatError(str(exc)) from exc


def graph_to_json(g: GeneralGraph) -> dict:
    out = {"n": g.n_vertices, "edges": [list(e) for e in g.edges]}
    if g.bipartition is not None:
        out["bipartition"] = [list(side) for side in g.bipartition]
    return out


def graph_from_json(obj) -> GeneralGraph:
    try:
        return GeneralGraph(int(obj["n"]), [tuple(map(int, e)) for e in obj["edges"]], obj.get("bipartition"))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(str(exc)) from exc


def lists_to_json(lists: ListAssignment) -> dict:
    host = lists.host
    base = graph_to_json(host) if isinstance(host, GeneralGraph) else {"d": host.d}
    recs = []
    for i, x in enumerate(lists.lists):
        e = host.edge_at(i)
        rec = {"edge": list(e)} if isinstance(host, GeneralGraph) else edge_to_json(e)
        rec["colors"] = sorted(x)
        recs.append(rec)
    return {**base, "lists": recs}


def lists_from_json(obj) -> ListAssignment:
    try:
        host = graph_from_json(obj) if "n" in obj else build(int(obj["d"]))
        assignment = {}
        for r in obj["lists"]:
            e = tuple(r["edge"]) if "edge" in r else edge_from_json(r)
            assignment[e] = [int(c) for c in r["colors"]]
        return ListAssignment.from_edges(host, assignment)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(str(exc)) from exc


def dump(obj, path=None) -> str:
    text = json.dumps(obj, sort_keys=True, indent=1) + "\n"
    if path is not None:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text)
    return text


def load(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc

"""File formats: graph/assignment JSON, plain edge lists, DOT export.

Graph JSON: {"n": int, "edges": [[i, j], ...], "labels": [str, ...]?},
0-based.  Plain-text edge lists ("i j" per line, blank lines and #
comments ignored) are accepted on input; writers emit JSON only.
Assignments are JSON arrays of scalar encodings (see scalars module).
Floats serialize with 17 significant digits.
"""

from __future__ import annotations

import json
from .errors import InvalidArgumentError
from .graphs import Graph
from .scalars import ScalarQ2, parse_scalar, scalar_to_json
from .scenarios import ColoredExclusivityGraph, SameContextWitness


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# graphs


def graph_to_obj(g: Graph) -> dict:
    obj = {"n": g.n, "edges": [list(e) for e in g.edges()]}
    if g.vertex_labels:
        obj["labels"] = list(g.vertex_labels)
    return obj


def graph_from_obj(obj) -> Graph:
    if not isinstance(obj, dict) or "n" not in obj:
        raise InvalidArgumentError("graph JSON must be an object with an 'n' field")
    n = obj["n"]
    edges = [tuple(e) for e in obj.get("edges", [])]
    labels = obj.get("labels")
    return Graph(n, edges, vertex_labels=labels)


def parse_graph_text(text: str) -> Graph:
    """JSON if it parses as an object, else a plain edge list."""
    stripped = text.strip()
    if stripped.startswith("{"):
        return graph_from_obj(json.loads(stripped))
    edges = []
    maxv = -1
    for line in stripped.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InvalidArgumentError(f"bad edge list line: {line!r}")
        i, j = int(parts[0]), int(parts[1])
        edges.append((i, j))
        maxv = max(maxv, i, j)
    return Graph(maxv + 1, edges)


def graph_to_dot(g: Graph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    for v in range(g.n):
        label = g.vertex_labels[v] if g.vertex_labels else str(v)
        lines.append(f'  v{v} [label="{label}"];')
    for i, j in g.edges():
        lines.append(f"  v{i} -- v{j};")
    lines.append("}")
    return "\n".join(lines)


_PALETTE = (
    "red", "yellow", "cyan", "purple", "green", "orange",
    "blue", "brown", "magenta", "gray",
)


def colored_exclusivity_dot(ceg: ColoredExclusivityGraph, name: str = "G") -> str:
    """DOT export with one color per measurement.

    Vertices list their measurement colors; each edge carries the
    color(s) of the shared deciding measurement(s).
    """
    scenario = ceg.scenario
    color = {i: _PALETTE[i % len(_PALETTE)] for i in range(len(scenario.measurements))}
    lines = [f"graph {name} {{", "  node [style=wedged];"]
    for i, m in enumerate(scenario.measurements):
        lines.append(f'  // measurement {m.name}: {color[i]}')
    for v, ev in enumerate(ceg.events):
        cols = ":".join(color[m] for m in ev.context)
        lines.append(
            f'  v{v} [label="{ev.label(scenario)}", fillcolor="{cols}"];'
        )
    for (i, j), w in ceg.edge_witnesses:
        if isinstance(w, SameContextWitness):
            cols = ":".join(color[m] for m in w.measurements)
        else:
            cols = color[w.root]
        lines.append(f'  v{i} -- v{j} [color="{cols}"];')
    lines.append("}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# assignments and scalars


def assignment_to_obj(p) -> list:
    return [scalar_to_json(ScalarQ2.coerce(v)) for v in p]


def assignment_from_obj(obj) -> list:
    if not isinstance(obj, list):
        raise InvalidArgumentError("assignment JSON must be an array of scalars")
    return [parse_scalar(v) for v in obj]


def scalar_obj(v):
    """JSON encoding for a scalar or float."""
    if isinstance(v, (ScalarQ2, int)):
        return scalar_to_json(ScalarQ2.coerce(v))
    return fmt_float(v)


# ---------------------------------------------------------------------------
# quantum certificates


def quantum_certificate_to_obj(cert) -> dict:
    return {
        "dimension": cert.dimension,
        "psi": [fmt_float(x) for x in cert.psi],
        "vectors": [[fmt_float(x) for x in v] for v in cert.vectors],
    }


def quantum_certificate_from_obj(obj):
    from .theta import QuantumCertificate

    if not isinstance(obj, dict) or "psi" not in obj or "vectors" not in obj:
        raise InvalidArgumentError(
            "certificate JSON needs 'psi' and 'vectors' fields"
        )
    cert = QuantumCertificate.make(
        [float(x) for x in obj["psi"]],
        [[float(x) for x in v] for v in obj["vectors"]],
    )
    if "dimension" in obj and int(obj["dimension"]) != cert.dimension:
        raise InvalidArgumentError("declared dimension does not match psi")
    return cert

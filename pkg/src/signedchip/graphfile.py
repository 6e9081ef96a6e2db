"""Plain-text graph files.

    # comment
    sink q
    vertex v1          (optional; pins vertex order, allows isolated vertices)
    edge q v1 +
    edge v1 v2 -

Vertex order is the order of first appearance over all directives, so the
nonsink order (and the order of every configuration) is the order in which
the vertices are first mentioned.
"""

from .errors import GraphParseError, GraphStructureError
from .graph import Sign, SignedGraph


def parse_graph(text: str) -> SignedGraph:
    order = []
    sink = None
    edges = []
    seen = {}

    def note(name):
        if name not in order:
            order.append(name)

    lines = text.splitlines()
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind, args = tok[0], tok[1:]
        if kind == "sink":
            if len(args) != 1:
                raise GraphParseError("expected 'sink <name>'", lineno)
            if sink is not None:
                raise GraphParseError(f"second sink directive (sink already {sink!r})", lineno)
            sink = args[0]
            note(sink)
        elif kind == "vertex":
            if len(args) != 1:
                raise GraphParseError("expected 'vertex <name>'", lineno)
            note(args[0])
        elif kind == "edge":
            if len(args) != 3:
                raise GraphParseError("expected 'edge <u> <v> <+|->'", lineno)
            u, v, tok_sign = args
            if u == v:
                raise GraphParseError(f"loop at {u!r}", lineno)
            if tok_sign not in ("+", "-"):
                raise GraphParseError(f"unknown sign token {tok_sign!r}", lineno)
            s = Sign.parse(tok_sign)
            key = frozenset((u, v))
            if key in seen:
                raise GraphParseError(f"duplicate edge {u}-{v} (first on line {seen[key]})", lineno)
            seen[key] = lineno
            note(u)
            note(v)
            edges.append((u, v, s))
        else:
            raise GraphParseError(f"unknown directive {kind!r}", lineno)
    if sink is None:
        raise GraphParseError("missing 'sink' directive", max(len(lines), 1))
    try:
        return SignedGraph.from_edges(edges, sink, vertices=order)
    except GraphStructureError as e:
        raise GraphParseError(str(e)) from None


def format_graph(g: SignedGraph) -> str:
    """Inverse of :func:`parse_graph` (up to comments and whitespace)."""
    out = [f"vertex {name}" for name in g.vertex_names]
    out.append(f"sink {g.sink_name}")
    out += [f"edge {u} {v} {s.symbol}" for u, v, s in g.named_edges()]
    return "\n".join(out) + "\n"


def read_graph(path) -> SignedGraph:
    if str(path) == "-":
        import sys
        return parse_graph(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())

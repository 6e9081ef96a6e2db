"""Command-line front end.

Configurations given with ``--config`` list one chip count per nonsink
vertex, in the order the vertices first appear in the graph file.

Exit codes: 0 success, 1 domain error (printed as a structured error
object), 2 usage error.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from . import engine as E
from .errors import ChipFiringError
from .families import KINDS, VARIANTS, FamilySpec, build, predicted_group
from .graph import (
    canonical_switch_rep,
    is_balanced,
    switch_vertex,
    tu_subgraph_sum,
)
from .graphfile import format_graph, read_graph


def _config_arg(text):
    try:
        return tuple(int(t) for t in text.replace(" ", "").split(",") if t != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _rational(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _edges_doc(g):
    return [[u, v, s.symbol] for u, v, s in g.named_edges()]


# -- subcommands: each returns a result dict ---------------------------------------

def cmd_group(args, g):
    grp = E.critical_group(E.make_pair(g))
    return {"order": grp.order, "invariant_factors": list(grp.invariant_factors)}


def cmd_criticals(args, g):
    p = E.make_pair(g)
    return {"order": p.order, "criticals": E.enumerate_criticals(p, jobs=args.jobs)}


def cmd_superstables(args, g):
    p = E.make_pair(g)
    method = "box" if args.bound is not None else "lattice"
    found = E.enumerate_superstables(p, chi_cap=args.chi_cap, method=method,
                                     bound=args.bound or E.DEFAULT_BOX_CAP)
    return {"order": p.order, "superstables": found}


def cmd_identity(args, g):
    return {"identity": E.identity(E.make_pair(g))}


def cmd_stabilize(args, g):
    stable, fv = E.stabilize(E.make_pair(g), args.config)
    return {"stable": stable, "firing_vector": fv}


def cmd_check_critical(args, g):
    return {"critical": E.is_critical(E.make_pair(g), args.config, method=args.method)}


def cmd_check_superstable(args, g):
    return {"superstable": E.is_z_superstable(E.make_pair(g), args.config, chi_cap=args.chi_cap)}


def cmd_valid(args, g):
    p = E.make_pair(g)
    return {"valid": E.is_valid(p, args.config),
            "r_plus": [_rational(x) for x in E.to_R(p, args.config)]}


def cmd_switch(args, g):
    h = switch_vertex(g, args.vertex)
    return {"edges": _edges_doc(h), "_graph": h}


def cmd_canonical(args, g):
    rep = canonical_switch_rep(g, modulo_sink=args.modulo_sink)
    return {"canonical_edges": _edges_doc(rep), "_graph": rep}


def cmd_balanced(args, g):
    return {"balanced": is_balanced(g, modulo_sink=args.modulo_sink)}


def cmd_tu_count(args, g):
    res = tu_subgraph_sum(g)
    return {"tu_total": res.total,
            "tu_by_cycles": {str(k): v for k, v in sorted(res.by_cycle_count.items())}}


def cmd_family(args, _g):
    signs = tuple(args.signs) if args.signs is not None else None
    spec = FamilySpec(args.kind, args.n, args.variant, signs)
    g = build(spec)
    grp = E.critical_group(E.make_pair(g))
    pred = predicted_group(spec)
    out = {"order": grp.order, "invariant_factors": list(grp.invariant_factors),
           "predicted": list(pred.invariant_factors), "edges": _edges_doc(g)}
    if args.verify:
        out["matches"] = tuple(grp.invariant_factors) == tuple(pred.invariant_factors)
    return out


def _signs_arg(text):
    toks = [t for t in text.replace(" ", "").split(",") if t]
    if any(t not in ("+", "-") for t in toks):
        raise argparse.ArgumentTypeError(f"expected comma-separated + / - signs, got {text!r}")
    return toks


# -- output -------------------------------------------------------------------------

_CONFIG_LISTS = ("criticals", "superstables")
_VECTORS = ("identity", "stable", "firing_vector", "r_plus")


def _canonical_doc(doc):
    out = {}
    for k, v in doc.items():
        if k.startswith("_"):
            continue
        if k in _CONFIG_LISTS:
            v = [list(c) for c in sorted(tuple(c) for c in v)]
        elif k in _VECTORS:
            v = list(v)
        out[k] = v
    return out


def render_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, default=str) + "\n"


def _columns(vectors):
    """Configurations side by side as column vectors."""
    vectors = [[str(x) for x in v] for v in vectors]
    if not vectors:
        return "  (none)"
    width = max(len(x) for v in vectors for x in v) if vectors[0] else 1
    return "\n".join("  " + " ".join(v[i].rjust(width) for v in vectors)
                     for i in range(len(vectors[0])))


def render_text(doc, raw) -> str:
    if "_graph" in raw:
        return format_graph(raw["_graph"])
    lines = []
    for k in sorted(doc):
        v = doc[k]
        if k in _CONFIG_LISTS:
            lines.append(f"{k} ({len(v)}):")
            lines.append(_columns(v))
        elif k in _VECTORS:
            lines.append(f"{k}:")
            lines.append(_columns([v]))
        elif k in ("invariant_factors", "predicted"):
            lines.append(f"{k}: " + (" + ".join(f"Z_{d}" for d in v) if v else "0"))
        elif k == "edges" or k == "canonical_edges":
            lines.append(f"{k}:")
            lines += [f"  {u} {w} {s}" for u, w, s in v]
        elif k == "tu_by_cycles":
            lines.append(f"{k}: " + ", ".join(f"{c}:{n}" for c, n in v.items()))
        else:
            lines.append(f"{k}: {json.dumps(v)}")
    return "\n".join(lines) + "\n"


# -- argument parsing ------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--bound", type=int, default=None,
                        help="use the growing-box superstable search with this cap on B")
    common.add_argument("--chi-cap", type=int, default=E.DEFAULT_CHI_CAP,
                        help="largest n for the 2^n subset superstability test")
    common.add_argument("--jobs", type=int,
                        default=int(os.environ.get("SIGNEDCHIP_JOBS", "1")),
                        help="worker processes for critical enumeration")

    parser = argparse.ArgumentParser(prog="signedchip",
                                     description="Chip-firing on signed graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_cmd(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.add_argument("graph", help="graph file, or - for stdin")
        sp.set_defaults(func=func)
        return sp

    graph_cmd("group", cmd_group, "invariant factors and order")
    graph_cmd("criticals", cmd_criticals, "all critical configurations")
    graph_cmd("superstables", cmd_superstables, "all z-superstable configurations")
    graph_cmd("identity", cmd_identity, "identity of the critical group")
    for name, func, help_text in (("stabilize", cmd_stabilize, "stabilize a configuration"),
                                  ("check-critical", cmd_check_critical, "is the configuration critical"),
                                  ("check-superstable", cmd_check_superstable,
                                   "is the configuration z-superstable"),
                                  ("valid", cmd_valid, "is the configuration valid")):
        sp = graph_cmd(name, func, help_text)
        sp.add_argument("--config", type=_config_arg, required=True,
                        help="comma-separated chips, nonsink vertices in file order")
        if name == "check-critical":
            sp.add_argument("--method", choices=("auto", "sink", "rep"), default="auto")
    sp = graph_cmd("switch", cmd_switch, "switch at a vertex")
    sp.add_argument("--vertex", required=True)
    for name, func, help_text in (("canonical", cmd_canonical, "canonical switching representative"),
                                  ("balanced", cmd_balanced, "balance test")):
        sp = graph_cmd(name, func, help_text)
        sp.add_argument("--modulo-sink", action="store_true",
                        help="ignore edges at the sink (they do not affect L)")
    graph_cmd("tu-count", cmd_tu_count, "weighted TU-subgraph count of a negative graph")

    sp = sub.add_parser("family", parents=[common], help="named family vs closed form")
    sp.add_argument("--kind", choices=KINDS, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--variant", choices=VARIANTS, default="all_positive")
    sp.add_argument("--signs", type=_signs_arg, default=None,
                    help="edge signs for --variant explicit")
    sp.add_argument("--verify", action="store_true")
    sp.set_defaults(func=cmd_family, graph=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        g = read_graph(args.graph) if args.graph is not None else None
        raw = args.func(args, g)
    except ChipFiringError as e:
        return _fail(args, e.to_dict())
    except OSError as e:
        return _fail(args, {"code": "io", "message": f"{e.strerror}: {e.filename}"})
    doc = _canonical_doc(raw)
    if args.format == "json":
        sys.stdout.write(render_json(doc))
    else:
        sys.stdout.write(render_text(doc, raw))
    if doc.get("matches") is False:
        return 1
    return 0


def _fail(args, err):
    if args.format == "json":
        sys.stdout.write(render_json({"error": err}))
    else:
        sys.stderr.write(f"error [{err['code']}]: {err['message']}\n")
    return 1


if __name__ == "__main__":
    sys.exit(main())

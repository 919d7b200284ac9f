"""Command-line interface: label, verify, oracle and sweep.

Exit codes: 0 ok, 1 requirement failed, 2 usage or precondition error,
3 construction anomaly, 4 search budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .colouring import chromatic_number
from .constructive import (
    label_bipartite_two,
    label_complete,
    label_four_chromatic,
    label_generic,
    label_subcubic_two,
    label_total,
)
from .corpus import MAX_BUILTIN_N, connected_graphs_upto
from .errors import (
    BudgetExceeded,
    ConstructionError,
    GraphError,
    LabellingError,
    Mult123Error,
    PreconditionError,
)
from .graph import (
    Graph,
    is_bipartite,
    is_complete,
    is_connected,
    is_nice,
    is_regular,
    parse_edge_list,
    parse_graph6,
    to_graph6,
)
from .labelling import (
    EdgeLabelling,
    Requirement,
    TotalLabelling,
    all_verdicts,
    conflicts,
    is_total_p_proper,
    labelling_from_json,
    labelling_to_json,
    satisfies,
    total_conflicts,
)
from .oracle import (
    DEFAULT_MAX_NODES,
    DEFAULT_MAX_SECONDS,
    chi_m,
    chi_p,
    chi_s,
    forest_two_labelling,
    verify_regular_via_multiset,
)

log = logging.getLogger("mult123")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_ANOMALY = 3
EXIT_BUDGET = 4

SCHEMA = 1
TOTAL_REQUIREMENT = "total-p-proper"

ALGORITHMS = ("auto", "four-chromatic", "generic", "total", "complete", "bipartite", "subcubic")
CSV_COLUMNS = ("id", "graph6", "n", "m", "verdict", "value", "nodes", "ms")


# ---------------------------------------------------------------------------
# input / output helpers


def _read_bytes(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _looks_like_edges(data: bytes) -> bool:
    for line in data.splitlines():
        line = line.strip()
        if line:
            # graph6 only uses bytes 63..126, so digits / spaces / '#' mean an edge list
            return line.startswith(b"n ") or any(b < 63 for b in line)
    return True


def read_graph(path: str, fmt: str = "auto") -> Graph:
    data = _read_bytes(path)
    if fmt == "auto":
        fmt = "edges" if _looks_like_edges(data) else "g6"
    if fmt == "edges":
        return parse_edge_list(data)
    lines = [ln for ln in data.splitlines() if ln.strip()]
    if len(lines) != 1:
        raise GraphError(f"expected one graph6 line, found {len(lines)}")
    return parse_graph6(lines[0])


def _emit(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=False)
    if out and out != "-":
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _graph_info(g: Graph) -> dict:
    return {"graph6": to_graph6(g).decode("ascii"), "n": g.n, "m": g.m}


def _classes(rep) -> list[dict]:
    return [
        {"product": str(c.product), "size": c.size, "edges": c.edges, "shape": c.shape}
        for c in rep.classes
    ]


def build_report(command: str, g: Graph, lab, algorithm: str, requirement: str, seconds: float,
                 trace=None) -> dict:
    """Report whose verdicts are recomputed from the serialised labelling."""
    serial = labelling_to_json(lab)
    again = labelling_from_json(g, json.loads(json.dumps(serial)))
    edge_part = again.edges if isinstance(again, TotalLabelling) else again
    verdicts = all_verdicts(g, edge_part)
    rep = conflicts(g, edge_part)
    if isinstance(again, TotalLabelling):
        verdicts[TOTAL_REQUIREMENT] = is_total_p_proper(g, again)
        conflict_list = [list(e) for e in total_conflicts(g, again)]
    else:
        conflict_list = [list(e) for e in rep.conflicts]
    return {
        "schema": SCHEMA,
        "command": command,
        "graph": _graph_info(g),
        "algorithm": algorithm,
        "requirement": requirement,
        "ok": bool(verdicts[requirement]),
        "labelling": serial,
        "verdicts": verdicts,
        "conflicts": conflict_list,
        "classes": _classes(rep),
        "seconds": round(seconds, 6),
        "trace": trace.summary() if trace is not None else None,
    }


def _dump_trace(trace, path: str) -> None:
    steps = [
        {"edges": [int(e) for e in s.edges], "label": s.label, "stage": s.stage, "case": s.case}
        for s in trace.steps
    ]
    data = {
        "schema": SCHEMA,
        "algorithm": trace.algorithm,
        "steps": steps,
        "milestones": [{"name": m.name, "ok": m.ok, "detail": m.detail} for m in trace.milestones],
        "anomalies": trace.anomalies,
    }
    Path(path).write_text(json.dumps(data) + "\n")


# ---------------------------------------------------------------------------
# label


def choose_algorithm(g: Graph) -> str:
    # K_4 is complete and subcubic, but the 4-chromatic route gives a p-proper labelling
    if g.n == 4 and is_complete(g):
        return "four-chromatic"
    if g.n >= 2 and is_complete(g):
        return "complete"
    if g.m and is_connected(g) and is_bipartite(g):
        return "bipartite"
    if g.max_degree <= 3:
        return "subcubic"
    if is_nice(g) and chromatic_number(g) == 4:
        return "four-chromatic"
    return "generic"


def run_algorithm(alg: str, g: Graph | None, root: int | None = None, n: int | None = None):
    if alg == "complete":
        if n is None:
            if g is None or not is_complete(g):
                raise PreconditionError("--alg complete needs --n or a complete input graph")
            n = g.n
        return label_complete(n)
    if g is None:
        raise PreconditionError("an input graph is required (--in)")
    if alg == "four-chromatic":
        return label_four_chromatic(g)
    if alg == "generic":
        return label_generic(g)
    if alg == "total":
        return label_total(g)
    if alg == "bipartite":
        return label_bipartite_two(g, root)
    if alg == "subcubic":
        return label_subcubic_two(g)
    raise PreconditionError(f"unknown algorithm {alg}")


def cmd_label(args) -> int:
    g = None
    if args.input is not None:
        g = read_graph(args.input, args.format)
    elif args.alg != "complete":
        raise PreconditionError("--in is required")
    alg = args.alg
    if alg == "auto":
        alg = choose_algorithm(g)
    t0 = time.monotonic()
    try:
        res = run_algorithm(alg, g, root=args.root, n=args.n)
    except ConstructionError as exc:
        report = {
            "schema": SCHEMA,
            "command": "label",
            "graph": _graph_info(g) if g is not None else None,
            "algorithm": alg,
            "ok": False,
            "error": str(exc),
            "trace": exc.trace.summary() if exc.trace is not None else None,
        }
        _emit(report, args.out)
        return EXIT_ANOMALY
    seconds = time.monotonic() - t0
    lab = res.labelling
    graph = lab.graph if isinstance(lab, EdgeLabelling) else lab.edges.graph
    req = TOTAL_REQUIREMENT if alg == "total" else Requirement.parse(res.requirement).value
    report = build_report("label", graph, lab, alg, req, seconds, res.trace)
    if args.trace:
        _dump_trace(res.trace, args.trace)
        report["trace_file"] = args.trace
    _emit(report, args.out)
    return EXIT_OK if report["ok"] else EXIT_ANOMALY


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    g = read_graph(args.graph, args.format)
    lab = labelling_from_json(g, Path(args.labelling).read_text())
    if args.require == TOTAL_REQUIREMENT:
        if not isinstance(lab, TotalLabelling):
            raise LabellingError("total-p-proper needs vertex labels in the labelling")
        ok = is_total_p_proper(g, lab)
        bad = [list(e) for e in total_conflicts(g, lab)]
        out = {"schema": SCHEMA, "requirement": args.require, "ok": ok, "conflicts": bad}
    else:
        edge_part = lab.edges if isinstance(lab, TotalLabelling) else lab
        ok = satisfies(g, edge_part, args.require)
        rep = conflicts(g, edge_part)
        out = {
            "schema": SCHEMA,
            "requirement": args.require,
            "ok": ok,
            "conflicts": [list(e) for e in rep.conflicts],
            "classes": _classes(rep),
            "worst": rep.worst,
        }
    _emit(out, None)
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# oracle


def _search_json(res) -> dict:
    return {
        "outcome": res.outcome.value,
        "k": res.k,
        "nodes": res.nodes,
        "seconds": round(res.seconds, 6),
        "witness": labelling_to_json(res.labelling) if res.labelling is not None else None,
    }


def cmd_oracle(args) -> int:
    g = read_graph(args.input, args.format)
    budget = {"max_nodes": args.max_nodes, "max_seconds": args.max_seconds}
    out: dict = {"schema": SCHEMA, "command": "oracle", "param": args.param, "graph": _graph_info(g)}
    code = EXIT_OK
    if args.param in ("chi-p", "chi-m", "chi-s"):
        fn = {"chi-p": chi_p, "chi-m": chi_m, "chi-s": chi_s}[args.param]
        res = fn(g, **budget)
        if not res.defined:
            out["value"] = None
            out["result"] = "undefined (not nice)"
        else:
            out["value"] = res.value
            out["result"] = str(res.value)
            out["witness"] = _search_json(res.witness)
            out["lower_bound"] = _search_json(res.lower) if res.lower is not None else None
            out["nodes"] = res.nodes
    elif args.param == "forest2":
        res = forest_two_labelling(g, **budget)
        out.update(_search_json(res))
        out["result"] = "witness" if res.found else "counterexample"
        if not res.found:
            code = EXIT_FAIL
    else:
        res = verify_regular_via_multiset(g, **budget)
        out["holds"] = res.holds
        out["search"] = _search_json(res.search)
        if res.anomaly:
            out["anomaly"] = res.anomaly
        out["result"] = "holds" if res.holds else "anomaly"
        if not res.holds:
            code = EXIT_ANOMALY
    _emit(out, args.out)
    return code


# ---------------------------------------------------------------------------
# sweep


def _check_graph(check: str, g: Graph, max_nodes: int, max_seconds: float) -> tuple[str, str, int, dict | None]:
    """Return ``(verdict, value, nodes, anomaly_payload)`` for one graph."""
    if check == "p123":
        if not is_nice(g):
            return "skipped: not nice", "", 0, None
        res = chi_p(g, max_nodes=max_nodes, max_seconds=max_seconds)
        ok = res.value <= 3
        payload = None if ok else {"chi_p": res.value}
        return ("pass" if ok else "fail"), str(res.value), res.nodes, payload
    if check == "weak-forest":
        res = forest_two_labelling(g, max_nodes=max_nodes, max_seconds=max_seconds)
        payload = None if res.found else {"search": _search_json(res)}
        return ("pass" if res.found else "fail"), ("forest" if res.found else "none"), res.nodes, payload
    if check == "regular-obs":
        if not is_regular(g) or not is_nice(g):
            return "skipped: not nice regular", "", 0, None
        res = verify_regular_via_multiset(g, max_nodes=max_nodes, max_seconds=max_seconds)
        payload = None if res.holds else {"search": _search_json(res.search), "anomaly": res.anomaly}
        return ("pass" if res.holds else "fail"), ("p-proper" if res.holds else "no"), res.search.nodes, payload
    if check == "total":
        res = label_total(g)
        ok = is_total_p_proper(g, res.labelling)
        payload = None if ok else {"labelling": labelling_to_json(res.labelling)}
        return ("pass" if ok else "fail"), "total-p-proper", 0, payload
    if check == "mult123-via-alg":
        res = label_generic(g)
        rep = conflicts(g, res.labelling)
        ok = satisfies(g, res.labelling, Requirement.S1_MATCHING)
        if ok and not res.trace.anomalies:
            return "pass", rep.worst, 0, None
        payload = {"labelling": labelling_to_json(res.labelling), "trace": res.trace.summary()}
        return ("anomaly" if ok else "fail"), rep.worst, 0, payload
    raise ValueError(check)


def _sweep_one(job):
    idx, g6, check, max_nodes, max_seconds = job
    t0 = time.monotonic()
    try:
        g = parse_graph6(g6)
    except GraphError as exc:
        return idx, g6, None, f"error: {exc}", "", 0, 0.0, None
    try:
        verdict, value, nodes, payload = _check_graph(check, g, max_nodes, max_seconds)
    except BudgetExceeded as exc:
        verdict, value, nodes, payload = "budget", "", exc.nodes, None
    except Mult123Error as exc:
        verdict, value, nodes, payload = "fail", "", 0, {"error": str(exc)}
    ms = (time.monotonic() - t0) * 1000
    return idx, g6, (g.n, g.m), verdict, value, nodes, ms, payload


def _sweep_inputs(args):
    if args.max_n is not None:
        if args.max_n > MAX_BUILTIN_N or args.max_n > 8:
            raise PreconditionError("built-in enumeration supports --max-n <= 8")
        for g in connected_graphs_upto(args.max_n, min_n=args.min_n):
            yield to_graph6(g).decode("ascii")
        return
    stream = sys.stdin if args.input in (None, "-") else open(args.input)
    with stream if stream is not sys.stdin else _nullcontext(stream) as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield line


class _nullcontext:
    def __init__(self, obj):
        self.obj = obj

    def __enter__(self):
        return self.obj

    def __exit__(self, *exc):
        return False


def cmd_sweep(args) -> int:
    jobs = [(i, g6, args.check, args.max_nodes, args.max_seconds) for i, g6 in enumerate(_sweep_inputs(args))]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_one, jobs, chunksize=16))
    else:
        results = [_sweep_one(j) for j in jobs]
    results.sort(key=lambda r: r[0])
    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    writer = csv.writer(out)
    writer.writerow(CSV_COLUMNS)
    counts = {"pass": 0, "fail": 0, "anomaly": 0, "budget": 0, "skipped": 0, "malformed": 0}
    anomaly_dir = Path(args.anomaly_dir)
    for idx, g6, nm, verdict, value, nodes, ms, payload in results:
        n, m = nm if nm else ("", "")
        writer.writerow([idx, g6, n, m, verdict, value, nodes, f"{ms:.2f}"])
        if verdict.startswith("error"):
            counts["malformed"] += 1
            log.warning("line %d: %s", idx + 1, verdict)
        elif verdict.startswith("skipped"):
            counts["skipped"] += 1
        else:
            counts[verdict] += 1
        if payload is not None:
            anomaly_dir.mkdir(parents=True, exist_ok=True)
            report = {"schema": SCHEMA, "command": "sweep", "check": args.check, "id": idx,
                      "graph6": g6, "verdict": verdict, **payload}
            (anomaly_dir / f"{args.check}-{idx}.json").write_text(json.dumps(report, indent=2) + "\n")
    if out is not sys.stdout:
        out.close()
    print(json.dumps({"check": args.check, "graphs": len(results), **counts}), file=sys.stderr)
    if counts["fail"] or counts["anomaly"]:
        return EXIT_ANOMALY
    if counts["budget"]:
        return EXIT_BUDGET
    if args.strict and counts["malformed"]:
        return EXIT_FAIL
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mult123", description="Product-distinguishing edge labellings.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    fmt = dict(choices=("auto", "g6", "edges"), default="auto", help="input format (default: sniff)")

    lab = sub.add_parser("label", help="construct a labelling")
    lab.add_argument("--alg", choices=ALGORITHMS, default="auto")
    lab.add_argument("--in", dest="input", help="graph file, '-' for stdin")
    lab.add_argument("--format", **fmt)
    lab.add_argument("--out", help="write the report here instead of stdout")
    lab.add_argument("--root", type=int, help="root vertex for --alg bipartite")
    lab.add_argument("--n", type=int, help="order of the complete graph for --alg complete")
    lab.add_argument("--trace", help="also write the full construction trace (JSON)")
    lab.set_defaults(func=cmd_label)

    ver = sub.add_parser("verify", help="check a labelling against a requirement")
    ver.add_argument("--graph", required=True)
    ver.add_argument("--labelling", required=True, help="labelling JSON")
    ver.add_argument("--require", required=True,
                     choices=[r.value for r in Requirement] + [TOTAL_REQUIREMENT])
    ver.add_argument("--format", **fmt)
    ver.set_defaults(func=cmd_verify)

    orc = sub.add_parser("oracle", help="exact search")
    orc.add_argument("--param", required=True, choices=("chi-p", "chi-m", "chi-s", "forest2", "regular-obs"))
    orc.add_argument("--in", dest="input", required=True)
    orc.add_argument("--format", **fmt)
    orc.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    orc.add_argument("--max-seconds", type=float, default=DEFAULT_MAX_SECONDS)
    orc.add_argument("--out")
    orc.set_defaults(func=cmd_oracle)

    sw = sub.add_parser("sweep", help="check every graph of a corpus")
    sw.add_argument("--check", required=True, choices=("p123", "weak-forest", "mult123-via-alg", "total", "regular-obs"))
    sw.add_argument("--max-n", type=int, help="use the built-in enumerator up to this order (<= 8)")
    sw.add_argument("--min-n", type=int, default=1)
    sw.add_argument("--in", dest="input", help="graph6 stream (default stdin)")
    sw.add_argument("--jobs", type=int, default=1)
    sw.add_argument("--strict", action="store_true", help="fail if any input line is malformed")
    sw.add_argument("--csv", help="write rows here instead of stdout")
    sw.add_argument("--anomaly-dir", default="mult123-anomalies")
    sw.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    sw.add_argument("--max-seconds", type=float, default=DEFAULT_MAX_SECONDS)
    sw.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (GraphError, LabellingError, PreconditionError, OSError, json.JSONDecodeError) as exc:
        msg = str(exc)
        odd = getattr(exc, "odd_cycle", None)
        print(f"error: {msg}", file=sys.stderr)
        if odd:
            print(json.dumps({"schema": SCHEMA, "error": "not bipartite", "odd_cycle": list(odd)}))
        return EXIT_USAGE
    except ConstructionError as exc:
        print(f"anomaly: {exc}", file=sys.stderr)
        return EXIT_ANOMALY


if __name__ == "__main__":
    sys.exit(main())

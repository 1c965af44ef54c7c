"""Command-line front end and file formats.

Instances, matchings, and verdicts travel as JSON documents with stable key
order and 1-based layer indices; agents are referenced by display name.
Exit codes: check 0 stable / 1 unstable, solve 0 exists / 1 not-exists /
3 unknown, 2 for any error, bench nonzero on failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .bench import SUITES, run_suite
from .blocking import Matching
from .errors import BudgetExceeded, MlsmError
from .model import MultilayerInstance, build_instance
from .oracle import OracleBudget, oracle_all, oracle_solve
from .reductions import (
    GeneratedInstance,
    gen_random,
    parse_dimacs,
    parse_edge_list,
    reduce_degreepartition_to_pair_super,
    reduce_is_to_global_strong,
    reduce_sat_to_alllayers_weak,
)
from .solvers import dispatch
from .verify import StabilityQuery, check

__all__ = [
    "main",
    "cmd_check",
    "cmd_solve",
    "cmd_oracle",
    "cmd_gen",
    "cmd_bench",
    "instance_to_doc",
    "instance_from_doc",
    "matching_to_doc",
    "matching_from_doc",
]


# ---------------------------------------------------------------------------
# documents


def instance_to_doc(inst: MultilayerInstance) -> dict:
    names = [inst.name_of(a) for a in range(inst.n)]
    layers = []
    for i in range(inst.ell):
        layer = {}
        for a in range(inst.n):
            approved = sorted(inst.approvals[i][a])
            if approved:
                layer[names[a]] = [names[b] for b in approved]
        layers.append(layer)
    return {"agents": names, "layers": layers}


def instance_from_doc(doc: dict) -> MultilayerInstance:
    names = list(doc["agents"])
    if len(set(names)) != len(names):
        raise ValueError("agent names must be unique")
    index = {name: a for a, name in enumerate(names)}
    layers = []
    for i, layer in enumerate(doc["layers"]):
        sets: list[list[int]] = [[] for _ in names]
        for name, approved in layer.items():
            if name not in index:
                raise ValueError(f"unknown agent {name!r} in layer {i + 1}")
            for other in approved:
                if other not in index:
                    raise ValueError(f"unknown agent {other!r} in layer {i + 1}")
                sets[index[name]].append(index[other])
        layers.append(sets)
    return build_instance(len(names), len(doc["layers"]), layers, names)


def matching_to_doc(inst: MultilayerInstance, m: Matching) -> dict:
    return {
        "pairs": [[inst.name_of(a), inst.name_of(b)] for a, b in m.pairs]
    }


def matching_from_doc(inst: MultilayerInstance, doc: dict) -> Matching:
    index = {inst.name_of(a): a for a in range(inst.n)}
    pairs = []
    for pair in doc["pairs"]:
        if len(pair) != 2:
            raise ValueError(f"matching pair {pair!r} must name two agents")
        for name in pair:
            if name not in index:
                raise ValueError(f"unknown agent {name!r} in matching")
        pairs.append((index[pair[0]], index[pair[1]]))
    return Matching.from_pairs(pairs)


def _query_from_args(args) -> StabilityQuery:
    alpha = None if args.agg == "all" else args.alpha
    if args.agg != "all" and alpha is None:
        raise MlsmError(f"--agg {args.agg} requires --alpha")
    return StabilityQuery(args.base, args.agg, alpha)


def _layers_out(layers) -> list[int] | None:
    if layers is None:
        return None
    return sorted(i + 1 for i in layers)


def _load_json(path: str) -> dict:
    return json.loads(Path(path).read_text())


def _emit(doc: dict) -> None:
    print(json.dumps(doc, indent=2))


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(args) -> int:
    inst = instance_from_doc(_load_json(args.instance))
    m = matching_from_doc(inst, _load_json(args.matching))
    q = _query_from_args(args)
    t0 = time.perf_counter()
    verdict = check(inst, m, q)
    elapsed = (time.perf_counter() - t0) * 1000
    doc = {
        "stable": verdict.stable,
        "query": q.describe(),
        "algorithm": "check",
        "witness_layers": _layers_out(verdict.witness_layers),
        "violating_pair": None
        if verdict.violating_pair is None
        else [inst.name_of(a) for a in verdict.violating_pair],
        "blocking_layers": _layers_out(verdict.blocking_layers),
        "elapsed_ms": round(elapsed, 3),
    }
    _emit(doc)
    return 0 if verdict.stable else 1


def cmd_solve(args) -> int:
    inst = instance_from_doc(_load_json(args.instance))
    q = _query_from_args(args)
    budget = OracleBudget(max_agents=args.budget)
    t0 = time.perf_counter()
    result = dispatch(inst, q, budget)
    elapsed = (time.perf_counter() - t0) * 1000
    doc = {
        "exists": None if result.status == "unknown" else result.exists,
        "status": result.status,
        "query": q.describe(),
        "algorithm": result.algorithm,
        "witness_layers": _layers_out(result.witness_layers),
        "matching": None
        if result.matching is None
        else matching_to_doc(inst, result.matching)["pairs"],
        "detail": result.detail,
        "elapsed_ms": round(elapsed, 3),
    }
    _emit(doc)
    return {"exists": 0, "not-exists": 1, "unknown": 3}[result.status]


def cmd_oracle(args) -> int:
    inst = instance_from_doc(_load_json(args.instance))
    q = _query_from_args(args)
    budget = OracleBudget(max_agents=args.budget)
    t0 = time.perf_counter()
    if args.all:
        matchings = oracle_all(inst, q, budget)
        found = matchings[0] if matchings else None
    else:
        matchings = None
        found = oracle_solve(inst, q, budget)
    elapsed = (time.perf_counter() - t0) * 1000
    doc = {
        "exists": found is not None,
        "query": q.describe(),
        "algorithm": "oracle",
        "matching": None
        if found is None
        else matching_to_doc(inst, found)["pairs"],
        "elapsed_ms": round(elapsed, 3),
    }
    if matchings is not None:
        doc["all_matchings"] = [
            matching_to_doc(inst, m)["pairs"] for m in matchings
        ]
    _emit(doc)
    return 0 if found is not None else 1


def _write_generated(gen: GeneratedInstance, out: str, source: dict) -> None:
    out_path = Path(out)
    out_path.write_text(json.dumps(instance_to_doc(gen.instance), indent=2))
    q = gen.query
    cert = {
        "kind": gen.kind,
        "query": {"base": q.base, "agg": q.agg, "alpha": q.alpha},
        "source": source,
        "agents": [gen.instance.name_of(a) for a in range(gen.instance.n)],
    }
    cert_path = out_path.with_suffix(".cert.json")
    cert_path.write_text(json.dumps(cert, indent=2))
    print(f"wrote {out_path} and {cert_path}")


def cmd_gen(args) -> int:
    if args.generator == "random":
        inst = gen_random(
            args.n, args.layers, args.p, args.symmetric, args.bipartite, args.seed
        )
        Path(args.out).write_text(json.dumps(instance_to_doc(inst), indent=2))
        print(f"wrote {args.out}")
        return 0
    if args.generator == "sat":
        formula = parse_dimacs(Path(args.cnf).read_text())
        gen = reduce_sat_to_alllayers_weak(formula)
        _write_generated(
            gen,
            args.out,
            {"num_vars": formula.num_vars, "clauses": [list(c) for c in formula.clauses]},
        )
        return 0
    if args.generator == "is":
        graph = parse_edge_list(Path(args.graph).read_text())
        gen = reduce_is_to_global_strong(graph, args.k)
        _write_generated(
            gen,
            args.out,
            {"vertices": graph.n, "edges": graph.sorted_edges(), "k": args.k},
        )
        return 0
    if args.generator == "degpart":
        graph = parse_edge_list(Path(args.graph).read_text())
        gen = reduce_degreepartition_to_pair_super(graph, args.layers, args.alpha)
        _write_generated(
            gen,
            args.out,
            {
                "vertices": graph.n,
                "edges": graph.sorted_edges(),
                "layers": args.layers,
                "alpha": args.alpha,
            },
        )
        return 0
    raise MlsmError(f"unknown generator {args.generator!r}")


def cmd_bench(args) -> int:
    if args.suite not in SUITES:
        raise MlsmError(
            f"unknown suite {args.suite!r}; choose from {', '.join(sorted(SUITES))}"
        )
    report = run_suite(args.suite, args.trials, args.seed)
    print(report.line())
    for note in report.notes:
        print(f"  {note}")
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------


def _add_query_flags(sub) -> None:
    sub.add_argument("--base", required=True, choices=("weak", "strong", "super"))
    sub.add_argument(
        "--agg", required=True, choices=("all", "global", "pair", "individual")
    )
    sub.add_argument("--alpha", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mlsm",
        description="Stable matching under multilayer approval preferences.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("check", help="verify a matching against a stability notion")
    p.add_argument("instance")
    p.add_argument("matching")
    _add_query_flags(p)
    p.set_defaults(fn=cmd_check)

    p = subs.add_parser("solve", help="find a stable matching or report none/unknown")
    p.add_argument("instance")
    _add_query_flags(p)
    p.add_argument("--budget", type=int, default=12, help="oracle fallback agent cap")
    p.set_defaults(fn=cmd_solve)

    p = subs.add_parser("oracle", help="exhaustive ground truth (small instances)")
    p.add_argument("instance")
    _add_query_flags(p)
    p.add_argument("--all", action="store_true", help="list every stable matching")
    p.add_argument("--budget", type=int, default=12)
    p.set_defaults(fn=cmd_oracle)

    p = subs.add_parser("gen", help="generate instances")
    gen_subs = p.add_subparsers(dest="generator", required=True)
    g = gen_subs.add_parser("random")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--layers", type=int, required=True)
    g.add_argument("--p", type=float, required=True)
    g.add_argument("--symmetric", action="store_true")
    g.add_argument("--bipartite", action="store_true")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="instance.json")
    g.set_defaults(fn=cmd_gen)
    g = gen_subs.add_parser("sat")
    g.add_argument("--cnf", required=True)
    g.add_argument("--out", default="instance.json")
    g.set_defaults(fn=cmd_gen)
    g = gen_subs.add_parser("is")
    g.add_argument("--graph", required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--out", default="instance.json")
    g.set_defaults(fn=cmd_gen)
    g = gen_subs.add_parser("degpart")
    g.add_argument("--graph", required=True)
    g.add_argument("--layers", type=int, required=True)
    g.add_argument("--alpha", type=int, required=True)
    g.add_argument("--out", default="instance.json")
    g.set_defaults(fn=cmd_gen)

    p = subs.add_parser("bench", help="run a named randomized suite")
    p.add_argument("suite")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(fn=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except BudgetExceeded as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2
    except (MlsmError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

    olsub check [--axioms FILE] [--proof] [--format text|json] "S <= T"
    olsub explain [--axioms FILE] "S <= T"        # check --proof
    olsub normalize [--mode ol|bl] [--sig FILE] "TERM"
    olsub gen sn-tn N
    olsub bench sn-tn N[,N...] [--csv PATH]

Exit codes: 0 provable (or success), 1 not provable, 2 error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time

from . import defs as defs_mod
from . import entail, normalize
from .errors import AxiomsNotSupported, BadN, OlsubError
from .syntax import AxiomSet, parse_query, parse_source, parse_term, print_term
from .terms import TermUniverse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="olsub",
        description="Subtyping and normalization over ortholattices with "
        "variance-annotated type constructors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="decide a subtyping query")
    p_explain = sub.add_parser("explain", help="decide a query and print its proof")
    for p in (p_check, p_explain):
        p.add_argument("query", help='query of the form "S <= T"')
        p.add_argument("--axioms", help="source file with declarations and axioms")
        p.add_argument("--format", choices=["text", "json"], default="text")
        p.add_argument("--show-internals", action="store_true", dest="show_internals",
                       help="display fresh symbols introduced by type definitions")
    p_check.add_argument("--proof", action="store_true", help="print a checked proof")

    p_norm = sub.add_parser("normalize", help="print the canonical minimal form")
    p_norm.add_argument("term", help="term to normalize")
    p_norm.add_argument("--mode", choices=["ol", "bl"], default="ol")
    p_norm.add_argument("--sig", help="source file with symbol declarations only")
    p_norm.add_argument("--axioms", help=argparse.SUPPRESS)  # rejected: axiom-free op
    p_norm.add_argument("--format", choices=["text", "json"], default="text")

    p_gen = sub.add_parser("gen", help="emit a benchmark query")
    p_gen.add_argument("family", choices=["sn-tn"])
    p_gen.add_argument("n", type=int)

    p_bench = sub.add_parser("bench", help="time benchmark queries, report CSV")
    p_bench.add_argument("family", choices=["sn-tn"])
    p_bench.add_argument("sizes", help="comma list and/or A..B ranges, e.g. 8,16 or 8..32")
    p_bench.add_argument("--csv", help="write the CSV report to a file")

    return parser


# ----------------------------------------------------------------------
# the S_n / T_n family: both sides differ only by permuted disjuncts


def sn_tn_terms(universe: TermUniverse, n: int):
    """Terms S_n and T_n: S_2 = X1|X2, S_{n+2} = S_n & (X_{2n-1}|X_{2n});
    T permutes each disjunct pair."""
    if n < 2 or n % 2 != 0:
        raise BadN(f"family index must be even and >= 2, got {n}")
    u = universe
    s = u.join([u.var("X1"), u.var("X2")])
    t = u.join([u.var("X2"), u.var("X1")])
    k = 2
    while k < n:
        a = u.var(f"X{2 * k - 1}")
        b = u.var(f"X{2 * k}")
        s = u.meet([s, u.join([a, b])])
        t = u.meet([t, u.join([b, a])])
        k += 2
    return s, t


def sn_tn_source(n: int) -> str:
    u = TermUniverse()
    s, t = sn_tn_terms(u, n)
    return f"{print_term(u, s)} <= {print_term(u, t)}\n{print_term(u, t)} <= {print_term(u, s)}\n"


# ----------------------------------------------------------------------
# commands


def _load_axioms(path: str | None, universe: TermUniverse):
    if path is None:
        return AxiomSet(), []
    with open(path, "r", encoding="utf-8") as handle:
        return parse_source(handle.read(), universe)


def cmd_check(args) -> int:
    universe = TermUniverse()
    axioms, definitions = _load_axioms(args.axioms, universe)
    s, t = parse_query(args.query, universe)
    hidden: dict[str, str] = {}
    pairs = list(axioms.pairs)
    if definitions:
        (s, t), pairs, hidden = defs_mod.desugar(universe, definitions, (s, t), pairs)
    rename = {} if args.show_internals else hidden
    started = time.perf_counter()
    verdict = entail.check(universe, s, t, pairs)
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    proof = None
    want_proof = args.command == "explain" or getattr(args, "proof", False)
    if verdict.provable and want_proof:
        clause_set = entail.build_clauses(universe, (s, t), pairs)
        proof = entail.reconstruct_proof(clause_set)
        if not entail.verify_proof(universe, proof, pairs):
            print("internal error: reconstructed proof failed verification", file=sys.stderr)
            return 2
    if args.format == "json":
        payload = {
            "verdict": "provable" if verdict.provable else "not provable",
            "stats": {
                "sequents": verdict.stats.sequents,
                "clauses": verdict.stats.clauses,
                "steps": verdict.stats.steps,
                "ms": round(elapsed_ms, 3),
            },
        }
        if proof is not None:
            payload["proof"] = _proof_json(universe, proof, rename)
        print(json.dumps(payload))
    else:
        print("provable" if verdict.provable else "not provable")
        if proof is not None:
            print(entail.format_proof(universe, proof, rename))
    return 0 if verdict.provable else 1


def _proof_json(universe, node, rename):
    return {
        "rule": node.rule,
        "sequent": [
            [print_term(universe, e.term, rename), e.side] for e in node.sequent.elements()
        ],
        "children": [_proof_json(universe, c, rename) for c in node.children],
    }


def cmd_normalize(args) -> int:
    if args.axioms:
        raise AxiomsNotSupported("normal forms are axiom-free; drop --axioms")
    universe = TermUniverse()
    if args.sig:
        axioms, definitions = _load_axioms(args.sig, universe)
        if axioms.pairs or definitions:
            raise AxiomsNotSupported("--sig file may contain only fun declarations")
    term = parse_term(args.term, universe)
    if args.mode == "bl":
        result = normalize.normalize_bl(universe, term)
    else:
        result = normalize.normalize_ol(universe, term)
    rendered = print_term(universe, result.term)
    if args.format == "json":
        print(json.dumps({"term": rendered, "mode": result.mode}))
    else:
        print(rendered)
    return 0


def cmd_gen(args) -> int:
    if args.family != "sn-tn":
        raise BadN(f"unknown family {args.family}")
    sys.stdout.write(sn_tn_source(args.n))
    return 0


def _parse_sizes(spec: str) -> list[int]:
    sizes: list[int] = []
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if ".." in chunk:
            lo, hi = chunk.split("..", 1)
            lo, hi = int(lo), int(hi)
            sizes.extend(range(lo, hi + 1, 2))
        elif chunk:
            sizes.append(int(chunk))
    return sizes


def fit_loglog_slope(xs, ys) -> float:
    """Least-squares slope of log(y) against log(x)."""
    lx = [math.log(x) for x in xs]
    ly = [math.log(y) for y in ys]
    n = len(lx)
    mx = sum(lx) / n
    my = sum(ly) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(lx, ly))
    var = sum((a - mx) ** 2 for a in lx)
    return cov / var


def run_bench(sizes) -> tuple[list[dict], float]:
    rows = []
    for n in sizes:
        universe = TermUniverse()
        s, t = sn_tn_terms(universe, n)
        started = time.perf_counter()
        forward = entail.check(universe, s, t)
        backward = entail.check(universe, t, s)
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        rows.append(
            {
                "n": n,
                "provable": forward.provable and backward.provable,
                "sequents": forward.stats.sequents + backward.stats.sequents,
                "clauses": forward.stats.clauses + backward.stats.clauses,
                "wall_ms": elapsed_ms,
            }
        )
    slope = 0.0
    if len(rows) >= 2:
        slope = fit_loglog_slope([r["n"] for r in rows], [r["clauses"] for r in rows])
    return rows, slope


def cmd_bench(args) -> int:
    sizes = _parse_sizes(args.sizes)
    for n in sizes:
        if n < 2 or n % 2 != 0:
            raise BadN(f"family index must be even and >= 2, got {n}")
    rows, slope = run_bench(sizes)
    lines = ["n,provable,sequents,clauses,wall_ms"]
    lines += [
        f"{r['n']},{str(r['provable']).lower()},{r['sequents']},{r['clauses']},{r['wall_ms']:.2f}"
        for r in rows
    ]
    report = "\n".join(lines) + "\n"
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as handle:
            handle.write(report)
    else:
        sys.stdout.write(report)
    print(f"log-log slope (clauses vs n): {slope:.3f}")
    return 0


_HANDLERS = {
    "check": cmd_check,
    "explain": cmd_check,
    "normalize": cmd_normalize,
    "gen": cmd_gen,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except OlsubError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

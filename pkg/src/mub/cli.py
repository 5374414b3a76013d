"""``mub`` command line: solve, bounds, gen, check, dot.

Exit codes: 0 ok, 1 input error (or invalid certificate), 2 width guard refusal.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from pathlib import Path

from .bounds import InvariantError, full_bounds_report
from .branching import Branching, BranchingError, uncovered_pairs, verify_branching
from .matrix import (
    BinaryMatrix,
    EmptyPosetError,
    MatrixParseError,
    build_containment_digraph,
    digraph_to_dot,
    parse_matrix,
)
from .oracle import OracleGuardError, brute_beta
from .solver import WidthGuardError, solve

EXIT_OK, EXIT_INPUT, EXIT_GUARD = 0, 1, 2

RNG_NAME = "python-random-mt19937"


class InputError(Exception):
    pass


def load_matrix(path: str) -> BinaryMatrix:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_matrix(text)
    except MatrixParseError as exc:
        raise InputError(f"{path}: {exc}") from None


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_out(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _summary(dag) -> dict:
    return {
        "vertices": len(dag),
        "arcs": dag.num_arcs(),
        "sinks": len(dag.sinks()),
    }


def cmd_solve(args) -> int:
    matrix = load_matrix(args.path)
    started = time.perf_counter()
    dag = build_containment_digraph(matrix)
    result = solve(dag, max_width=args.max_width, threads=args.threads)
    bounds = full_bounds_report(dag)
    bounds.beta_exact = result.beta
    bounds.beta_exact_witness = result.branching
    bounds.check()
    elapsed = time.perf_counter() - started

    oracle = None
    if args.oracle:
        try:
            beta, _ = brute_beta(dag)
            oracle = {"beta": beta, "agrees": beta == result.beta}
        except OracleGuardError as exc:
            oracle = {"skipped": str(exc)}
        if oracle.get("agrees") is False:
            raise InvariantError(f"solver says {result.beta}, oracle says {oracle['beta']}")

    if args.dot:
        Path(args.dot).write_text(digraph_to_dot(dag, result.branching.arcs), encoding="utf-8")

    if args.json:
        report = {
            "matrix": {"rows": matrix.m, "cols": matrix.n, **_summary(dag), "width": result.width},
            "beta_exact": result.beta,
            "fast_path": result.fast_path,
            "bounds": bounds.to_json(dag),
            "branching": result.branching.to_json(dag),
            "uncovered": {"total": result.uncovered.total, "per_vertex": list(result.uncovered.per_vertex)},
            "search": {"guesses": result.guesses, "completable": result.completable},
        }
        if oracle is not None:
            report["oracle"] = oracle
        if args.timing:
            report["seconds"] = round(elapsed, 6)
        sys.stdout.write(dump_json(report))
        return EXIT_OK

    s = _summary(dag)
    out = [
        f"matrix: {matrix.m}x{matrix.n}, {s['vertices']} vertices, {s['arcs']} arcs, "
        f"width {result.width}, {s['sinks']} sinks",
        f"bounds: alpha_w={bounds.alpha_w} <= W={bounds.ww} <= beta={result.beta} "
        f"<= beta_linear={bounds.beta_linear}",
        f"beta_exact: {result.beta}",
        f"fast-path: {result.fast_path or 'none'}",
        f"branching ({len(result.branching)} arcs):",
    ]
    out += [f"  {dag.label(u)} -> {dag.label(v)}" for u, v in result.branching.arcs]
    out.append(f"uncovered: {result.uncovered.total}")
    if result.guesses:
        out.append(f"search: {result.guesses} guesses, {result.completable} completable")
    if oracle is not None:
        out.append(f"oracle: {oracle}")
    out.append(f"time: {elapsed:.3f}s")
    print("\n".join(out))
    return EXIT_OK


def cmd_bounds(args) -> int:
    dag = build_containment_digraph(load_matrix(args.path))
    report = full_bounds_report(dag)
    if args.json:
        sys.stdout.write(dump_json(report.to_json(dag)))
    else:
        print(f"alpha_w: {report.alpha_w}  witness: {[dag.label(v) for v in report.alpha_witness]}")
        print(f"W: {report.ww}  per row: {report.ww_per_row}")
        print(f"beta_linear: {report.beta_linear}  ({len(report.beta_linear_witness)} arcs)")
    return EXIT_OK


def generate_matrix(m: int, n: int, density: float, seed: int) -> str:
    """Seeded random matrix text.  Entry (i, j) is 1 when the (i*n + j)-th
    draw of ``random.Random(seed).random()`` is below ``density``."""
    if m < 1 or n < 1:
        raise InputError("m and n must be at least 1")
    if not 0 < density < 1:
        raise InputError("density must lie strictly between 0 and 1")
    if not -(2**63) <= seed < 2**64:
        raise InputError("seed must fit in 64 bits")
    rng = random.Random(seed)
    lines = [f"# mub gen m={m} n={n} density={density} seed={seed} rng={RNG_NAME}"]
    for _ in range(m):
        lines.append("".join("1" if rng.random() < density else "0" for _ in range(n)))
    return "\n".join(lines) + "\n"


def cmd_gen(args) -> int:
    write_out(generate_matrix(args.m, args.n, args.density, args.seed), args.output)
    return EXIT_OK


def _branching_arcs(payload, matrix: BinaryMatrix, dag) -> list[tuple[int, int]]:
    """Arcs in ``dag``'s vertex ids; accepts a branching object or a full
    solve report.  Vertex tables are resolved by support set, not by id."""
    if isinstance(payload, dict) and "branching" in payload:
        payload = payload["branching"]
    if isinstance(payload, list):
        payload = {"arcs": payload}
    if not isinstance(payload, dict) or not isinstance(payload.get("arcs"), list):
        raise InputError("branching JSON must contain an 'arcs' list")
    remap = None
    if "vertices" in payload:
        label_index = {label: i for i, label in enumerate(matrix.row_labels)}
        remap = {}
        for entry in payload["vertices"]:
            try:
                bits = 0
                for label in entry["rows"]:
                    bits |= 1 << label_index[label]
                remap[entry["id"]] = bits
            except (KeyError, TypeError):
                raise InputError(f"malformed vertex entry {entry!r}") from None
    arcs = []
    for arc in payload["arcs"]:
        if not (isinstance(arc, list) and len(arc) == 2 and all(isinstance(x, int) for x in arc)):
            raise InputError(f"malformed arc {arc!r}")
        if remap is None:
            arcs.append((arc[0], arc[1]))
            continue
        ends = []
        for x in arc:
            if x not in remap:
                raise InputError(f"arc {arc} uses vertex id {x} missing from the vertex table")
            try:
                ends.append(dag.index_of(remap[x]))
            except KeyError:
                raise InputError(f"vertex {x} is not a support set of this matrix") from None
        arcs.append((ends[0], ends[1]))
    return arcs


def cmd_check(args) -> int:
    matrix = load_matrix(args.matrix)
    dag = build_containment_digraph(matrix)
    try:
        payload = json.loads(Path(args.branching).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {args.branching}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.branching}: malformed JSON: {exc}") from None
    arcs = _branching_arcs(payload, matrix, dag)
    problems = verify_branching(dag, arcs, maximal=args.maximal)
    if problems:
        print("invalid: " + "; ".join(problems))
        return EXIT_INPUT
    total = uncovered_pairs(dag, Branching(arcs)).total
    print(f"valid, uncovered = {total}")
    return EXIT_OK


def cmd_dot(args) -> int:
    dag = build_containment_digraph(load_matrix(args.path))
    write_out(digraph_to_dot(dag, hasse=args.hasse), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mub", description="Minimum uncovering branching solver")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="exact uncovering number with an optimal branching")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.add_argument("--dot", metavar="FILE", help="write the digraph with the branching in bold")
    p.add_argument("--max-width", type=int, default=None, help="width guard (default 5, env MUB_MAX_WIDTH)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--oracle", action="store_true", help="cross-check against exhaustive search")
    p.add_argument("--timing", action="store_true", help="include wall time in JSON output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bounds", help="alpha_w, W and beta_linear without the exact search")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("gen", help="seeded random matrix")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("density", type=float)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="verify a branching certificate")
    p.add_argument("matrix")
    p.add_argument("branching")
    p.add_argument("--maximal", action="store_true", help="also require every non-sink to have an out-arc")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("dot", help="export the containment digraph as DOT")
    p.add_argument("path")
    p.add_argument("-o", "--output")
    p.add_argument("--hasse", action="store_true", help="draw covering arcs only")
    p.set_defaults(func=cmd_dot)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except WidthGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (InputError, EmptyPosetError, BranchingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

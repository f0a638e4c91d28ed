"""Command-line harness: classify, best-move, verify, grundy-table, serve.

Exit code protocol (chosen to make shell scripting trivial):

* 0  -- success; for ``classify`` specifically: the position is P
* 10 -- ``classify`` only: the position is N
* 2  -- unparseable or invalid input (argparse uses the same code)
* 3  -- ``verify`` only: at least one classifier/oracle mismatch or
        strategy soundness violation, i.e. a falsified theorem

All outputs are byte-stable across runs for identical arguments: no
timestamps, no timing, deterministic ordering everywhere.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

from .classifier import classify, delete_nim_grundy
from .core import (
    DeleteNim,
    GameError,
    PN,
    Position,
    Ruleset,
    canonicalize,
    parse_ruleset,
)
from .numtheory import DomainError
from .oracle import region_oracle, strategy_violations, sweep
from .strategy import winning_move

JOBS_ENV = "DELSPLIT_JOBS"


def _default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _parse_heaps(raw: Sequence[str]) -> list[int]:
    text = " ".join(raw).replace(",", " ")
    fields = text.split()
    if not fields:
        raise GameError("no heap sizes given")
    try:
        return [int(f) for f in fields]
    except ValueError as exc:
        raise GameError(f"bad heap list {' '.join(raw)!r}: {exc}") from exc


def _position_line(ruleset: Ruleset, p: Position) -> str:
    out = classify(ruleset, p)
    line = f"{p}: {out.pn} {out.certificate}"
    if isinstance(ruleset, DeleteNim):
        line += f" grundy={delete_nim_grundy(*p.heaps)}"
    return line


def cmd_classify(args: argparse.Namespace) -> int:
    ruleset = parse_ruleset(args.ruleset)
    p = canonicalize(ruleset, _parse_heaps(args.heaps))
    out = classify(ruleset, p)
    print(_position_line(ruleset, p))
    return 0 if out.pn is PN.P else 10


def _format_move(p: Position, record) -> str:
    deleted = ",".join(str(p.heaps[i]) for i in record.deleted)
    clauses = [f"delete [{deleted}]"]
    for index, parts in record.splits:
        shown = ",".join(str(part) for part in sorted(parts))
        clauses.append(f"split {p.heaps[index]} -> [{shown}]")
    return "; ".join(clauses)


def cmd_best_move(args: argparse.Namespace) -> int:
    ruleset = parse_ruleset(args.ruleset)
    p = canonicalize(ruleset, _parse_heaps(args.heaps))
    print(_position_line(ruleset, p))
    choice = winning_move(ruleset, p)
    if choice is None:
        print("position is P: no winning move")
    else:
        print(f"winning move: {_format_move(p, choice.record)}")
        print(f"successor: {choice.result} (P)")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    ruleset = parse_ruleset(args.ruleset)
    oracle = region_oracle(ruleset, args.max_heap)
    report = sweep(ruleset, args.max_heap, oracle=oracle, jobs=args.jobs)
    if args.jobs > 1:
        # Parallel workers return rows only; refill this process's memo so
        # the strategy check below can reuse solved subpositions.
        for row in report.rows:
            oracle.solve_outcome(ruleset, row.heaps)
    problems = strategy_violations(ruleset, report.rows, oracle)
    info = report.summary()
    print(
        f"ruleset={info['ruleset']} max_heap={info['max_heap']} "
        f"positions={info['positions']} p={info['p_positions']} n={info['n_positions']} "
        f"mismatches={info['mismatches']} strategy_violations={len(problems)}"
    )
    for row in report.rows:
        if not row.agree:
            print(f"MISMATCH {','.join(map(str, row.heaps))}: "
                  f"closed={row.closed} oracle={row.oracle}")
    for problem in problems:
        print(f"STRATEGY {problem}")
    if args.out:
        text = report.to_jsonl() if args.format == "jsonl" else report.to_csv()
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"report written to {args.out}")
    return 3 if (report.mismatches or problems) else 0


def cmd_grundy_table(args: argparse.Namespace) -> int:
    ruleset = parse_ruleset(args.ruleset)
    oracle = region_oracle(ruleset, args.max_heap)
    low = ruleset.min_heap
    if ruleset.heap_count == 2:
        values = range(low, args.max_heap + 1)
        width = max(len(str(args.max_heap)), 2) + 1
        header = "x\\y".ljust(4) + "".join(str(y).rjust(width) for y in values)
        print(header)
        for x in values:
            cells = "".join(
                str(oracle.solve_grundy(ruleset, tuple(sorted((x, y))))).rjust(width)
                for y in values
            )
            print(str(x).ljust(4) + cells)
    else:
        from .oracle import iter_region

        for heaps in iter_region(ruleset, args.max_heap):
            print(f"{','.join(map(str, heaps))}: {oracle.solve_grundy(ruleset, heaps)}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(static_dir=args.static_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="delsplit",
        description="Solve, verify and play delete-and-split nim variants.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_ruleset(p: argparse.ArgumentParser):
        p.add_argument(
            "--ruleset",
            required=True,
            help="delete-nim | vdn | abo:n | nmth:n | half:m | kfrac:k,m | single:n",
        )

    p = sub.add_parser("classify", help="closed-form outcome of one position")
    add_ruleset(p)
    p.add_argument("--heaps", required=True, nargs="+",
                   help="heap sizes, comma- or space-separated")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("best-move", help="construct a winning move, if any")
    add_ruleset(p)
    p.add_argument("--heaps", required=True, nargs="+")
    p.set_defaults(func=cmd_best_move)

    p = sub.add_parser("verify", help="sweep classifier against the exhaustive oracle")
    add_ruleset(p)
    p.add_argument("--max-heap", required=True, type=int)
    p.add_argument("--out", help="write the row-by-row report to this file")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--jobs", type=int, default=_default_jobs(),
                   help=f"worker processes (default ${JOBS_ENV} or 1)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("grundy-table", help="oracle Grundy values over a region")
    add_ruleset(p)
    p.add_argument("--max-heap", required=True, type=int)
    p.set_defaults(func=cmd_grundy_table)

    p = sub.add_parser("serve", help="run the HTTP play service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--static-dir", help="also serve this directory at / (the web UI)")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GameError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()

"""``cubeforge`` command line.

Exit codes: 0 ok, 1 invalid object, 2 provably nonexistent, 3 unsupported,
4 unknown existence, 64 usage, 65 data format.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from cubeforge.cache import cached_oa, cached_realization
from cubeforge.catalog import ENTRIES, list_catalog, load_catalog
from cubeforge.core import (
    PairedPack,
    SubcubePlacement,
    check_disjoint_subcubes,
    check_partial_realization,
    check_realization,
    check_transversal,
    verify_cube,
    verify_partial,
)
from cubeforge.dispatcher import (
    DEFAULT_BUDGET,
    EXISTS,
    NOT_EXISTS,
    UNKNOWN,
    brute_force_search,
    construct,
    existence,
)
from cubeforge.errors import (
    BudgetExceeded,
    CubeError,
    FormatError,
    ProvablyNonexistent,
    Unsupported,
    UnsupportedOrder,
)
from cubeforge.formats import dumps_json, dumps_lcube, dumps_oa, loads_json, loads_lcube, loads_oa
from cubeforge.oa import check_oa, oa_for_order

OK = 0
INVALID = 1
NONEXISTENT = 2
UNSUPPORTED = 3
UNKNOWN_EXISTENCE = 4
USAGE = 64
DATA_FORMAT = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def parse_partition(text) -> tuple:
    try:
        parts = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise UsageError(f"partition must be a comma list of positive integers, got {text!r}") from None
    if not parts or any(h < 1 for h in parts):
        raise UsageError(f"partition parts must be positive, got {text!r}")
    return parts


def _fail(code, message):
    print(message, file=sys.stderr)
    return code


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _cube_text(cube, partition, transversal, fmt, out):
    if fmt is None:
        fmt = "json" if out and str(out).endswith(".json") else "lcube"
    if fmt == "json":
        return dumps_json(cube, partition, transversal)
    return dumps_lcube(cube, partition, transversal)


def _report_violations(label, report):
    print(f"{label}: {report}", file=sys.stderr)


# ---------------------------------------------------------------------------
# subcommands


def cmd_construct(partition, out=None, fmt=None) -> int:
    verdict = existence(partition)
    if verdict.status == NOT_EXISTS:
        return _fail(NONEXISTENT, str(verdict))
    try:
        real = cached_realization(sorted(partition, reverse=True), lambda: construct(partition))
    except ProvablyNonexistent as exc:
        return _fail(NONEXISTENT, f"NotExists ({exc.verdict.justification})")
    except Unsupported as exc:
        if verdict.status == UNKNOWN:
            return _fail(UNKNOWN_EXISTENCE, str(verdict))
        return _fail(UNSUPPORTED, f"unsupported: {exc}")
    _emit(_cube_text(real.cube, real.partition, (), fmt, out), out)
    return OK


def _read_placements(path) -> list[SubcubePlacement]:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read placements: {exc}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"placements: invalid JSON: {exc}") from None
    if not isinstance(doc, list):
        raise FormatError("placements must be a JSON list of objects")
    out = []
    for item in doc:
        if not isinstance(item, dict) or not all(key in item for key in ("rows", "cols", "files", "symbols")):
            raise FormatError("each placement needs rows, cols, files and symbols")
        out.append(SubcubePlacement(item["rows"], item["cols"], item["files"], item["symbols"]))
    return out


def _verify_oa(text) -> int:
    arr, t, n, lam = loads_oa(text)
    report = check_oa(arr, t, arr.shape[0], n, lam)
    if not report.valid:
        _report_violations("orthogonal array", report)
        return INVALID
    print(f"valid OA({t},{arr.shape[0]},{n}) of index {lam}")
    return OK


def cmd_verify(path, partition=None, placements=None, partial=False) -> int:
    try:
        text = Path(path).read_text()
    except (OSError, UnicodeDecodeError) as exc:
        return _fail(USAGE if isinstance(exc, FileNotFoundError) else DATA_FORMAT, f"{path}: {exc}")
    try:
        if text.startswith("oa "):
            return _verify_oa(text)
        data = loads_json(text) if text.lstrip().startswith("{") else loads_lcube(text)
        cube = data.cube
        n = data.order
        reports = []
        if not partial and not data.is_complete:
            reports.append(("completeness", None))
        reports.append(("lines", verify_partial(cube) if partial else verify_cube(cube)))
        claim = partition if partition is not None else data.partition
        if claim is not None:
            if sum(claim) != n:
                return _fail(INVALID, f"partition {claim} sums to {sum(claim)}, cube has order {n}")
            check = check_partial_realization if partial else check_realization
            reports.append(("realization", check(cube, claim)))
        if data.transversal:
            reports.append(("transversal", check_transversal(cube, data.transversal)))
        if placements is not None:
            reports.append(("placements", check_disjoint_subcubes(cube, _read_placements(placements))))
    except FormatError as exc:
        return _fail(DATA_FORMAT, f"{path}: {exc}")
    bad = False
    for label, report in reports:
        if report is None:
            print(f"{label}: {int((cube == 0).sum())} empty cells (pass --partial for partial cubes)",
                  file=sys.stderr)
            bad = True
        elif not report.valid:
            _report_violations(label, report)
            bad = True
    if bad:
        return INVALID
    print(f"valid {'partial ' if partial else ''}cube of order {n}"
          + (f" realizing {','.join(map(str, claim))}" if claim else ""))
    return OK


def cmd_oa(n, out=None) -> int:
    try:
        oa = cached_oa(n, lambda: oa_for_order(n))
    except UnsupportedOrder as exc:
        return _fail(UNSUPPORTED, str(exc))
    _emit(dumps_oa(oa.array, n), out)
    return OK


def cmd_exists(partition) -> int:
    verdict = existence(partition)
    print(verdict)
    return {EXISTS: OK, NOT_EXISTS: NONEXISTENT, UNKNOWN: UNKNOWN_EXISTENCE}[verdict.status]


def cmd_search(partition, budget=DEFAULT_BUDGET, out=None, fmt=None) -> int:
    try:
        real = brute_force_search(partition, budget)
    except BudgetExceeded as exc:
        return _fail(UNSUPPORTED, str(exc))
    if real is None:
        return _fail(NONEXISTENT, "no realization: search space exhausted")
    _emit(_cube_text(real.cube, real.partition, (), fmt, out), out)
    return OK


def cmd_catalog(action, name=None, out=None, fmt=None) -> int:
    if action == "list":
        for entry in list_catalog():
            parts = ",".join(map(str, entry.partition))
            print(f"{entry.name:<20} {entry.kind:<12} partition {parts:<10} order {entry.order}")
        return OK
    if name not in ENTRIES:
        return _fail(USAGE, f"no catalog entry {name!r}")
    item = load_catalog(name)
    if isinstance(item, PairedPack):
        first, second = ENTRIES[name].files
        cells = " ".join("(" + ",".join(map(str, c)) + ")" for c in item.transversal)
        print(f"{name}: paired pack of {first} and {second}")
        print(f"shared transversal: {cells}")
        return OK
    _emit(_cube_text(item.cube, item.partition, (), fmt, out), out)
    return OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cubeforge", description="Latin cubes with disjoint subcubes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a realization of a partition")
    p.add_argument("--partition", required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--format", choices=("lcube", "json"))

    p = sub.add_parser("verify", help="check a cube, realization or OA file")
    p.add_argument("path")
    p.add_argument("--partition")
    p.add_argument("--placements", help="JSON list of {rows, cols, files, symbols}")
    p.add_argument("--partial", action="store_true", help="allow empty cells")

    p = sub.add_parser("oa", help="write an OA(3,5,n)")
    p.add_argument("n", type=int)
    p.add_argument("-o", "--output")

    p = sub.add_parser("exists", help="print the existence verdict")
    p.add_argument("partition")

    p = sub.add_parser("search", help="exhaustive search for small orders")
    p.add_argument("partition")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("-o", "--output")
    p.add_argument("--format", choices=("lcube", "json"))

    p = sub.add_parser("catalog", help="list or print shipped objects")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?")
    p.add_argument("-o", "--output")
    p.add_argument("--format", choices=("lcube", "json"))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "construct":
            return cmd_construct(parse_partition(args.partition), args.output, args.format)
        if args.command == "verify":
            partition = parse_partition(args.partition) if args.partition else None
            return cmd_verify(args.path, partition, args.placements, args.partial)
        if args.command == "oa":
            if args.n < 1:
                raise UsageError("n must be positive")
            return cmd_oa(args.n, args.output)
        if args.command == "exists":
            return cmd_exists(parse_partition(args.partition))
        if args.command == "search":
            return cmd_search(parse_partition(args.partition), args.budget, args.output, args.format)
        if args.action == "show" and not args.name:
            raise UsageError("catalog show needs an entry name")
        return cmd_catalog(args.action, args.name, args.output, args.format)
    except UsageError as exc:
        return _fail(USAGE, f"cubeforge: {exc}")
    except FormatError as exc:
        return _fail(DATA_FORMAT, f"cubeforge: {exc}")
    except CubeError as exc:
        return _fail(INVALID, f"cubeforge: {exc}")


if __name__ == "__main__":
    sys.exit(main())

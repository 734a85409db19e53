"""``aawrangle`` command line: ingest, query, combine and pivot triple files.

Exit status: 0 on success, 1 for usage/flag errors, 2 for data, parse and
domain errors. Diagnostics go to stderr; data goes to ``-o`` or stdout.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import array as aa
from .denormalize import DenormConfig, denormalize
from .errors import AAError, PivotError
from .formats import (format_dense, format_triple_stream, format_triples,
                      read_triples)
from .pivot import PivotSpec, pivot
from .semiring import SEMIRING_NAMES, looks_numeric


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_key(text: str, as_text: bool):
    if not as_text and looks_numeric(text):
        return aa.make_key(float(text))
    return text


def _parse_range(text, as_text):
    if text is None:
        return None
    lo, sep, hi = text.partition(":")
    if not sep:
        raise UsageError(f"range must look like lo:hi, got {text!r}")
    try:
        lo, hi = _parse_key(lo, as_text), _parse_key(hi, as_text)
    except AAError as e:
        raise UsageError(str(e)) from None
    if aa.key_order(lo) > aa.key_order(hi):
        raise UsageError(f"empty-range: {text!r}")
    return lo, hi


def _read_input(path) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as f:
        return f.read()


def _load(path, semiring=None) -> aa.AssociativeArray:
    triples, sr = read_triples(_read_input(path), semiring)
    return aa.construct(triples, sr)


def _emit(args, text: str):
    data = text.encode("utf-8")
    if args.output in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(args.output, "wb") as f:
            f.write(data)


def _note(msg):
    print(msg, file=sys.stderr)


# -- commands ----------------------------------------------------------------

def cmd_ingest(args):
    fmt = args.format
    if fmt is None:
        ext = os.path.splitext(args.input)[1].lower()
        fmt = {".json": "json", ".xml": "xml"}.get(ext)
        if fmt is None:
            raise UsageError("cannot infer --format from the input name; pass --format")
    try:
        cfg = DenormConfig(separator=args.separator, array_mode=args.array_mode,
                           record_selector=args.record_selector,
                           row_id_field=args.row_id_field)
    except ValueError as e:
        raise UsageError(str(e)) from None
    triples, nrec = denormalize(_read_input(args.input), cfg, fmt)
    _emit(args, format_triple_stream(triples, args.semiring or "plus_times"))
    _note(f"records: {nrec}")
    _note(f"triples: {len(triples)}")


def _binary(op):
    def run(args):
        a = _load(args.a, args.semiring)
        b = _load(args.b, args.semiring)
        _emit(args, format_triples(op(a, b)))
    return run


def cmd_transpose(args):
    _emit(args, format_triples(aa.transpose(_load(args.a, args.semiring))))


def cmd_query(args):
    rows = _parse_range(args.rows, args.keys_as_text)
    cols = _parse_range(args.cols, args.keys_as_text)
    A = _load(args.a, args.semiring)
    _emit(args, format_triples(aa.select(A, rows, cols)))


def cmd_pivot(args):
    kt = args.keys_as_text
    try:
        spec = PivotSpec(
            _parse_key(args.row_field, kt), _parse_key(args.col_field, kt),
            None if args.value_field is None else _parse_key(args.value_field, kt),
            args.agg)
    except PivotError as e:
        raise UsageError(str(e)) from None
    if spec.count_mode and args.agg != "plus_times":
        _note("note: --agg is ignored without --value-field (count mode)")
    table = _load(args.a, args.semiring)
    result, skipped = pivot(table, spec)
    _emit(args, format_dense(result) if args.dense else format_triples(result))
    _note(f"skipped: {skipped}")


def cmd_stats(args):
    A = _load(args.a, args.semiring)
    nrows, ncols = A.shape
    _emit(args, f"rows: {nrows}\ncols: {ncols}\nentries: {A.nnz}\n"
                f"semiring: {A.semiring.name}\n")


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="aawrangle",
                description="Associative-array data wrangling over semirings.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, semiring_help="re-tag inputs with this semiring"):
        sp.add_argument("-o", dest="output", metavar="PATH",
                        help="output path (default: stdout)")
        sp.add_argument("--semiring", choices=SEMIRING_NAMES, help=semiring_help)
        return sp

    sp = common(sub.add_parser("ingest", help="flatten JSON/XML into a triple file"),
                "semiring written to the header (default: plus_times)")
    sp.add_argument("input", help="JSON or XML document, or - for stdin")
    sp.add_argument("--format", choices=("json", "xml"))
    sp.add_argument("--separator", default="/")
    sp.add_argument("--array-mode", choices=("positional", "value_column"),
                    default="positional")
    sp.add_argument("--row-id-field")
    sp.add_argument("--record-selector")
    sp.set_defaults(func=cmd_ingest)

    for name, op, help_ in (("add", aa.elementwise_add, "element-wise add"),
                            ("emul", aa.elementwise_mul, "element-wise multiply"),
                            ("matmul", aa.array_multiply, "array multiply")):
        sp = common(sub.add_parser(name, help=help_))
        sp.add_argument("a")
        sp.add_argument("b")
        sp.set_defaults(func=_binary(op))

    sp = common(sub.add_parser("transpose", help="swap rows and columns"))
    sp.add_argument("a")
    sp.set_defaults(func=cmd_transpose)

    sp = common(sub.add_parser("query", help="select key ranges"))
    sp.add_argument("a")
    sp.add_argument("--rows", metavar="LO:HI")
    sp.add_argument("--cols", metavar="LO:HI")
    sp.add_argument("--keys-as-text", action="store_true")
    sp.set_defaults(func=cmd_query)

    sp = common(sub.add_parser("pivot", help="pivot a record table"))
    sp.add_argument("a")
    sp.add_argument("--row-field", required=True)
    sp.add_argument("--col-field", required=True)
    sp.add_argument("--value-field")
    sp.add_argument("--agg", choices=SEMIRING_NAMES, default="plus_times")
    sp.add_argument("--dense", action="store_true")
    sp.add_argument("--keys-as-text", action="store_true")
    sp.set_defaults(func=cmd_pivot)

    sp = common(sub.add_parser("stats", help="print array dimensions"))
    sp.add_argument("a")
    sp.set_defaults(func=cmd_stats)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except UsageError as e:
        _note(f"aawrangle: error: {e}")
        return 1
    except (AAError, OSError, UnicodeDecodeError) as e:
        _note(f"aawrangle: {e}")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Pivot tables and co-occurrence built from the aggregating constructor."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .array import (AssociativeArray, Triple, array_multiply, construct, lookup,
                    make_key, transpose)
from .denormalize import escape_segment
from .errors import DomainError, PivotError
from .semiring import Semiring, format_number, get_semiring, looks_numeric


@dataclass(frozen=True)
class PivotSpec:
    row_field: object
    col_field: object
    value_field: Optional[object] = None
    aggregator: object = "plus_times"

    def __post_init__(self):
        if self.row_field == self.col_field:
            raise PivotError(f"degenerate pivot: row and column field are both {self.row_field!r}")
        sr = "plus_times" if self.value_field is None else self.aggregator
        object.__setattr__(self, "aggregator", get_semiring(sr))

    @property
    def count_mode(self) -> bool:
        return self.value_field is None


class PivotResult(NamedTuple):
    array: AssociativeArray
    skipped: int


_MISSING = object()


def _scalar(v):
    """Reduce a stored table value to a single Number or Text, else _MISSING.

    Set values (from ``union_intersection`` tables) only count when they are
    singletons; numeric-looking text reads as a number, mirroring the triple
    file key rule.
    """
    if isinstance(v, frozenset):
        if len(v) != 1:
            return _MISSING
        (v,) = v
    if isinstance(v, str):
        return float(v) if looks_numeric(v) else v
    return v


def _as_key(v):
    v = _scalar(v)
    if v is _MISSING or (isinstance(v, float) and not math.isfinite(v)):
        return _MISSING
    return make_key(v)


def _as_value(v, sr: Semiring, record):
    if sr.name != "union_intersection":
        v = _scalar(v)
    try:
        return sr.coerce(v)
    except DomainError:
        raise DomainError(
            f"value outside semiring domain for {sr.name} in record {record!r}: {v!r}"
        ) from None


def pivot(table: AssociativeArray, spec: PivotSpec) -> PivotResult:
    """Cross-tabulate ``table`` records by two fields.

    Each record contributes one triple (row-field value, col-field value,
    value-field value or 1) and the triples are folded by the aggregator's
    add. Records lacking a usable field are counted in ``skipped``.
    """
    sr = spec.aggregator
    zero = table.semiring.zero
    triples = []
    skipped = 0
    for r in table.rows:
        rk = _as_key(lookup(table, r, spec.row_field))
        ck = _as_key(lookup(table, r, spec.col_field))
        if rk is _MISSING or ck is _MISSING:
            skipped += 1
            continue
        if spec.count_mode:
            v = 1.0
        else:
            raw = lookup(table, r, spec.value_field)
            if raw == zero:
                skipped += 1
                continue
            v = _as_value(raw, sr, r)
        triples.append(Triple(rk, ck, v))
    return PivotResult(construct(triples, sr), skipped)


def _is_indicator(table: AssociativeArray) -> bool:
    return table.semiring.name == "plus_times" and all(v == 1.0 for _, v in table.items())


def co_occurrence(table: AssociativeArray) -> AssociativeArray:
    """Feature-by-feature record counts: transpose(table) @ table."""
    if not _is_indicator(table):
        raise PivotError("not an indicator array")
    return array_multiply(transpose(table), table)


def to_indicators(table: AssociativeArray, separator: str = "/") -> AssociativeArray:
    """Re-encode a record table as ``field<sep>value`` indicator columns."""
    triples = []
    for (r, c), v in table.items():
        field = c if isinstance(c, str) else format_number(c)
        elems = sorted(v) if isinstance(v, frozenset) else [v]
        for e in elems:
            text = format_number(e) if isinstance(e, float) else e
            triples.append((r, escape_segment(field, separator) + separator
                            + escape_segment(text, separator), 1.0))
    return construct(triples, "plus_times")

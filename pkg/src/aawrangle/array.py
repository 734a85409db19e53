"""Sparse associative arrays A: K1 x K2 -> V over a pluggable semiring.

Arrays are kept in minimal form: no stored zeros, and the row/column key
sets are exactly the support. All operations return new arrays.
"""
from __future__ import annotations

import math
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple, Union

from .errors import DomainError, EmptyRangeError, SemiringMismatchError
from .semiring import TOP, Semiring, get_semiring, values_equal

Key = Union[float, str]


class Triple(NamedTuple):
    row: Key
    col: Key
    value: object


def make_key(k) -> Key:
    if isinstance(k, str):
        return k
    if isinstance(k, bool) or not isinstance(k, (int, float)):
        raise DomainError(f"not a legal key: {k!r}")
    k = float(k)
    if not math.isfinite(k):
        raise DomainError(f"number keys must be finite: {k!r}")
    return k + 0.0  # folds -0.0 into 0.0


def key_order(k: Key):
    """Sort key: every number key precedes every text key."""
    return (1, k) if isinstance(k, str) else (0, k)


def sorted_keys(keys: Iterable[Key]) -> Tuple[Key, ...]:
    return tuple(sorted(keys, key=key_order))


class AssociativeArray:
    __slots__ = ("_sr", "_data", "_rows", "_cols", "_nnz")

    def __init__(self, semiring, data: Optional[Dict[Key, Dict[Key, object]]] = None):
        # ``data`` must already be minimal and domain-checked; use construct() otherwise
        self._sr = get_semiring(semiring)
        self._data = {}
        cols = set()
        nnz = 0
        for r in sorted_keys((data or {}).keys()):
            row = data[r]
            if not row:
                continue
            self._data[r] = {c: row[c] for c in sorted(row, key=key_order)}
            cols.update(row)
            nnz += len(row)
        self._rows = tuple(self._data)
        self._cols = sorted_keys(cols)
        self._nnz = nnz

    @property
    def semiring(self) -> Semiring:
        return self._sr

    @property
    def rows(self) -> Tuple[Key, ...]:
        return self._rows

    @property
    def cols(self) -> Tuple[Key, ...]:
        return self._cols

    @property
    def nnz(self) -> int:
        return self._nnz

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self._rows), len(self._cols)

    def row(self, r) -> Dict[Key, object]:
        """Entries of row ``r`` as a {col: value} dict in ascending column order."""
        return dict(self._data.get(r, {}))

    def items(self):
        for r, row in self._data.items():
            for c, v in row.items():
                yield (r, c), v

    def __len__(self):
        return self._nnz

    def __getitem__(self, rc):
        r, c = rc
        return lookup(self, r, c)

    def __iter__(self):
        return iter(to_triples(self))

    def __eq__(self, other):
        if not isinstance(other, AssociativeArray):
            return NotImplemented
        return equal_within(self, other, 0.0)

    __hash__ = None

    def __add__(self, other):
        return elementwise_add(self, other)

    def __mul__(self, other):
        return elementwise_mul(self, other)

    def __matmul__(self, other):
        return array_multiply(self, other)

    @property
    def T(self):
        return transpose(self)

    def __repr__(self):
        return (f"AssociativeArray({self._sr.name}, shape={self.shape}, "
                f"nnz={self._nnz})")


def construct(triples: Iterable, semiring) -> AssociativeArray:
    """Build an array from (row, col, value) triples.

    Values at the same coordinate are folded with the semiring's add in
    stream order; zeros are then pruned.
    """
    sr = get_semiring(semiring)
    plus = sr.add
    acc: Dict[Key, Dict[Key, object]] = {}
    for i, t in enumerate(triples):
        try:
            r, c, v = t
            r, c = make_key(r), make_key(c)
            v = sr.coerce(v)
        except DomainError as e:
            raise DomainError(f"{e} (triple {i})") from None
        if v is TOP:
            raise DomainError(f"value outside semiring domain: TOP cannot be stored (triple {i})")
        row = acc.setdefault(r, {})
        row[c] = plus(row[c], v) if c in row else v
    return AssociativeArray(sr, _prune(acc, sr))


def _prune(data, sr):
    zero = sr.zero
    out = {}
    for r, row in data.items():
        kept = {c: v for c, v in row.items() if v != zero}
        if kept:
            out[r] = kept
    return out


def empty(semiring) -> AssociativeArray:
    return AssociativeArray(semiring)


def identity(keys: Iterable, semiring) -> AssociativeArray:
    sr = get_semiring(semiring)
    return construct(((k, k, sr.one) for k in keys), sr)


def lookup(A: AssociativeArray, r, c):
    row = A._data.get(r)
    if row is None:
        return A._sr.zero
    return row.get(c, A._sr.zero)


def _same_semiring(A, B) -> Semiring:
    if A._sr.name != B._sr.name:
        raise SemiringMismatchError(
            f"semiring mismatch: {A._sr.name} vs {B._sr.name}")
    return A._sr


def elementwise_add(A: AssociativeArray, B: AssociativeArray) -> AssociativeArray:
    sr = _same_semiring(A, B)
    plus = sr.add
    out = {r: dict(row) for r, row in A._data.items()}
    for r, brow in B._data.items():
        orow = out.setdefault(r, {})
        for c, v in brow.items():
            orow[c] = plus(orow[c], v) if c in orow else v
    return AssociativeArray(sr, _prune(out, sr))


def elementwise_mul(A: AssociativeArray, B: AssociativeArray) -> AssociativeArray:
    sr = _same_semiring(A, B)
    times = sr.mul
    out = {}
    for r, arow in A._data.items():
        brow = B._data.get(r)
        if brow is None:
            continue
        small, large = (arow, brow) if len(arow) <= len(brow) else (brow, arow)
        out[r] = {c: times(arow[c], brow[c]) for c in small if c in large}
    return AssociativeArray(sr, _prune(out, sr))


def array_multiply(A: AssociativeArray, B: AssociativeArray) -> AssociativeArray:
    """C(i,k) = add-fold over join keys j (ascending) of A(i,j) mul B(j,k)."""
    sr = _same_semiring(A, B)
    plus, times = sr.add, sr.mul
    bdata = B._data
    out = {}
    for i, arow in A._data.items():
        acc = {}
        # arow iterates in ascending key order, which fixes the fold order
        for j, a in arow.items():
            brow = bdata.get(j)
            if brow is None:
                continue
            for k, b in brow.items():
                p = times(a, b)
                acc[k] = plus(acc[k], p) if k in acc else p
        if acc:
            out[i] = acc
    return AssociativeArray(sr, _prune(out, sr))


def transpose(A: AssociativeArray) -> AssociativeArray:
    out: Dict[Key, Dict[Key, object]] = {}
    for r, row in A._data.items():
        for c, v in row.items():
            out.setdefault(c, {})[r] = v
    return AssociativeArray(A._sr, out)


def _check_range(rng):
    if rng is None:
        return None
    lo, hi = make_key(rng[0]), make_key(rng[1])
    lo_k, hi_k = key_order(lo), key_order(hi)
    if lo_k > hi_k:
        raise EmptyRangeError(f"empty-range: {lo!r} > {hi!r}")
    return lo_k, hi_k


def select(A: AssociativeArray, row_range=None, col_range=None) -> AssociativeArray:
    """Sub-array with row keys in ``row_range`` and column keys in ``col_range``.

    Ranges are closed ``(lo, hi)`` pairs under the key order; ``None`` means all.
    """
    rr, cr = _check_range(row_range), _check_range(col_range)
    out = {}
    for r, row in A._data.items():
        if rr is not None and not rr[0] <= key_order(r) <= rr[1]:
            continue
        if cr is None:
            out[r] = row
        else:
            out[r] = {c: v for c, v in row.items() if cr[0] <= key_order(c) <= cr[1]}
    return AssociativeArray(A._sr, out)


def to_triples(A: AssociativeArray) -> List[Triple]:
    return [Triple(r, c, v) for r, row in A._data.items() for c, v in row.items()]


def equal_within(A: AssociativeArray, B: AssociativeArray, rel_tol: float = 0.0) -> bool:
    if rel_tol < 0:
        raise ValueError("rel_tol must be >= 0")
    if A._sr.name != B._sr.name:
        return False
    if A._rows != B._rows or A._cols != B._cols or A._nnz != B._nnz:
        return False
    for r, arow in A._data.items():
        brow = B._data[r]
        if arow.keys() != brow.keys():
            return False
        for c, v in arow.items():
            if not values_equal(v, brow[c], rel_tol):
                return False
    return True


def validate(A: AssociativeArray) -> None:
    """Assert the minimal-form invariants; raises AssertionError on breakage."""
    sr = A._sr
    seen_cols = set()
    for r, row in A._data.items():
        assert row, f"row {r!r} has no entries"
        for c, v in row.items():
            assert not sr.is_zero(v), f"stored zero at {(r, c)!r}"
            assert v is not TOP, f"TOP stored at {(r, c)!r}"
            assert sr.coerce(v) == v, f"value outside domain at {(r, c)!r}"
            seen_cols.add(c)
    assert A._rows == sorted_keys(A._data), "row keys out of order"
    assert A._cols == sorted_keys(seen_cols), "column keys differ from support"

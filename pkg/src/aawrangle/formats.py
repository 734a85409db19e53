"""The ``#aa-triples v1`` triple file and the dense TSV view.

Triple file layout (UTF-8, LF line endings)::

    #aa-triples v1
    #semiring <name>
    #keys text                 (optional: every key reads back as text)
    row<TAB>col<TAB>value
    ...

Inside a field, backslash, TAB and LF are written as ``\\\\``, ``\\t`` and
``\\n``. A key starting with ``#`` and a text value starting with ``{`` get
that first character backslash-escaped so they cannot be mistaken for a
header line or a set. Sets are written ``{a,b}`` with elements sorted and
``,`` / ``}`` escaped inside elements.
"""
from __future__ import annotations

import io
import math
from typing import Iterable, List, Optional, Tuple

from .array import AssociativeArray, Triple, to_triples
from .errors import DenseTooLargeError, DomainError, FormatError, UnknownSemiringError
from .semiring import TOP, Semiring, format_number, get_semiring, looks_numeric

MAGIC = "#aa-triples v1"
KEYS_TEXT = "#keys text"
DENSE_LIMIT = 10 ** 6

_FIELD_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n"}
_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n", ",": ",", "}": "}", "{": "{", "#": "#"}


def escape_field(s: str) -> str:
    if "\\" in s or "\t" in s or "\n" in s:
        s = "".join(_FIELD_ESCAPES.get(ch, ch) for ch in s)
    return s


def unescape_field(s: str) -> str:
    if "\\" not in s:
        return s
    out = []
    i = 0
    while i < len(s):
        ch = s[i]
        if ch == "\\":
            if i + 1 >= len(s) or s[i + 1] not in _UNESCAPES:
                raise ValueError(f"bad escape sequence in {s!r}")
            out.append(_UNESCAPES[s[i + 1]])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def render_key(k) -> str:
    if isinstance(k, float):
        return format_number(k)
    s = escape_field(k)
    return "\\" + s if s.startswith("#") else s


def _escape_element(e: str) -> str:
    return escape_field(e).replace(",", "\\,").replace("}", "\\}")


def render_value(v) -> str:
    if isinstance(v, float):
        return format_number(v)
    if isinstance(v, str):
        s = escape_field(v)
        return "\\" + s if s.startswith("{") else s
    if isinstance(v, frozenset):
        return "{" + ",".join(_escape_element(e) for e in sorted(v)) + "}"
    if v is TOP:
        raise DomainError("TOP cannot be written")
    raise DomainError(f"cannot render value {v!r}")


def _parse_set(raw: str) -> frozenset:
    elems, cur, i, n = [], [], 1, len(raw)
    while i < n:
        ch = raw[i]
        if ch == "\\":
            cur.append(raw[i:i + 2])
            i += 2
        elif ch == ",":
            elems.append("".join(cur))
            cur = []
            i += 1
        elif ch == "}":
            if i != n - 1:
                raise ValueError(f"text after closing '}}' in {raw!r}")
            elems.append("".join(cur))
            return frozenset(unescape_field(e) for e in elems)
        else:
            cur.append(ch)
            i += 1
    raise ValueError(f"unterminated set {raw!r}")


def _key_header(triples: List[Triple]) -> bool:
    """True when ``#keys text`` is needed; raises if keys cannot round-trip."""
    lookalike = has_number = False
    for t in triples:
        for k in (t[0], t[1]):
            if isinstance(k, str):
                lookalike = lookalike or looks_numeric(k)
            else:
                has_number = True
        if lookalike and has_number:
            raise FormatError(
                "ambiguous keys: numeric-looking text keys mixed with number keys")
    return lookalike


def format_triple_stream(triples: Iterable, semiring) -> str:
    """Serialize triples as given (no aggregation, no reordering)."""
    sr = get_semiring(semiring)
    triples = list(triples)
    lines = [MAGIC, f"#semiring {sr.name}"]
    if _key_header(triples):
        lines.append(KEYS_TEXT)
    for r, c, v in triples:
        lines.append(f"{render_key(r)}\t{render_key(c)}\t{render_value(v)}")
    return "\n".join(lines) + "\n"


def format_triples(A: AssociativeArray) -> str:
    return format_triple_stream(to_triples(A), A.semiring)


def _write(sink, text: str):
    if isinstance(sink, io.TextIOBase):
        sink.write(text)
    else:
        sink.write(text.encode("utf-8"))


def write_triples(A: AssociativeArray, sink) -> None:
    _write(sink, format_triples(A))


def write_triple_stream(triples: Iterable, semiring, sink) -> None:
    _write(sink, format_triple_stream(triples, semiring))


def _read_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def _parse_key(raw: str, text_keys: bool, n: int):
    if not text_keys and looks_numeric(raw):
        k = float(raw)
        if not math.isfinite(k):
            raise FormatError(f"malformed line {n}: number key must be finite", n)
        return k + 0.0
    try:
        return unescape_field(raw)
    except ValueError as e:
        raise FormatError(f"malformed line {n}: {e}", n) from None


def _parse_value(raw: str, sr: Semiring, n: int):
    try:
        if sr.name == "union_intersection":
            v = _parse_set(raw) if raw.startswith("{") else unescape_field(raw)
        elif looks_numeric(raw):
            v = float(raw)
        else:
            raise DomainError(f"value outside semiring domain at line {n}: {raw!r}")
        return sr.coerce(v)
    except DomainError as e:
        raise DomainError(f"value outside semiring domain at line {n}: {raw!r}") from e
    except ValueError as e:
        raise FormatError(f"malformed line {n}: {e}", n) from None


def read_triples(source, semiring_override=None) -> Tuple[List[Triple], Semiring]:
    """Parse a triple file; returns ``(triples, semiring)``.

    ``semiring_override`` re-tags the data with another semiring; values are
    then validated against that semiring's domain.
    """
    lines = _read_text(source).split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != MAGIC:
        raise FormatError("bad header at line 1: missing '#aa-triples v1'", 1)
    if len(lines) < 2 or not lines[1].startswith("#semiring "):
        raise FormatError("bad header at line 2: missing '#semiring <name>'", 2)
    try:
        sr = get_semiring(lines[1][len("#semiring "):])
    except UnknownSemiringError as e:
        raise FormatError(f"bad header at line 2: {e}", 2) from None
    if semiring_override is not None:
        sr = get_semiring(semiring_override)

    text_keys = False
    triples = []
    for n, line in enumerate(lines[2:], start=3):
        if line.startswith("#"):
            if line == KEYS_TEXT and not text_keys and not triples:
                text_keys = True
                continue
            raise FormatError(f"bad header at line {n}: {line!r}", n)
        fields = line.split("\t")
        if len(fields) != 3:
            raise FormatError(f"malformed line {n}", n)
        r = _parse_key(fields[0], text_keys, n)
        c = _parse_key(fields[1], text_keys, n)
        triples.append(Triple(r, c, _parse_value(fields[2], sr, n)))
    return triples, sr


def format_dense(A: AssociativeArray) -> str:
    nrows, ncols = A.shape
    if nrows * ncols > DENSE_LIMIT:
        raise DenseTooLargeError(f"dense too large: {nrows}x{ncols} cells")
    lines = ["\t".join([""] + [render_key(c) for c in A.cols])]
    for r in A.rows:
        row = A.row(r)
        cells = [render_value(row[c]) if c in row else "" for c in A.cols]
        lines.append("\t".join([render_key(r)] + cells))
    return "\n".join(lines) + "\n"


def write_dense(A: AssociativeArray, sink) -> None:
    _write(sink, format_dense(A))

"""Flatten hierarchical JSON/XML documents into row/column/value triples.

Each record becomes one row. A leaf's column key is its path from the
record root, segments joined by the configured separator. Two array
encodings are available:

``positional``
    array elements (and repeated XML siblings) get a 0-based index
    segment; leaves keep their value.
``value_column``
    no index segments; every scalar leaf becomes the column
    ``path/<rendered value>`` holding the indicator value 1.
"""
from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from .array import Triple, make_key
from .errors import DenormalizeError, DocumentParseError
from .semiring import format_number, make_number

ARRAY_MODES = ("positional", "value_column")


@dataclass(frozen=True)
class DenormConfig:
    separator: str = "/"
    array_mode: str = "positional"
    record_selector: Optional[str] = None
    row_id_field: Optional[str] = None

    def __post_init__(self):
        if not self.separator:
            raise ValueError("separator must be non-empty")
        if "\\" in self.separator:
            raise ValueError("separator may not contain a backslash")
        if self.array_mode not in ARRAY_MODES:
            raise ValueError(f"array_mode must be one of {ARRAY_MODES}")


def escape_segment(seg: str, sep: str = "/") -> str:
    # escaping every occurrence of sep[0] keeps overlapping separators like "::" unambiguous
    head = sep[0]
    if "\\" not in seg and head not in seg:
        return seg
    return "".join("\\" + ch if ch == "\\" or ch == head else ch for ch in seg)


def join_path(segments: Sequence[str], sep: str = "/") -> str:
    return sep.join(escape_segment(s, sep) for s in segments)


def split_path(path: str, sep: str = "/") -> List[str]:
    """Inverse of :func:`join_path`."""
    segs, cur, i = [], [], 0
    while i < len(path):
        ch = path[i]
        if ch == "\\" and i + 1 < len(path):
            cur.append(path[i + 1])
            i += 2
        elif path.startswith(sep, i):
            segs.append("".join(cur))
            cur = []
            i += len(sep)
        else:
            cur.append(ch)
            i += 1
    segs.append("".join(cur))
    return segs


# -- parsing -----------------------------------------------------------------

def _reject_constant(name):
    raise ValueError(f"non-standard JSON constant {name}")


def parse_json(text):
    if isinstance(text, bytes):
        text = text.decode("utf-8-sig")
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise DocumentParseError(
            f"JSON parse error at line {e.lineno}, column {e.colno}: {e.msg}",
            e.lineno, e.colno) from None
    except ValueError as e:
        raise DocumentParseError(f"JSON parse error: {e}") from None


def parse_xml(text) -> ET.Element:
    try:
        root = ET.fromstring(text)
    except ET.ParseError as e:
        line, col = e.position
        if "unbound prefix" in str(e):
            raise DenormalizeError("namespaces unsupported") from None
        raise DocumentParseError(
            f"XML parse error at line {line}, column {col + 1}: {e}", line, col + 1
        ) from None
    for el in root.iter():
        if el.tag.startswith("{") or any(a.startswith("{") for a in el.attrib):
            raise DenormalizeError("namespaces unsupported")
    return root


# -- leaf enumeration ----------------------------------------------------------

Leaf = Tuple[Tuple[str, ...], object]


def _json_scalar(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        try:
            return make_number(v)
        except OverflowError:
            raise DenormalizeError(f"number out of range: {v}") from None
    return v


def _json_leaves(node, path: Tuple[str, ...], positional: bool) -> Iterator[Leaf]:
    if isinstance(node, dict):
        for k, v in node.items():
            yield from _json_leaves(v, path + (k,), positional)
    elif isinstance(node, list):
        for i, v in enumerate(node):
            yield from _json_leaves(v, path + (str(i),) if positional else path, positional)
    elif node is not None:
        yield path, _json_scalar(node)


def _xml_leaves(el: ET.Element, path: Tuple[str, ...], positional: bool) -> Iterator[Leaf]:
    for name, val in el.attrib.items():
        yield path + ("@" + name,), val
    text = "".join([el.text or ""] + [c.tail or "" for c in el]).strip()
    if text:
        yield path, text
    counts = Counter(c.tag for c in el)
    seen = Counter()
    for child in el:
        tag = child.tag
        if positional and counts[tag] > 1:
            sub = path + (tag, str(seen[tag]))
            seen[tag] += 1
        else:
            sub = path + (tag,)
        yield from _xml_leaves(child, sub, positional)


def _render(v) -> str:
    return format_number(v) if isinstance(v, float) else v


# -- record selection ----------------------------------------------------------

def _json_records(doc, cfg: DenormConfig) -> list:
    if cfg.record_selector is None:
        return doc if isinstance(doc, list) else [doc]
    node = doc
    for seg in split_path(cfg.record_selector, cfg.separator):
        if isinstance(node, dict) and seg in node:
            node = node[seg]
        elif isinstance(node, list) and seg.isdigit() and int(seg) < len(node):
            node = node[int(seg)]
        else:
            raise DenormalizeError(f"no records found at {cfg.record_selector!r}")
    if node is None:
        raise DenormalizeError(f"no records found at {cfg.record_selector!r}")
    return node if isinstance(node, list) else [node]


def _xml_records(root: ET.Element, cfg: DenormConfig) -> list:
    node = root
    if cfg.record_selector is not None:
        for seg in split_path(cfg.record_selector, cfg.separator):
            node = node.find(seg) if seg and not set(seg) & set("[]*./@") else None
            if node is None:
                raise DenormalizeError(f"no records found at {cfg.record_selector!r}")
    return list(node)


# -- flattening ----------------------------------------------------------------

def _emit(records, leaves_of, cfg: DenormConfig) -> List[Triple]:
    sep = cfg.separator
    positional = cfg.array_mode == "positional"
    out: List[Triple] = []
    for n, rec in enumerate(records, start=1):
        leaves = list(leaves_of(rec, positional))
        if cfg.row_id_field is None:
            row = float(n)
        else:
            row = None
            for segs, v in leaves:
                if join_path(segs, sep) == cfg.row_id_field:
                    row = make_key(v)
                    break
            if row is None:
                raise DenormalizeError(
                    f"missing row id {cfg.row_id_field!r} in record {n}")
        if positional:
            out.extend(Triple(row, join_path(segs, sep), v) for segs, v in leaves)
        else:
            out.extend(Triple(row, join_path(segs + (_render(v),), sep), 1.0)
                       for segs, v in leaves)
    return out


def denormalize(doc, cfg: Optional[DenormConfig] = None, kind: str = "json"):
    """Flatten ``doc`` and return ``(triples, record_count)``.

    ``doc`` may be a parsed document (JSON value or XML Element) or raw
    text/bytes, which is parsed according to ``kind``.
    """
    cfg = cfg or DenormConfig()
    if kind == "json":
        if isinstance(doc, (str, bytes)):
            doc = parse_json(doc)
        records = _json_records(doc, cfg)
        leaves_of = lambda rec, pos: _json_leaves(rec, (), pos)  # noqa: E731
    elif kind == "xml":
        if isinstance(doc, (str, bytes)):
            doc = parse_xml(doc)
        records = _xml_records(doc, cfg)
        leaves_of = lambda rec, pos: _xml_leaves(rec, (rec.tag,), pos)  # noqa: E731
    else:
        raise ValueError(f"unknown document kind {kind!r}")
    return _emit(records, leaves_of, cfg), len(records)


def flatten_json(doc, cfg: Optional[DenormConfig] = None) -> List[Triple]:
    return denormalize(doc, cfg, "json")[0]


def flatten_xml(doc, cfg: Optional[DenormConfig] = None) -> List[Triple]:
    return denormalize(doc, cfg, "xml")[0]

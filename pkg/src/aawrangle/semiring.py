"""Values and the built-in semirings (V, add, mul, zero, one).

Values are plain Python objects:

* Number  -> ``float`` (ints are accepted and widened; NaN is rejected)
* Text    -> ``str``
* TextSet -> ``frozenset`` of ``str``
* Top     -> the :data:`TOP` sentinel, the multiplicative identity of
  ``union_intersection``; it is never stored in an array.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, List, NamedTuple

from .errors import DomainError, UnknownSemiringError

INF = math.inf

# decimal or inf literal; the same grammar decides NumberKey vs TextKey on read
NUMBER_RE = re.compile(
    r"[+-]?(?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|inf)\Z"
)

REL_TOL = 1e-9
ABS_FLOOR = 1e-12


class _Top:
    __slots__ = ()

    def __repr__(self):
        return "TOP"

    def __reduce__(self):
        return "TOP"


TOP = _Top()


def make_number(x) -> float:
    """Widen ``x`` to a float Number, rejecting NaN and non-numbers."""
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise DomainError(f"not a number: {x!r}")
    x = float(x)
    if math.isnan(x):
        raise DomainError("NaN is not a legal value")
    return x


def format_number(x: float) -> str:
    """Shortest round-trip decimal, with integral values written without ``.0``."""
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    s = repr(float(x))
    if s.endswith(".0"):
        s = s[:-2]
    return s


def looks_numeric(s: str) -> bool:
    return NUMBER_RE.match(s) is not None


def values_equal(x, y, rel_tol: float = 0.0) -> bool:
    """Compare two values; finite floats use ``rel_tol`` (floor 1e-12) when it is positive."""
    if isinstance(x, float) and isinstance(y, float):
        if x == y:
            return True
        if rel_tol == 0 or math.isinf(x) or math.isinf(y):
            return False
        return math.isclose(x, y, rel_tol=rel_tol, abs_tol=ABS_FLOOR)
    return type(x) is type(y) and x == y


# -- domain coercers ---------------------------------------------------------

def _num(v) -> float:
    try:
        return make_number(v)
    except DomainError as e:
        raise DomainError(f"value outside semiring domain: {e}") from None


def _number_in(lo: float, hi: float):
    def coerce(v):
        x = _num(v)
        if lo <= x <= hi:
            return x
        raise DomainError(f"value outside semiring domain: {v!r}")
    return coerce


def _finite_number(v):
    x = _num(v)
    if math.isinf(x):
        raise DomainError(f"value outside semiring domain: {v!r}")
    return x


def _text_set(v):
    if v is TOP:
        return TOP
    if isinstance(v, str):
        return frozenset((v,))
    if isinstance(v, (set, frozenset)):
        if not all(isinstance(e, str) for e in v):
            raise DomainError(f"value outside semiring domain: {v!r}")
        return frozenset(v)
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return frozenset((format_number(make_number(v)),))
    raise DomainError(f"value outside semiring domain: {v!r}")


# -- raw operations on already-coerced values -------------------------------

def _max_plus_mul(a, b):
    if a == -INF or b == -INF:
        return -INF
    return a + b


def _min_plus_mul(a, b):
    if a == INF or b == INF:
        return INF
    return a + b


def _max_times_mul(a, b):
    if a == 0 or b == 0:
        return 0.0
    return a * b


def _min_times_mul(a, b):
    if a == INF or b == INF:
        return INF
    return a * b


def _set_add(a, b):
    if a is TOP or b is TOP:
        return TOP
    return a | b


def _set_mul(a, b):
    if a is TOP:
        return b
    if b is TOP:
        return a
    return a & b


@dataclass(frozen=True)
class Semiring:
    """A named (add, mul, zero, one) bundle.

    ``add`` and ``mul`` operate on values already accepted by ``coerce``;
    use the module-level :func:`add` / :func:`mul` for checked calls.
    ``tolerance`` is the relative tolerance used when comparing results.
    """

    name: str
    add: Callable[[Any, Any], Any] = field(repr=False)
    mul: Callable[[Any, Any], Any] = field(repr=False)
    zero: Any
    one: Any
    coerce: Callable[[Any], Any] = field(repr=False)
    tolerance: float = 0.0

    def is_zero(self, v) -> bool:
        return v == self.zero


_BUILTINS = {
    "plus_times": Semiring(
        "plus_times", lambda a, b: a + b, lambda a, b: a * b, 0.0, 1.0,
        _finite_number, tolerance=REL_TOL),
    "max_plus": Semiring(
        "max_plus", max, _max_plus_mul, -INF, 0.0, _number_in(-INF, INF)),
    "min_plus": Semiring(
        "min_plus", min, _min_plus_mul, INF, 0.0, _number_in(-INF, INF)),
    "max_times": Semiring(
        "max_times", max, _max_times_mul, 0.0, 1.0, _number_in(0.0, INF)),
    "min_times": Semiring(
        "min_times", min, _min_times_mul, INF, 1.0, _number_in(0.0, INF)),
    "max_min": Semiring(
        "max_min", max, min, 0.0, INF, _number_in(0.0, INF)),
    "min_max": Semiring(
        "min_max", min, max, INF, 0.0, _number_in(0.0, INF)),
    "union_intersection": Semiring(
        "union_intersection", _set_add, _set_mul, frozenset(), TOP, _text_set),
}

SEMIRING_NAMES = tuple(_BUILTINS)


def get_semiring(name) -> Semiring:
    if isinstance(name, Semiring):
        return name
    try:
        return _BUILTINS[name]
    except (KeyError, TypeError):
        raise UnknownSemiringError(
            f"unknown semiring {name!r}; valid names: {', '.join(SEMIRING_NAMES)}"
        ) from None


def add(sr: Semiring, a, b):
    return sr.add(sr.coerce(a), sr.coerce(b))


def mul(sr: Semiring, a, b):
    return sr.mul(sr.coerce(a), sr.coerce(b))


def is_zero(sr: Semiring, v) -> bool:
    return sr.is_zero(sr.coerce(v))


class Violation(NamedTuple):
    identity: str
    witness: tuple


@dataclass
class AxiomReport:
    semiring: str
    checked: int = 0
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self):
        lines = [f"{self.semiring}: {self.checked} instances, "
                 f"{len(self.violations)} violations"]
        lines += [f"  {v.identity} at {v.witness!r}" for v in self.violations]
        return "\n".join(lines)


def check_axioms(sr: Semiring, samples: Iterable) -> AxiomReport:
    """Check every semiring identity over all sample pairs and triples.

    Each violated identity is reported once per distinct witness.
    """
    vals = [sr.coerce(s) for s in samples]
    if not vals:
        raise ValueError("no samples")
    plus, times, zero, one = sr.add, sr.mul, sr.zero, sr.one

    def eq(x, y):
        return values_equal(x, y, sr.tolerance)

    report = AxiomReport(sr.name)

    def check(identity, holds, witness):
        report.checked += 1
        if not holds:
            report.violations.append(Violation(identity, witness))

    for a in vals:
        check("add_identity", eq(plus(a, zero), a) and eq(plus(zero, a), a), (a,))
        check("mul_identity", eq(times(a, one), a) and eq(times(one, a), a), (a,))
        check("mul_annihilator",
              eq(times(a, zero), zero) and eq(times(zero, a), zero), (a,))
    for a, b in itertools.product(vals, repeat=2):
        check("add_commutativity", eq(plus(a, b), plus(b, a)), (a, b))
    for a, b, c in itertools.product(vals, repeat=3):
        check("add_associativity",
              eq(plus(plus(a, b), c), plus(a, plus(b, c))), (a, b, c))
        check("mul_associativity",
              eq(times(times(a, b), c), times(a, times(b, c))), (a, b, c))
        check("left_distributivity",
              eq(times(a, plus(b, c)), plus(times(a, b), times(a, c))), (a, b, c))
        check("right_distributivity",
              eq(times(plus(b, c), a), plus(times(b, a), times(c, a))), (a, b, c))
    return report

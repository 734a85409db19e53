"""Sparse associative arrays over semirings, with JSON/XML denormalization,
pivot tables and a triple-file CLI."""
from .array import (AssociativeArray, Key, Triple, array_multiply, construct,
                    elementwise_add, elementwise_mul, empty, equal_within,
                    identity, lookup, make_key, select, to_triples, transpose)
from .denormalize import DenormConfig, denormalize, flatten_json, flatten_xml
from .errors import (AAError, DenseTooLargeError, DenormalizeError,
                     DocumentParseError, DomainError, EmptyRangeError,
                     FormatError, PivotError, SemiringMismatchError,
                     UnknownSemiringError)
from .formats import (format_dense, format_triples, read_triples, write_dense,
                      write_triple_stream, write_triples)
from .pivot import PivotResult, PivotSpec, co_occurrence, pivot, to_indicators
from .semiring import (SEMIRING_NAMES, TOP, AxiomReport, Semiring, add,
                       check_axioms, get_semiring, is_zero, make_number, mul)

__version__ = "0.1.0"

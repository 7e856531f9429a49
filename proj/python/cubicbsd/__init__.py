"""Mod-3 BSD congruences and 2-Selmer data for x^3 + y^3 = 2^i p^j, p = 2, 5 (mod 9)."""

import json

from ._core import (
    SCHEMA_VERSION,
    ConsistencyFailure,
    DomainError,
    Error,
    NeedsMoreEffort,
    ParseError,
    PrecisionExhausted,
    RecognitionFailure,
    UnsupportedPrime,
    class_group,
    congruence,
    cubic_residue_symbol,
    family_primes,
    is_family_prime,
    lvalue,
    omega,
    oracle_lvalue,
    roundtrip,
    sel2_dimension,
    selmer,
)
from ._core import record as record_line


def record(p, precision_bits=256, congruence_max=500):
    """Result record for p as a dict."""
    return json.loads(record_line(p, precision_bits, congruence_max))


__all__ = [
    "SCHEMA_VERSION",
    "ConsistencyFailure",
    "DomainError",
    "Error",
    "NeedsMoreEffort",
    "ParseError",
    "PrecisionExhausted",
    "RecognitionFailure",
    "UnsupportedPrime",
    "class_group",
    "congruence",
    "cubic_residue_symbol",
    "family_primes",
    "is_family_prime",
    "lvalue",
    "omega",
    "oracle_lvalue",
    "record",
    "record_line",
    "roundtrip",
    "sel2_dimension",
    "selmer",
]

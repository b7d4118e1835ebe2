"""The space and certificate file formats.

A space document is JSON with the fields

    {"labels": [...strings...],
     "dist":   [[...numbers...], ...],
     "mass":   [...numbers...]}        # optional

and nothing else.  Numbers are either JSON numbers, read exactly as the
decimal literal they are written as, or strings holding a decimal ("0.25")
or a ratio ("1/3").  Serialization writes a rational as a plain decimal
whenever it has one (denominator 2^a * 5^b) and as a "p/q" string otherwise,
so documents round-trip losslessly and byte-identically.

Mass vectors are renormalized exactly at load time when their sum is off by
at most the ingestion tolerance (file rounding); larger deviations are left
as-is for ``validate`` to report.

A certificate document carries a claimed upper bound for the box distance
between two spaces:

    {"pi": [[...numbers...], ...],
     "S": [[i, j], ...],
     "claimed_value": number}

The checker recomputes max(1 - pi(S), dis S) on the two spaces and compares
it with the claimed value.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Sequence

from .core import (
    MASS_TOLERANCE,
    ZERO,
    Coupling,
    FiniteMetricSpace,
    FiniteMMSpace,
    Relation,
    to_fraction,
)

SPACE_FIELDS = {"labels", "dist", "mass"}
CERT_FIELDS = {"pi", "S", "claimed_value"}


class FormatError(ValueError):
    """A document does not follow the file grammar."""


def has_finite_decimal(q: Fraction) -> bool:
    d = q.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    return d == 1


def decimal_string(q: Fraction) -> str:
    """Exact decimal rendering of a rational with denominator 2^a * 5^b."""
    if q.denominator == 1:
        return str(q.numerator)
    sign = "-" if q < 0 else ""
    den = q.denominator
    k = 0
    while den % 2 == 0:
        den //= 2
        k += 1
    j = 0
    while den % 5 == 0:
        den //= 5
        j += 1
    if den != 1:
        raise ValueError(f"{q} has no finite decimal expansion")
    k = max(k, j)
    digits = str(abs(q.numerator) * 10**k // q.denominator).rjust(k + 1, "0")
    return f"{sign}{digits[:-k]}.{digits[-k:]}"


def number_token(q: Fraction) -> str:
    """JSON token for a rational: bare decimal if finite, quoted p/q otherwise."""
    if has_finite_decimal(q):
        return decimal_string(q)
    return f'"{q.numerator}/{q.denominator}"'


def _parse_number(v) -> Fraction:
    if isinstance(v, (int, Fraction)):
        return to_fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad number string {v!r}") from exc
    raise FormatError(f"expected a number, got {type(v).__name__}")


def _parse_json(text: str) -> dict:
    try:
        doc = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise FormatError("document must be a JSON object")
    return doc


def loads_space(text: str) -> FiniteMetricSpace | FiniteMMSpace:
    """Parse a space document.  Grammar errors raise; invariant violations don't."""
    doc = _parse_json(text)
    unknown = set(doc) - SPACE_FIELDS
    if unknown:
        raise FormatError(f"unknown fields: {sorted(unknown)}")
    if "labels" not in doc or "dist" not in doc:
        raise FormatError("a space document needs 'labels' and 'dist'")
    labels = doc["labels"]
    if not isinstance(labels, list) or not all(isinstance(l, str) for l in labels):
        raise FormatError("'labels' must be an array of strings")
    dist = doc["dist"]
    if not isinstance(dist, list) or not all(isinstance(r, list) for r in dist):
        raise FormatError("'dist' must be an array of arrays")
    rows = tuple(tuple(_parse_number(v) for v in row) for row in dist)
    space = FiniteMetricSpace(tuple(labels), rows)
    if "mass" not in doc:
        return space
    raw_mass = doc["mass"]
    if not isinstance(raw_mass, list):
        raise FormatError("'mass' must be an array")
    mass = [_parse_number(v) for v in raw_mass]
    total = sum(mass, ZERO)
    if total != 1 and total > 0 and abs(total - 1) <= MASS_TOLERANCE:
        mass = [v / total for v in mass]  # exact renormalization of rounded files
    return FiniteMMSpace(space, tuple(mass))


def load_space(path) -> FiniteMetricSpace | FiniteMMSpace:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_space(fh.read())


def _row_tokens(row: Sequence[Fraction]) -> str:
    return "[" + ", ".join(number_token(v) for v in row) + "]"


def dumps_space(space: FiniteMetricSpace | FiniteMMSpace) -> str:
    """Serialize a space document deterministically (byte-stable)."""
    if isinstance(space, FiniteMMSpace):
        plain, mass = space.space, space.mass
    else:
        plain, mass = space, None
    lines = ["{"]
    lines.append(
        '  "labels": [' + ", ".join(json.dumps(l) for l in plain.labels) + "],"
    )
    dist_rows = ",\n".join("    " + _row_tokens(r) for r in plain.dist)
    closing = "  ]," if mass is not None else "  ]"
    lines.append('  "dist": [\n' + dist_rows + "\n" + closing)
    if mass is not None:
        lines.append('  "mass": ' + _row_tokens(mass))
    lines.append("}")
    return "\n".join(lines) + "\n"


def dump_space(space: FiniteMetricSpace | FiniteMMSpace, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_space(space))


def loads_certificate(text: str) -> tuple[Coupling, Relation, Fraction]:
    doc = _parse_json(text)
    unknown = set(doc) - CERT_FIELDS
    if unknown:
        raise FormatError(f"unknown fields: {sorted(unknown)}")
    missing = CERT_FIELDS - set(doc)
    if missing:
        raise FormatError(f"missing fields: {sorted(missing)}")
    pi = doc["pi"]
    if not isinstance(pi, list) or not all(isinstance(r, list) for r in pi):
        raise FormatError("'pi' must be an array of arrays")
    coupling = Coupling(tuple(tuple(_parse_number(v) for v in row) for row in pi))
    pairs = doc["S"]
    if not isinstance(pairs, list) or not all(
        isinstance(p, list) and len(p) == 2 and all(isinstance(k, int) for k in p)
        for p in pairs
    ):
        raise FormatError("'S' must be an array of [i, j] index pairs")
    rel = Relation.from_pairs((p[0], p[1]) for p in pairs)
    claimed = _parse_number(doc["claimed_value"])
    return coupling, rel, claimed


def load_certificate(path) -> tuple[Coupling, Relation, Fraction]:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_certificate(fh.read())


def dumps_certificate(pi: Coupling, rel: Relation, claimed_value: Fraction) -> str:
    lines = ["{"]
    pi_rows = ",\n".join("    " + _row_tokens(r) for r in pi.pi)
    lines.append('  "pi": [\n' + pi_rows + "\n  ],")
    pair_tokens = ", ".join(f"[{i}, {j}]" for i, j in rel.sorted_pairs())
    lines.append(f'  "S": [{pair_tokens}],')
    lines.append(f'  "claimed_value": {number_token(claimed_value)}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def dump_certificate(pi: Coupling, rel: Relation, claimed_value: Fraction, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_certificate(pi, rel, claimed_value))

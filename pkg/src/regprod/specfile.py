"""Minimal line-based `key = value` sequence description files.

Comments start with `#`, blank lines are ignored, every other line must be
`key = value`.  The `kind` key selects which other keys are required:

    kind = lucas_u | lucas_v   ->  P, Q              (integers)
    kind = geometric           ->  growth_ratio, amplitude
    kind = table               ->  growth_ratio, amplitude, correction_K,
                                   correction_rho, terms (>= 8 whitespace-
                                   separated decimal strings)

`name` is always required.  Unknown or duplicate keys are errors, numeric
values must be plain decimal strings (no locale, no inf/nan), and table terms
are checked against the declared correction envelope before a spec is
returned.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict

from .errors import (
    BoundViolationError,
    InvalidSequenceError,
    NonpositiveTermError,
    SpecFileError,
)
from .sequences import (
    LucasParams,
    SequenceSpec,
    geometric_spec,
    lucas_family_spec,
    table_spec,
)

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.-]*$")
_INT_RE = re.compile(r"^[+-]?\d+$")
_DECIMAL_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")

_KIND_KEYS = {
    "lucas_u": ("P", "Q"),
    "lucas_v": ("P", "Q"),
    "geometric": ("growth_ratio", "amplitude"),
    "table": ("growth_ratio", "amplitude", "correction_K", "correction_rho", "terms"),
}


def is_plain_decimal(value: str) -> bool:
    """True for plain signed decimal numerals with optional exponent
    (no locale separators, no inf/nan, no hex)."""
    return bool(_DECIMAL_RE.match(value))


@dataclass(frozen=True)
class SequenceSpecFile:
    """Parsed but not yet validated description file."""

    path: str
    name: str
    kind: str
    fields: Dict[str, str]
    lines: Dict[str, int]

    def line_of(self, key: str) -> int:
        return self.lines.get(key, 0)


def read_spec_file(path: str) -> SequenceSpecFile:
    """Tokenize a description file into key/value pairs with line numbers."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw_lines = handle.readlines()
    except OSError as exc:
        raise SpecFileError(str(path), 0, "cannot read file: %s" % exc)
    fields: Dict[str, str] = {}
    lines: Dict[str, int] = {}
    for lineno, raw in enumerate(raw_lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise SpecFileError(str(path), lineno, "expected `key = value`, got %r" % line)
        key = key.strip()
        value = value.strip()
        if not key:
            raise SpecFileError(str(path), lineno, "missing key before `=`")
        if not value:
            raise SpecFileError(str(path), lineno, "missing value for key %r" % key)
        if key in fields:
            raise SpecFileError(str(path), lineno, "duplicate key %r" % key)
        fields[key] = value
        lines[key] = lineno
    kind = fields.get("kind")
    if kind is None:
        raise SpecFileError(str(path), 0, "missing required key 'kind'")
    if kind not in _KIND_KEYS:
        raise SpecFileError(str(path), lines["kind"],
                            "unknown kind %r (expected one of %s)"
                            % (kind, ", ".join(sorted(_KIND_KEYS))))
    name = fields.get("name")
    if name is None:
        raise SpecFileError(str(path), 0, "missing required key 'name'")
    if not _NAME_RE.match(name):
        raise SpecFileError(str(path), lines["name"], "invalid name %r" % name)
    required = _KIND_KEYS[kind]
    allowed = set(required) | {"name", "kind"}
    for key in fields:
        if key not in allowed:
            raise SpecFileError(str(path), lines[key],
                                "unknown key %r for kind %r" % (key, kind))
    for key in required:
        if key not in fields:
            raise SpecFileError(str(path), 0,
                                "kind %r requires key %r" % (kind, key))
    return SequenceSpecFile(path=str(path), name=name, kind=kind,
                            fields=fields, lines=lines)


def _parse_int(doc: SequenceSpecFile, key: str) -> int:
    value = doc.fields[key]
    if not _INT_RE.match(value):
        raise SpecFileError(doc.path, doc.line_of(key),
                            "%s must be an integer, got %r" % (key, value))
    return int(value)


def _check_decimal(doc: SequenceSpecFile, key: str, value: str, what: str) -> str:
    if not _DECIMAL_RE.match(value):
        raise SpecFileError(doc.path, doc.line_of(key),
                            "%s must be a decimal number, got %r" % (what, value))
    return value


def build_sequence(doc: SequenceSpecFile) -> SequenceSpec:
    """Construct and validate the SequenceSpec a description file declares."""
    if doc.kind in ("lucas_u", "lucas_v"):
        p = _parse_int(doc, "P")
        q = _parse_int(doc, "Q")
        variant = "U" if doc.kind == "lucas_u" else "V"
        try:
            return lucas_family_spec(LucasParams(p, q, variant), name=doc.name)
        except InvalidSequenceError as exc:
            raise SpecFileError(doc.path, doc.line_of("kind"), str(exc))
    if doc.kind == "geometric":
        ratio = _check_decimal(doc, "growth_ratio", doc.fields["growth_ratio"],
                               "growth_ratio")
        amplitude = _check_decimal(doc, "amplitude", doc.fields["amplitude"],
                                   "amplitude")
        try:
            return geometric_spec(ratio, amplitude, name=doc.name)
        except InvalidSequenceError as exc:
            key = "growth_ratio" if "growth ratio" in str(exc) else "amplitude"
            raise SpecFileError(doc.path, doc.line_of(key), str(exc))
    # table kind
    ratio = _check_decimal(doc, "growth_ratio", doc.fields["growth_ratio"],
                           "growth_ratio")
    amplitude = _check_decimal(doc, "amplitude", doc.fields["amplitude"],
                               "amplitude")
    bound_k = _check_decimal(doc, "correction_K", doc.fields["correction_K"],
                             "correction_K")
    bound_rho = _check_decimal(doc, "correction_rho", doc.fields["correction_rho"],
                               "correction_rho")
    terms = doc.fields["terms"].split()
    if len(terms) < 8:
        raise SpecFileError(doc.path, doc.line_of("terms"),
                            "table kind requires at least 8 terms, got %d" % len(terms))
    for index, term in enumerate(terms, start=1):
        _check_decimal(doc, "terms", term, "term %d" % index)
    try:
        return table_spec(doc.name, terms, ratio, amplitude, bound_k, bound_rho)
    except (BoundViolationError, NonpositiveTermError) as exc:
        raise SpecFileError(doc.path, doc.line_of("terms"), str(exc))
    except InvalidSequenceError as exc:
        key = "growth_ratio" if "growth ratio" in str(exc) else (
            "correction_rho" if "rho" in str(exc) else (
                "correction_K" if "K" in str(exc) else "amplitude"))
        raise SpecFileError(doc.path, doc.line_of(key), str(exc))


def parse_spec_file(path: str) -> SequenceSpec:
    """Read, parse, and validate a description file in one step."""
    return build_sequence(read_spec_file(path))

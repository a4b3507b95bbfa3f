"""Family description documents.

A document is a flat list of ``key = value`` lines; blank lines and lines
starting with ``#`` are ignored. Keys:

    variables = x, y              (required)
    parameter = t                 (default t)
    f = x^4 + y^4 + t*x^2*y^2     (required)
    b_order = 8
    order = grevlex               (grevlex or grlex)
    samples = 0, 1, 3             (rationals such as 1/2 allowed)
    checks = mu_probe, g_equals_e

Variables are listed most significant first.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from abmod.config.analysis_config import AVAILABLE_CHECKS
from abmod.core.errors import FamilyParseError
from abmod.core.exact_algebra import MONOMIAL_ORDERS, MonomialOrder, polynomial_ring, render_rational
from abmod.utils.polynomial_parser import parse_polynomial

SCHEMA_KEYS = ("variables", "parameter", "f", "b_order", "order", "samples", "checks")
IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")
DEFAULTS = {
    "parameter": "t",
    "b_order": 8,
    "order": "grevlex",
    "samples": (0, 1, 3),
    "checks": AVAILABLE_CHECKS,
}


@dataclass(frozen=True)
class FamilySpec:
    """A validated family: f(x, t) in the listed variables and the analysis options."""

    variables: tuple
    f: str
    parameter: str = "t"
    b_order: int = 8
    order: str = "grevlex"
    samples: tuple = (Fraction(0), Fraction(1), Fraction(3))
    checks: tuple = AVAILABLE_CHECKS

    def poly_ring(self):
        return polynomial_ring(list(self.variables), self.parameter, MonomialOrder(self.order))

    def polynomial(self):
        return parse_polynomial(self.f, self.poly_ring())

    def replace(self, **changes):
        """A copy with some options overridden; ``None`` values are ignored."""
        values = {key: getattr(self, key) for key in SCHEMA_KEYS}
        values.update({key: value for key, value in changes.items() if value is not None})
        return build_spec(values)

    def to_dict(self):
        return {
            "variables": list(self.variables),
            "parameter": self.parameter,
            "f": self.f,
            "b_order": self.b_order,
            "order": self.order,
            "samples": [render_rational(sample) for sample in self.samples],
            "checks": list(self.checks),
        }


def _split_list(value):
    return [item.strip() for item in value.split(",") if item.strip()]


def build_spec(values, lines=None, f_column=1, defaults=None):
    """
    Validate raw values and build a FamilySpec.

    Args:
        values (dict): Schema keys to values (strings or already typed values)
        lines (dict): Schema keys to source line numbers, for error positions
        f_column (int): Column where the value of f starts on its line
        defaults (dict): Option values used where ``values`` has none

    Returns:
        FamilySpec: The validated spec

    Raises:
        FamilyParseError: on a missing key, a bad value, or a parameter clash
    """
    lines = lines or {}

    def fail(key, message, column=1):
        line = lines.get(key)
        raise FamilyParseError(message, line, column if line else None)

    for key in ("variables", "f"):
        if key not in values:
            fail(key, f"missing required key '{key}'")

    merged = dict(DEFAULTS)
    merged.update({key: value for key, value in (defaults or {}).items() if key in DEFAULTS})
    merged.update(values)

    variables = merged["variables"]
    if isinstance(variables, str):
        variables = _split_list(variables)
    variables = tuple(variables)
    if not variables:
        fail("variables", "at least one variable is required")
    for name in variables:
        if not IDENTIFIER.match(name):
            fail("variables", f"'{name}' is not a valid identifier")
    if len(set(variables)) != len(variables):
        fail("variables", "variables must be distinct")

    parameter = str(merged["parameter"]).strip()
    if not IDENTIFIER.match(parameter):
        fail("parameter", f"'{parameter}' is not a valid identifier")
    if parameter in variables:
        fail("variables", f"the parameter '{parameter}' is also listed as a variable")

    try:
        b_order = int(merged["b_order"])
    except (TypeError, ValueError):
        fail("b_order", f"b_order must be an integer, got '{merged['b_order']}'")
    if b_order < 2:
        fail("b_order", "b_order must be at least 2")

    order = str(merged["order"]).strip()
    if order not in MONOMIAL_ORDERS:
        fail("order", f"unknown order '{order}' (use grevlex or grlex)")

    samples = merged["samples"]
    if isinstance(samples, str):
        samples = _split_list(samples)
    try:
        samples = tuple(Fraction(sample) for sample in samples)
    except (TypeError, ValueError, ZeroDivisionError):
        fail("samples", "samples must be rational numbers such as 0, 1 or 1/2")

    checks = merged["checks"]
    if isinstance(checks, str):
        checks = _split_list(checks)
    checks = tuple(checks)
    for check in checks:
        if check not in AVAILABLE_CHECKS:
            fail("checks", f"unknown check '{check}' (available: {', '.join(AVAILABLE_CHECKS)})")

    f_text = str(merged["f"]).strip()
    spec = FamilySpec(
        variables=variables,
        f=" ".join(f_text.split()),
        parameter=parameter,
        b_order=b_order,
        order=order,
        samples=samples,
        checks=checks,
    )
    parse_polynomial(f_text, spec.poly_ring(), line=lines.get("f", 1), column_offset=f_column - 1)
    return spec


def parse_family(text, defaults=None):
    """
    Parse a family document.

    Args:
        text (bytes|str): The document, UTF-8 when given as bytes
        defaults (dict): Option values for keys the document leaves out

    Returns:
        FamilySpec: The validated spec

    Raises:
        FamilyParseError: with the line and column of the problem
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FamilyParseError(f"document is not valid UTF-8: {exc}") from None

    values = {}
    lines = {}
    f_column = 1
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in raw:
            raise FamilyParseError("expected 'key = value'", number, len(raw) - len(raw.lstrip()) + 1)
        key, value = raw.split("=", 1)
        name = key.strip()
        if name not in SCHEMA_KEYS:
            raise FamilyParseError(f"unknown key '{name}'", number, len(key) - len(key.lstrip()) + 1)
        if name in values:
            raise FamilyParseError(f"duplicate key '{name}'", number, len(key) - len(key.lstrip()) + 1)
        values[name] = value.strip()
        lines[name] = number
        if name == "f":
            f_column = len(key) + 2 + len(value) - len(value.lstrip())

    return build_spec(values, lines, f_column, defaults)


def serialize(spec):
    """Render a FamilySpec as a document that parses back to an equal spec."""
    rows = [
        f"variables = {', '.join(spec.variables)}",
        f"parameter = {spec.parameter}",
        f"f = {spec.f}",
        f"b_order = {spec.b_order}",
        f"order = {spec.order}",
        f"samples = {', '.join(str(sample) for sample in spec.samples)}",
        f"checks = {', '.join(spec.checks)}",
    ]
    return "\n".join(rows) + "\n"

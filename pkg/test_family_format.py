from fractions import Fraction

import pytest

from abmod.config.analysis_config import AVAILABLE_CHECKS, AnalysisConfig
from abmod.core.errors import FamilyParseError, UsageError
from abmod.core.exact_algebra import parameter_generator, polynomial_ring
from abmod.utils.family_format import FamilySpec, parse_family, serialize
from abmod.utils.polynomial_parser import parse_polynomial, tokenize

EXAMPLE2 = """# x^4 + y^4 deformed by x^2 y^2
variables = x, y
parameter = t
f = x^4 + y^4 + t*x^2*y^2
samples = 0, 1, 3
"""


def test_parse_example2_document():
    spec = parse_family(EXAMPLE2.encode("utf-8"))
    assert spec.variables == ("x", "y")
    assert spec.parameter == "t"
    assert spec.f == "x^4 + y^4 + t*x^2*y^2"
    assert spec.b_order == 8
    assert spec.order == "grevlex"
    assert spec.samples == (Fraction(0), Fraction(1), Fraction(3))
    assert spec.checks == AVAILABLE_CHECKS
    R = spec.poly_ring()
    x, y = R.gens
    assert spec.polynomial() == x**4 + y**4 + x**2 * y**2 * parameter_generator(R)


def test_parse_error_position():
    """The second '+' of "x^2 + + y" is reported with its line and column."""
    with pytest.raises(FamilyParseError) as error:
        parse_family("variables = x, y\nf = x^2 + + y\n")
    assert error.value.line == 2
    assert error.value.column == 11
    assert str(error.value) == "line 2, column 11: unexpected '+'"


def test_parameter_clash():
    with pytest.raises(FamilyParseError, match="parameter 't'"):
        parse_family("variables = x, t\nf = x^2 + t^2\n")


@pytest.mark.parametrize(
    "document, message",
    [
        ("variables = x, y\n", "missing required key 'f'"),
        ("f = x^2\n", "missing required key 'variables'"),
        ("variables = x, y\nf = x^2 + z\n", "unknown identifier 'z'"),
        ("variables = x, y\nf = x^2\ncolour = red\n", "unknown key 'colour'"),
        ("variables = x, y\nf = x^2\nf = y^2\n", "duplicate key 'f'"),
        ("variables = x, y\nf = x^2\nb_order = 1\n", "b_order must be at least 2"),
        ("variables = x, y\nf = x^2\nb_order = many\n", "b_order must be an integer"),
        ("variables = x, y\nf = x^2\norder = lex\n", "unknown order 'lex'"),
        ("variables = x, y\nf = x^2\nsamples = 1/0\n", "samples must be rational"),
        ("variables = x, y\nf = x^2\nchecks = everything\n", "unknown check 'everything'"),
        ("variables = x, x\nf = x^2\n", "variables must be distinct"),
        ("variables = x, 2y\nf = x^2\n", "'2y' is not a valid identifier"),
        ("variables x, y\n", "expected 'key = value'"),
    ],
)
def test_invalid_documents(document, message):
    with pytest.raises(FamilyParseError, match=message):
        parse_family(document)


def test_invalid_utf8():
    with pytest.raises(FamilyParseError, match="UTF-8"):
        parse_family(b"variables = x\nf = \xff\n")


def test_serialize_round_trip():
    spec = parse_family(
        "variables = x, y, z\nparameter = s\nf = x^3 + y^4 + z^5 + s*x*y*z\n"
        "b_order = 3\norder = grlex\nsamples = 1/2, -3\nchecks = estim, mu_probe\n"
    )
    assert parse_family(serialize(spec)) == spec
    assert spec.samples == (Fraction(1, 2), Fraction(-3))


def test_defaults_and_overrides():
    config = AnalysisConfig()
    config.set_analysis_mode("quick")
    config.b_order = 4
    spec = parse_family("variables = x, y\nf = x^3 + y^3\n", defaults=config.settings())
    assert spec.b_order == 4
    assert spec.checks == ("mu_probe", "g_equals_e")
    spec = parse_family("variables = x, y\nf = x^3 + y^3\nb_order = 6\n", defaults=config.settings())
    assert spec.b_order == 6
    assert spec.replace(b_order=3, order=None).b_order == 3
    assert spec.replace(order=None).order == "grevlex"
    with pytest.raises(FamilyParseError):
        spec.replace(b_order=1)


def test_analysis_modes():
    config = AnalysisConfig()
    assert config.set_analysis_mode("standard")["checks"] == ["mu_probe", "g_equals_e", "estim", "quasihomogeneous"]
    assert not config.confirm_truncation
    assert config.set_analysis_mode("full")["confirm_truncation"]
    with pytest.raises(UsageError):
        config.set_analysis_mode("turbo")


def test_spair_budget_from_environment(monkeypatch):
    monkeypatch.setenv("ABMOD_SPAIR_BUDGET", "500")
    assert AnalysisConfig().spair_budget == 500
    monkeypatch.setenv("ABMOD_SPAIR_BUDGET", "lots")
    with pytest.raises(UsageError):
        AnalysisConfig()


def test_polynomial_grammar():
    R = polynomial_ring(["x", "y"])
    x, y = R.gens
    t = parameter_generator(R)
    assert parse_polynomial("-(x + y)^2", R) == -((x + y) ** 2)
    assert parse_polynomial("2*t*x - 3", R) == x * (2 * t) - 3
    assert parse_polynomial("((x))^3*y^0", R) == x**3
    assert parse_polynomial("t^2*x*y + x", R) == x * y * t**2 + x


@pytest.mark.parametrize(
    "text, message",
    [
        ("x y", "unexpected 'y'"),
        ("x^", "exponent must be a non-negative integer literal"),
        ("x^-1", "exponent must be a non-negative integer literal"),
        ("(x + y", "expected ')'"),
        ("x + ", "unexpected end of expression"),
        ("", "empty expression"),
        ("x % y", "unexpected character '%'"),
        ("2x", "unexpected 'x'"),
    ],
)
def test_polynomial_errors(text, message):
    R = polynomial_ring(["x", "y"])
    with pytest.raises(FamilyParseError, match=message):
        parse_polynomial(text, R)


def test_token_columns():
    tokens = tokenize("x^2 + y", line=3, column_offset=4)
    assert [(tok.text, tok.column) for tok in tokens[:-1]] == [("x", 5), ("^", 6), ("2", 7), ("+", 9), ("y", 11)]
    assert tokens[-1].kind == "end"
    assert all(tok.line == 3 for tok in tokens)


def test_spec_to_dict():
    spec = FamilySpec(variables=("x", "y"), f="x^3 + y^3")
    assert spec.to_dict()["samples"] == ["0/1", "1/1", "3/1"]
    assert FamilySpec(variables=("x",), f="x^2", samples=(Fraction(-1, 2),)).to_dict()["samples"] == ["-1/2"]
    assert spec.to_dict()["variables"] == ["x", "y"]

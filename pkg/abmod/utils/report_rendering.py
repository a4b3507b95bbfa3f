"""Conversion of engine values to JSON-safe structures with canonical strings."""

from fractions import Fraction

from abmod.brieskorn.brieskorn_module import BClass
from abmod.core.exact_algebra import render_monomial, render_poly, render_ratfunc, render_rational
from abmod.ideals.groebner import Certificate


def render_scalar(value):
    """A Fraction, int or RatFunc as "num/den"."""
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return render_rational(value)
    if hasattr(value, "numer") and hasattr(value, "field"):
        return render_ratfunc(value)
    return str(value)


def render_class(x, monomials, symbols):
    """
    Nonzero coordinates of a class, in (b-power, staircase position) order.

    Returns:
        list: {"b": j, "monomial": "x*y", "coefficient": "num/den"} entries
    """
    terms = []
    for j in range(x.truncation):
        for i, coefficient in enumerate(x.block(j)):
            if coefficient:
                terms.append(
                    {
                        "b": j,
                        "monomial": render_monomial(monomials[i], symbols),
                        "coefficient": render_ratfunc(coefficient),
                    }
                )
    return terms


def render_matrix(rows):
    return [[render_ratfunc(value) for value in row] for row in rows]


def render_lattice(lattice, ctx):
    """Rank, stabilization data and minimal K[b]-generators of a lattice."""
    symbols = ctx.ring.symbols
    rendered = {
        "rank": lattice.rank,
        "dimension": lattice.dimension,
        "generators": [
            render_class(x, ctx.monomials, symbols) for x in lattice.module_generators()
        ],
    }
    if lattice.steps is not None:
        rendered["steps"] = lattice.steps
    if lattice.bn_contained is not None:
        rendered["b^n E contained"] = lattice.bn_contained
    return rendered


def render_certificate(certificate):
    return {
        "target": render_poly(certificate.target),
        "generators": [render_poly(g) for g in certificate.generators],
        "cofactors": [render_poly(c) for c in certificate.cofactors],
        "re_expands": certificate.re_expands(),
    }


def render_bad_t(values, factors=()):
    return {
        "values": [render_rational(value) for value in sorted(values)],
        "factors": sorted(factors),
    }


def to_jsonable(value):
    """Recursively convert engine values inside dicts, lists and tuples."""
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, float):
        return value if value != float("inf") else "infinite"
    if isinstance(value, Certificate):
        return render_certificate(value)
    if isinstance(value, BClass):
        return [render_ratfunc(c) for c in value.coords]
    if isinstance(value, Fraction):
        return render_rational(value)
    if isinstance(value, int):
        return value
    if hasattr(value, "ring") and hasattr(value, "terms"):
        return render_poly(value)
    return render_scalar(value)


def render_criterion(report):
    """A CriterionReport as a dict."""
    return {
        "name": report.name,
        "holds": report.holds,
        "bad_t": [render_rational(value) for value in report.bad_t],
        "details": to_jsonable(report.details),
        "certificates": [render_certificate(c) for c in report.certificates if c is not None],
    }

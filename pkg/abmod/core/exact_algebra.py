"""Exact arithmetic over K = Q(t) and sparse polynomials with coefficients in K.

Scalars (RatFunc) are elements of the sympy fraction field Q(t); polynomials
(MPoly) are sympy ring elements over that field. Both are canonical and
immutable in practice, so they can be shared freely between computations.
"""

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction

import sympy
from sympy.polys.domains import QQ
from sympy.polys.fields import field
from sympy.polys.orderings import grevlex, grlex
from sympy.polys.rings import ring

from abmod.core.errors import PoleError, UsageError

MONOMIAL_ORDERS = {"grevlex": grevlex, "grlex": grlex}


@dataclass(frozen=True)
class MonomialOrder:
    """A graded monomial order together with a variable precedence.

    ``precedence`` lists input variable indices from most to least significant;
    ``None`` keeps the input order.
    """

    kind: str = "grevlex"
    precedence: tuple = None

    def __post_init__(self):
        if self.kind not in MONOMIAL_ORDERS:
            raise UsageError(f"unknown monomial order '{self.kind}' (use grevlex or grlex)")

    @property
    def sympy_order(self):
        return MONOMIAL_ORDERS[self.kind]

    def arrange(self, variables):
        """
        Order the variable names by precedence.

        Args:
            variables (list): Variable names in input order

        Returns:
            tuple: Variable names, most significant first
        """
        if self.precedence is None:
            return tuple(variables)
        if sorted(self.precedence) != list(range(len(variables))):
            raise UsageError(
                f"precedence {list(self.precedence)} is not a permutation of 0..{len(variables) - 1}"
            )
        return tuple(variables[i] for i in self.precedence)


@functools.lru_cache(maxsize=None)
def coefficient_field(parameter="t"):
    """Return the domain K = Q(parameter) and its generator."""
    frac_field, generator = field(parameter, QQ)
    return frac_field.to_domain(), generator


def polynomial_ring(variables, parameter="t", order=None):
    """
    Build the polynomial ring K[x_1..x_n] for a family.

    Args:
        variables (list): Variable names in input order
        parameter (str): Name of the deformation parameter
        order (MonomialOrder): Monomial order; grevlex in input order by default

    Returns:
        PolyRing: sympy ring whose generators follow the order's precedence
    """
    order = order or MonomialOrder()
    domain, _ = coefficient_field(parameter)
    poly_ring = ring(order.arrange(variables), domain, order.sympy_order)[0]
    return poly_ring


def fiber_ring(poly_ring):
    """Return the ring Q[x_1..x_n] with the same variables and order as ``poly_ring``."""
    return ring(poly_ring.symbols, QQ, poly_ring.order)[0]


def parameter_generator(poly_ring):
    """Return t as an element of the coefficient field of ``poly_ring``."""
    return poly_ring.domain.field.gens[0]


def parameter_name(poly_ring):
    return str(poly_ring.domain.field.symbols[0])


def ratfunc(value, parameter="t"):
    """
    Convert an integer, Fraction or rational string to an element of K.

    Args:
        value: int, Fraction, str such as "3/4", or an element of K
        parameter (str): Name of the parameter

    Returns:
        RatFunc: the value as an element of K
    """
    domain, generator = coefficient_field(parameter)
    if isinstance(value, generator.field.dtype):
        return value
    value = Fraction(value)
    return domain(value.numerator) / domain(value.denominator)


def quotient(numerator, denominator):
    """Exact quotient of two scalars or of a polynomial by a scalar."""
    if not denominator:
        raise ZeroDivisionError("division by the zero rational function")
    return numerator * (1 / denominator) if hasattr(numerator, "ring") else numerator / denominator


def t_derivative(value):
    """Derivative of a RatFunc with respect to the parameter."""
    return value.diff(value.field.gens[0])


def _to_fraction(coefficient):
    return Fraction(int(coefficient.numerator), int(coefficient.denominator))


def evaluate_univariate(poly, t0):
    """Evaluate a univariate polynomial over Q at the rational ``t0``."""
    total = Fraction(0)
    for (power,), coefficient in poly.terms():
        total += _to_fraction(coefficient) * Fraction(t0) ** power
    return total


def evaluate_ratfunc(value, t0):
    """
    Evaluate a RatFunc at a rational parameter value.

    Raises:
        PoleError: if the denominator vanishes at t0
    """
    denominator = evaluate_univariate(value.denom, t0)
    if denominator == 0:
        raise PoleError(f"{render_ratfunc(value)} has a pole at t = {t0}")
    return evaluate_univariate(value.numer, t0) / denominator


def as_rational(value):
    """Return the value as a Fraction when it does not depend on t, else None."""
    if not (value.numer.is_ground and value.denom.is_ground):
        return None
    return evaluate_univariate(value.numer, 0) / evaluate_univariate(value.denom, 0)


def canonical_parts(value):
    """
    Integer-coefficient numerator and denominator of a RatFunc.

    The parts are coprime, expanded, and the denominator has a positive
    leading coefficient; zero is 0/1.

    Returns:
        tuple: (numerator, denominator) as sympy expressions
    """
    symbol = value.field.symbols[0]
    numerator, denominator = sympy.fraction(sympy.cancel(value.as_expr()))
    numerator, denominator = sympy.expand(numerator), sympy.expand(denominator)
    if numerator == 0:
        return sympy.Integer(0), sympy.Integer(1)
    if sympy.Poly(denominator, symbol).LC() < 0:
        numerator, denominator = -numerator, -denominator
    return numerator, denominator


def _wrap(text):
    return f"({text})" if " " in text else text


def render_ratfunc(value):
    """Render a RatFunc as the canonical string "num/den"."""
    numerator, denominator = canonical_parts(value)
    return f"{_wrap(sympy.sstr(numerator))}/{_wrap(sympy.sstr(denominator))}"


def render_rational(value):
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def render_monomial(monom, symbols):
    """Render an exponent vector such as (2, 1) as "x^2*y"; the empty product is "1"."""
    factors = []
    for symbol, power in zip(symbols, monom):
        if power == 1:
            factors.append(str(symbol))
        elif power > 1:
            factors.append(f"{symbol}^{power}")
    return "*".join(factors) or "1"


def render_poly(poly):
    """Render a polynomial over K or Q deterministically."""
    return sympy.sstr(poly.as_expr()) if poly else "0"


def partial_derivative(poly, which):
    """
    Formal partial derivative.

    Args:
        poly (MPoly): Polynomial over K
        which (int|str): Variable index in ring order, a variable name, or the
            parameter name to differentiate the coefficients

    Returns:
        MPoly: the derivative
    """
    poly_ring = poly.ring
    if isinstance(which, str):
        if which == parameter_name(poly_ring):
            return poly_ring.from_dict(
                {monom: t_derivative(coefficient) for monom, coefficient in poly.items()}
            )
        names = [str(symbol) for symbol in poly_ring.symbols]
        if which not in names:
            raise UsageError(f"unknown variable '{which}'")
        which = names.index(which)
    if not 0 <= which < poly_ring.ngens:
        raise UsageError(f"variable index {which} out of range")
    return poly.diff(poly_ring.gens[which])


def specialize_t(poly, t0):
    """
    Evaluate every coefficient at t = t0.

    Returns:
        PolyElement: polynomial over Q in ``fiber_ring(poly.ring)``

    Raises:
        PoleError: naming the monomial whose coefficient has a pole at t0
    """
    symbols = poly.ring.symbols
    values = {}
    for monom, coefficient in poly.items():
        try:
            value = evaluate_ratfunc(coefficient, t0)
        except PoleError as exc:
            raise PoleError(
                f"coefficient of {render_monomial(monom, symbols)}: {exc}"
            ) from exc
        values[monom] = QQ(value.numerator, value.denominator)
    return fiber_ring(poly.ring).from_dict(values)


def weighted_degree(monom, weights):
    """Sum of w_i * m_i as a Fraction."""
    if len(monom) != len(weights):
        raise UsageError("weight vector length does not match the variable count")
    return sum((Fraction(w) * power for w, power in zip(weights, monom)), Fraction(0))


def monomials_of_degree(nvars, degree):
    """All exponent vectors of total degree ``degree`` in ``nvars`` variables."""
    monomials = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        exponents = [0] * nvars
        for index in combo:
            exponents[index] += 1
        monomials.append(tuple(exponents))
    return sorted(set(monomials), reverse=True)


def to_scalar(domain, value):
    """Convert an int or Fraction into an element of ``domain`` (K or Q)."""
    if isinstance(value, (int, Fraction)):
        value = Fraction(value)
        return domain(value.numerator) / domain(value.denominator)
    return domain.convert(value)


def monomial_poly(poly_ring, monom, coefficient=1):
    """The polynomial coefficient * x^monom in ``poly_ring``."""
    return poly_ring.term_new(monom, to_scalar(poly_ring.domain, coefficient))


def expand_parameter(poly):
    """
    Split every term of ``poly`` by t-degree.

    Returns:
        list: (exponent vector, t-degree, rational coefficient) triples, or None
            when some coefficient is not a polynomial in t
    """
    terms = []
    for monom, coefficient in poly.items():
        if not coefficient.denom.is_ground:
            return None
        scale = evaluate_univariate(coefficient.denom, 0)
        for (power,), value in coefficient.numer.terms():
            terms.append((monom, power, _to_fraction(value) / scale))
    return terms

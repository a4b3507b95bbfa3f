"""Ideals over K = Q(t) (or Q after specialization) and their reduced Groebner bases.

Buchberger's algorithm here keeps, for every basis element, its expression in
terms of the original generators, so division results can always be lifted
to cofactors of the generators themselves.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import sympy
from sympy.polys.rings import ring

from abmod.core.errors import InternalCapError, NonIsolatedError, UsageError
from abmod.core.exact_algebra import monomial_poly, monomials_of_degree

LOGGER = logging.getLogger(__name__)

DEFAULT_SPAIR_BUDGET = 20000
DEFAULT_LOCALIZATION_CAP = 24


class Ideal:
    """An ideal given by generators in a sympy polynomial ring."""

    def __init__(self, generators, poly_ring=None):
        """
        Args:
            generators (iterable): Polynomials; zeros are discarded
            poly_ring (PolyRing): Ring of the ideal, required when no generator is nonzero
        """
        generators = list(generators)
        if poly_ring is None:
            if not generators:
                raise UsageError("an ideal without generators needs an explicit poly_ring")
            poly_ring = generators[0].ring
        self.ring = poly_ring
        self.generators = tuple(g for g in generators if g)

    def __mul__(self, other):
        return Ideal([g * h for g in self.generators for h in other.generators], self.ring)

    def __repr__(self):
        return f"Ideal({[str(g.as_expr()) for g in self.generators]})"


@dataclass(frozen=True)
class Staircase:
    """Standard monomials of a Groebner basis, ascending in the monomial order.

    ``standard_monomials`` is None when the staircase is infinite.
    """

    standard_monomials: tuple

    @property
    def is_finite(self):
        return self.standard_monomials is not None

    def __len__(self):
        if self.standard_monomials is None:
            raise ValueError("infinite staircase has no length")
        return len(self.standard_monomials)

    def index(self, monom):
        return self.standard_monomials.index(monom)


@dataclass(frozen=True)
class Certificate:
    """target = sum(cofactors[i] * generators[i]); holds only when re-expanded exactly."""

    target: object
    generators: tuple
    cofactors: tuple

    def re_expands(self):
        total = self.target.ring.zero
        for cofactor, generator in zip(self.cofactors, self.generators):
            total += cofactor * generator
        return total == self.target


@dataclass(frozen=True)
class Membership:
    holds: bool
    normal_form: object
    certificate: Certificate = None

    def __bool__(self):
        return self.holds


@dataclass(frozen=True)
class Inclusion:
    holds: bool
    certificates: tuple = ()
    failures: tuple = ()

    def __bool__(self):
        return self.holds


class BadValues:
    """Accumulates parameter values where a computation over K may fail to specialize."""

    def __init__(self):
        self.roots = set()
        self.factors = set()

    def record(self, value):
        """Record the zeros of the numerator and denominator of a RatFunc."""
        if not hasattr(value, "numer"):
            return
        self.record_roots(value.numer)
        self.record_roots(value.denom)

    def record_roots(self, poly):
        if poly.is_ground:
            return
        _, factors = poly.factor_list()
        for factor, _ in factors:
            if factor.degree() == 1:
                coefficients = dict(factor.terms())
                slope = _fraction(coefficients[(1,)])
                offset = _fraction(coefficients.get((0,), 0))
                self.roots.add(-offset / slope)
            else:
                self.factors.add(sympy.sstr(factor.as_expr()))

    def record_poly(self, poly):
        """Record the zeros of every coefficient denominator of a polynomial."""
        for coefficient in poly.coeffs():
            if hasattr(coefficient, "denom"):
                self.record_roots(coefficient.denom)


def _fraction(value):
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(int(value.numerator), int(value.denominator))


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Groebner basis with lifts to the original generators."""

    basis: tuple
    lifts: tuple
    origin: Ideal
    bad_t: tuple = ()
    bad_factors: tuple = ()
    stats: dict = field(default_factory=dict)

    @property
    def ring(self):
        return self.origin.ring

    @property
    def order(self):
        return self.origin.ring.order

    @property
    def leading_monomials(self):
        return tuple(g.LM for g in self.basis)

    def lift(self, cofactors):
        """Turn cofactors with respect to the basis into cofactors of the generators."""
        poly_ring = self.ring
        lifted = [poly_ring.zero] * len(self.origin.generators)
        for cofactor, representation in zip(cofactors, self.lifts):
            if not cofactor:
                continue
            for i, coefficient in enumerate(representation):
                if coefficient:
                    lifted[i] += cofactor * coefficient
        return tuple(lifted)


def _select(G, P):
    """Normal selection strategy: the pair with the smallest lcm of leading monomials."""
    poly_ring = G[0].ring
    return min(
        P,
        key=lambda pair: (
            poly_ring.order(poly_ring.monomial_lcm(G[pair[0]].LM, G[pair[1]].LM)),
            pair,
        ),
    )


def _update(G, P, f):
    """Pairs remaining after adding f to G, using the Gebauer-Moeller criteria."""
    poly_ring = f.ring
    lcm = poly_ring.monomial_lcm
    mul = poly_ring.monomial_mul
    div = poly_ring.monomial_div
    lmf = f.LM
    lmG = [g.LM for g in G]

    P = {
        p
        for p in P
        if (
            not div(lcm(lmG[p[0]], lmG[p[1]]), lmf)
            or lcm(lmG[p[0]], lmG[p[1]]) == lcm(lmG[p[0]], lmf)
            or lcm(lmG[p[0]], lmG[p[1]]) == lcm(lmG[p[1]], lmf)
        )
    }
    lcm_dict = {}
    for i in range(len(G)):
        lcm_dict.setdefault(lcm(lmG[i], lmf), []).append(i)
    minimalized_lcms = []
    for L in sorted(lcm_dict.keys(), key=poly_ring.order):
        if all(not div(L, L_) for L_ in minimalized_lcms):
            minimalized_lcms.append(L)
    new_pairs = set()
    for L in minimalized_lcms:
        if not any(lcm(lmG[i], lmf) == mul(lmG[i], lmf) for i in lcm_dict[L]):
            new_pairs.add((min(lcm_dict[L]), len(G)))
    return P | new_pairs


def _combine(poly_ring, *scaled):
    """Sum of multiplier * representation over (multiplier, representation) pairs."""
    size = len(scaled[0][1])
    total = [poly_ring.zero] * size
    for multiplier, representation in scaled:
        if not multiplier:
            continue
        for i, coefficient in enumerate(representation):
            if coefficient:
                total[i] += multiplier * coefficient
    return tuple(total)


def _spoly(f, f_lift, g, g_lift):
    poly_ring = f.ring
    lcm = poly_ring.monomial_lcm(f.LM, g.LM)
    mf = poly_ring.monomial_div(lcm, f.LM)
    mg = poly_ring.monomial_div(lcm, g.LM)
    s = f.mul_monom(mf) - g.mul_monom(mg)
    lift = _combine(
        poly_ring,
        (monomial_poly(poly_ring, mf), f_lift),
        (-monomial_poly(poly_ring, mg), g_lift),
    )
    return s, lift


def _reduce(p, p_lift, G, L):
    """Full reduction of p by G, carrying its representation along."""
    if not G or not p:
        return p, p_lift
    quotients, remainder = p.div(list(G))
    poly_ring = p.ring
    lift = _combine(
        poly_ring,
        (poly_ring.one, p_lift),
        *[(-q, rep) for q, rep in zip(quotients, L)],
    )
    return remainder, lift


def _monic(p, p_lift, bad):
    leading = p.LC
    bad.record(leading)
    inverse = 1 / leading
    return p.monic(), tuple(c * inverse for c in p_lift)


def buchberger(ideal, budget=None):
    """
    Compute the reduced Groebner basis of an ideal in its ring's monomial order.

    Args:
        ideal (Ideal): Generators over K or Q
        budget (int): Maximum number of S-pairs to process

    Returns:
        GroebnerBasis: reduced basis, representations and the bad parameter set

    Raises:
        InternalCapError: when the S-pair budget is exhausted
    """
    budget = DEFAULT_SPAIR_BUDGET if budget is None else budget
    poly_ring = ideal.ring
    generators = ideal.generators
    size = len(generators)
    bad = BadValues()
    start_time = time.time()

    G, L, P = [], [], set()
    for i, generator in enumerate(generators):
        unit = tuple(poly_ring.one if k == i else poly_ring.zero for k in range(size))
        g, g_lift = _monic(generator, unit, bad)
        P = _update(G, P, g)
        G.append(g)
        L.append(g_lift)

    processed = 0
    zero_reductions = 0
    while P:
        if processed >= budget:
            raise InternalCapError(
                f"Groebner basis computation exceeded the S-pair budget of {budget}"
            )
        i, j = _select(G, P)
        P.remove((i, j))
        processed += 1
        s, s_lift = _spoly(G[i], L[i], G[j], L[j])
        r, r_lift = _reduce(s, s_lift, G, L)
        if r:
            r, r_lift = _monic(r, r_lift, bad)
            P = _update(G, P, r)
            G.append(r)
            L.append(r_lift)
        else:
            zero_reductions += 1

    # minimalize, then interreduce
    indices = sorted(range(len(G)), key=lambda k: poly_ring.order(G[k].LM))
    minimal = []
    for k in indices:
        if all(not poly_ring.monomial_div(G[k].LM, G[m].LM) for m in minimal):
            minimal.append(k)
    basis, lifts = [], []
    for k in minimal:
        others = [m for m in minimal if m != k]
        r, r_lift = _reduce(G[k], L[k], [G[m] for m in others], [L[m] for m in others])
        r, r_lift = _monic(r, r_lift, bad)
        basis.append(r)
        lifts.append(r_lift)
    order = sorted(range(len(basis)), key=lambda k: poly_ring.order(basis[k].LM), reverse=True)
    basis = [basis[k] for k in order]
    lifts = [lifts[k] for k in order]
    for g in basis:
        bad.record_poly(g)

    LOGGER.debug(
        "Groebner basis of %d generators: %d S-pairs, %d zero reductions, %d elements in %.2f seconds",
        size,
        processed,
        zero_reductions,
        len(basis),
        time.time() - start_time,
    )
    return GroebnerBasis(
        basis=tuple(basis),
        lifts=tuple(lifts),
        origin=ideal,
        bad_t=tuple(sorted(bad.roots)),
        bad_factors=tuple(sorted(bad.factors)),
        stats={"spairs": processed, "zero_reductions": zero_reductions},
    )


def groebner(ideal, order=None, budget=None):
    """
    Reduced Groebner basis of ``ideal``, optionally in another monomial order.

    Args:
        ideal (Ideal): The ideal
        order (MonomialOrder): Order applied to the ring's variables; the ring's own order if None
        budget (int): S-pair budget
    """
    if order is not None:
        symbols = [str(s) for s in ideal.ring.symbols]
        poly_ring = ring(order.arrange(symbols), ideal.ring.domain, order.sympy_order)[0]
        ideal = Ideal([g.set_ring(poly_ring) for g in ideal.generators], poly_ring)
    return buchberger(ideal, budget=budget)


def divide(p, gb):
    """
    Divide p by a Groebner basis.

    Returns:
        tuple: (normal_form, cofactors) with p = normal_form + sum(cofactors[i] * gb.basis[i])
    """
    if not gb.basis:
        return p, ()
    quotients, remainder = p.div(list(gb.basis))
    return remainder, tuple(quotients)


def membership(p, ideal_or_basis, budget=None):
    """
    Decide p in I and return a certificate in terms of the generators of I.

    Args:
        p (MPoly): Polynomial to test
        ideal_or_basis (Ideal|GroebnerBasis): The ideal, or a basis already computed
    """
    gb = ideal_or_basis
    if isinstance(gb, Ideal):
        gb = buchberger(gb, budget=budget)
    normal_form, cofactors = divide(p, gb)
    if normal_form:
        return Membership(False, normal_form)
    certificate = Certificate(p, gb.origin.generators, gb.lift(cofactors))
    return Membership(True, normal_form, certificate)


def ideal_inclusion(A, B, budget=None):
    """
    Test A inside B generator by generator.

    Returns:
        Inclusion: truthy when every generator of A reduces to 0 modulo B
    """
    gb = B if isinstance(B, GroebnerBasis) else buchberger(B, budget=budget)
    certificates, failures = [], []
    for generator in A.generators:
        result = membership(generator, gb)
        if result:
            certificates.append(result.certificate)
        else:
            failures.append(generator)
    return Inclusion(not failures, tuple(certificates), tuple(failures))


def maximal_ideal_power(poly_ring, k):
    """The ideal generated by all monomials of degree k in the ring variables."""
    if k < 0:
        raise ValueError("power of the maximal ideal must be non-negative")
    return Ideal(
        [monomial_poly(poly_ring, monom) for monom in monomials_of_degree(poly_ring.ngens, k)],
        poly_ring,
    )


def staircase(gb):
    """
    Standard monomials of a Groebner basis.

    Returns:
        Staircase: ascending in the monomial order; infinite when some variable
            has no pure power among the leading monomials
    """
    poly_ring = gb.ring
    nvars = poly_ring.ngens
    leading = gb.leading_monomials
    if not leading:
        return Staircase(None)

    def is_standard(monom):
        return not any(poly_ring.monomial_div(monom, lm) for lm in leading)

    for i in range(nvars):
        pure = [lm for lm in leading if all(e == 0 for k, e in enumerate(lm) if k != i)]
        if not pure:
            return Staircase(None)

    zero = poly_ring.zero_monom
    if not is_standard(zero):
        return Staircase(())
    found = {zero}
    frontier = [zero]
    while frontier:
        next_frontier = []
        for monom in frontier:
            for i in range(nvars):
                candidate = tuple(e + 1 if k == i else e for k, e in enumerate(monom))
                if candidate not in found and is_standard(candidate):
                    found.add(candidate)
                    next_frontier.append(candidate)
        frontier = next_frontier
    return Staircase(tuple(sorted(found, key=poly_ring.order)))


def quotient_dimension(gb):
    """Number of standard monomials, or math.inf."""
    stairs = staircase(gb)
    return len(stairs) if stairs.is_finite else math.inf


@dataclass(frozen=True)
class LocalIdeal:
    """The component of an ideal at the origin.

    ``order`` is the least s with m^s inside the localization; ``basis`` is the
    reduced basis of ideal + m^(order + 1), whose generators are the original
    ones followed by the monomials of degree order + 1.
    """

    ideal: Ideal
    order: int
    basis: GroebnerBasis
    dimension: int


def localize(ideal, budget=None, cap=DEFAULT_LOCALIZATION_CAP):
    """
    Find the origin component of an ideal as ideal + m^s.

    dim K[x]/(I + m^s) grows with s until m^s lies in the localization of I,
    and is constant from then on (Nakayama).

    Args:
        ideal (Ideal): The ideal
        budget (int): S-pair budget for each basis
        cap (int): Largest power of m tried

    Returns:
        LocalIdeal: the stabilized component

    Raises:
        NonIsolatedError: the dimension has not stabilized at m^cap
    """
    poly_ring = ideal.ring
    start_time = time.time()
    previous = None
    for s in range(1, cap + 2):
        extended = Ideal(
            list(ideal.generators) + list(maximal_ideal_power(poly_ring, s).generators),
            poly_ring,
        )
        gb = buchberger(extended, budget=budget)
        dimension = quotient_dimension(gb)
        if previous is not None and dimension == previous:
            LOGGER.debug(
                "Localized at the origin: m^%d inside the ideal, dimension %d (%.2f seconds)",
                s - 1,
                dimension,
                time.time() - start_time,
            )
            return LocalIdeal(ideal, s - 1, gb, dimension)
        previous = dimension
    raise NonIsolatedError(f"the ideal is not m-primary at the origin up to m^{cap}")


def local_membership(p, ideal, local=None, budget=None):
    """
    Decide p in the localization of ``ideal`` at the origin.

    Global membership is tried first; otherwise p is tested against
    ideal + m^s. An ideal that is not m-primary only gets the global test.

    Args:
        local (LocalIdeal): Precomputed component, if available
    """
    if local is None:
        result = membership(p, ideal, budget=budget)
        if result or not ideal.generators:
            return result
        try:
            local = localize(ideal, budget=budget)
        except NonIsolatedError:
            return result
    return membership(p, local.basis)


def local_inclusion(A, B, budget=None):
    """Test A inside the localization of B at the origin, generator by generator."""
    try:
        local = localize(B, budget=budget)
    except NonIsolatedError:
        return ideal_inclusion(A, B, budget=budget)
    return ideal_inclusion(A, local.basis)

"""Checkable hypotheses on a family and their certificates.

Ideal statements are taken in the local ring at the origin, through the
origin component I + m^s of each ideal. Every statement that holds "for
t != 0" is decided over the generic point K = Q(t); the finite set of
parameter values where the computation may fail to specialize is reported
alongside.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from sympy.polys.domains import QQ

from abmod.brieskorn.brieskorn_module import a_apply, b_apply
from abmod.brieskorn.lattice import is_stable, m_power_lattice, saturate_G
from abmod.core.errors import ContextMismatchError, NonIsolatedError, PoleError, UsageError
from abmod.core.exact_algebra import (
    as_rational,
    expand_parameter,
    parameter_generator,
    parameter_name,
    partial_derivative,
    render_rational,
    specialize_t,
    to_scalar,
)
from abmod.ideals.groebner import (
    Ideal,
    ideal_inclusion,
    local_inclusion,
    local_membership,
    localize,
    maximal_ideal_power,
    membership,
)
from abmod.utils.linear_algebra import row_echelon

LOGGER = logging.getLogger(__name__)


@dataclass
class CriterionReport:
    """Outcome of one check; certificates re-expand exactly whenever ``holds``."""

    name: str
    holds: bool
    certificates: list = field(default_factory=list)
    bad_t: tuple = ()
    details: dict = field(default_factory=dict)


def _merge_bad(*groups):
    values = set()
    for group in groups:
        values.update(group)
    return tuple(sorted(values))


def _jacobian(poly):
    return Ideal([partial_derivative(poly, i) for i in range(poly.ring.ngens)], poly.ring)


def estim_criterion(ctx, k, check_conclusion=True):
    """
    Test m^k * df/dt inside m^(k+1) * J_/(f) at the origin; when it holds,
    confirm that M^k is stable under b^-1 nabla.
    """
    if k < 0:
        raise UsageError("k must be non-negative")
    poly_ring = ctx.ring
    source = maximal_ideal_power(poly_ring, k) * Ideal([ctx.dfdt], poly_ring)
    target = localize(maximal_ideal_power(poly_ring, k + 1) * ctx.jacobian, budget=ctx.budget)
    inclusion = ideal_inclusion(source, target.basis)
    report = CriterionReport(
        name=f"estim(k={k})",
        holds=inclusion.holds,
        certificates=list(inclusion.certificates),
        bad_t=_merge_bad(ctx.bad_t, target.basis.bad_t),
        details={"inclusion": inclusion.holds, "local order": target.order},
    )
    if inclusion.holds and check_conclusion:
        report.details["M^k stable"] = is_stable(m_power_lattice(ctx, k), ctx)
    return report


def example1_lemma(P, Q, k, budget=None):
    """
    For f = P + t Q with t-free P, Q: test m^(k+1) J(Q) in m^(k+1) J(P),
    Q in m J(Q), and independently the conclusion m^k Q in m^(k+1) J_/(f),
    all in the local ring at the origin.

    Raises:
        NonIsolatedError: P does not have an isolated singularity at the origin
    """
    poly_ring = P.ring
    for poly in (P, Q):
        if any(as_rational(c) is None for c in poly.coeffs()):
            raise UsageError("P and Q must not depend on the parameter")
    localize(_jacobian(P), budget=budget)
    jacobian_Q = _jacobian(Q)
    m_k1 = maximal_ideal_power(poly_ring, k + 1)

    first = local_inclusion(m_k1 * jacobian_Q, m_k1 * _jacobian(P), budget=budget)
    second = local_membership(Q, maximal_ideal_power(poly_ring, 1) * jacobian_Q, budget=budget)
    f = P + Q * parameter_generator(poly_ring)
    target = localize(m_k1 * _jacobian(f), budget=budget)
    conclusion = ideal_inclusion(maximal_ideal_power(poly_ring, k) * Ideal([Q], poly_ring), target.basis)

    certificates = list(first.certificates) + list(conclusion.certificates)
    if second:
        certificates.append(second.certificate)
    hypotheses = first.holds and second.holds
    return CriterionReport(
        name=f"example1_lemma(k={k})",
        holds=hypotheses and conclusion.holds,
        certificates=certificates,
        bad_t=target.basis.bad_t,
        details={
            "m^(k+1) J(Q) in m^(k+1) J(P)": first.holds,
            "Q in m J(Q)": second.holds,
            "conclusion": conclusion.holds,
            "implication": (not hypotheses) or conclusion.holds,
        },
    )


def example1_ideal_equality(P, Q, k, budget=None):
    """m^(k+1) J_/(P + tQ) = m^(k+1) J(P) at the origin over K, with the bad parameter set."""
    poly_ring = P.ring
    m_k1 = maximal_ideal_power(poly_ring, k + 1)
    relative = localize(m_k1 * _jacobian(P + Q * parameter_generator(poly_ring)), budget=budget)
    fixed = localize(m_k1 * _jacobian(P), budget=budget)
    forward = ideal_inclusion(relative.ideal, fixed.basis)
    backward = ideal_inclusion(fixed.ideal, relative.basis)
    return CriterionReport(
        name=f"example1_equality(k={k})",
        holds=forward.holds and backward.holds,
        certificates=list(forward.certificates) + list(backward.certificates),
        bad_t=_merge_bad(relative.basis.bad_t, fixed.basis.bad_t),
        details={"relative in fixed": forward.holds, "fixed in relative": backward.holds},
    )


def g_equals_e_test(ctx, cross_check=False):
    """G = E if and only if df/dt lies in J_/(f)."""
    result = membership(ctx.dfdt, ctx.gb)
    report = CriterionReport(
        name="G=E",
        holds=result.holds,
        certificates=[result.certificate] if result else [],
        bad_t=ctx.bad_t,
        details={"df/dt in J": result.holds},
    )
    if cross_check:
        report.details["saturated G = E"] = saturate_G(ctx).rank == ctx.dimension
    return report


def _local_milnor_number(poly, budget):
    try:
        return localize(_jacobian(poly), budget=budget).dimension
    except NonIsolatedError:
        return math.inf


def mu_constancy_probe(ctx, samples):
    """
    Compare the Milnor number at the origin over K with that of the fibers at
    the sample values.

    A sample in the bad set is kept when its fiber has the generic mu and
    skipped as a bad value otherwise.
    """
    report = CriterionReport(name="mu_constancy", holds=True, bad_t=ctx.bad_t)
    report.details["mu"] = ctx.mu
    fibers = []
    bad = set(ctx.bad_t)
    for sample in samples:
        t0 = Fraction(sample)
        entry = {"t": render_rational(t0)}
        try:
            fiber = specialize_t(ctx.f, t0)
        except PoleError as exc:
            entry.update(status="skipped", note=f"bad value: {exc}")
            fibers.append(entry)
            continue
        mu = _local_milnor_number(fiber, ctx.budget)
        entry["mu"] = mu if mu != math.inf else "infinite"
        if t0 in bad and mu != ctx.mu:
            entry.update(status="skipped", note="bad value: the fiber degenerates")
        else:
            entry["status"] = "checked" if t0 not in bad else "checked (bad candidate)"
            if mu != ctx.mu:
                report.holds = False
        fibers.append(entry)
        LOGGER.info("mu at t=%s: %s", entry["t"], entry["mu"])
    report.details["fibers"] = fibers
    return report


def quasihomogeneous_detect(f):
    """
    Rational weights (w_1..w_n, w_t) giving every term of f weighted degree 1.

    Returns:
        tuple: Fractions, or None when no such weights exist
    """
    if not f:
        return None
    terms = expand_parameter(f)
    if terms is None:
        return None
    nvars = f.ring.ngens
    rows = [
        [QQ(e) for e in monom] + [QQ(power), QQ(1)]
        for monom, power, _ in terms
    ]
    echelon, pivots = row_echelon(rows, nvars + 2, QQ)
    if nvars + 1 in pivots:
        return None
    weights = [Fraction(0)] * (nvars + 1)
    for row, pivot in zip(echelon, pivots):
        value = row[-1]
        weights[pivot] = Fraction(int(value.numerator), int(value.denominator))
    return tuple(weights)


def euler_vector_field_check(f, weights):
    """True when W f = f for W = sum w_i x_i d/dx_i + w_t t d/dt."""
    poly_ring = f.ring
    domain = poly_ring.domain
    image = poly_ring.zero
    for i, gen in enumerate(poly_ring.gens):
        image += gen * partial_derivative(f, i) * to_scalar(domain, weights[i])
    t = parameter_generator(poly_ring)
    image += partial_derivative(f, parameter_name(poly_ring)) * (t * to_scalar(domain, weights[-1]))
    return image == f


def spectral_identity(ctx, weights):
    """
    For weights with w_t = 0: a(m) = (sum w_i (m_i + 1)) b(m) on every standard monomial.

    Returns:
        CriterionReport: with the failing monomials in details
    """
    failures = []
    for i, monom in enumerate(ctx.monomials):
        degree = sum((Fraction(w) * (e + 1) for w, e in zip(weights, monom)), Fraction(0))
        m = ctx.basis_class(i)
        if a_apply(m, ctx) != b_apply(m).scale(to_scalar(ctx.domain, degree)):
            failures.append(monom)
    return CriterionReport(
        name="spectral_identity",
        holds=not failures,
        bad_t=ctx.bad_t,
        details={"failures": failures},
    )


def example3_relations(ctx, p, q, r):
    """
    Relations for f = x^p + y^q + z^r + t xyz with alpha = xyz:
    p x^p = q y^q = r z^r = -t alpha mod m J_/(f), f - (1 - rho) t alpha in m J_/(f),
    m df/dt in m^2 J_/(f), m f in m^2 J_/(f), t^2 x^p y and a(alpha) in m^2 J_/(f).

    Raises:
        ContextMismatchError: the family is not of this shape
    """
    if ctx.n != 3:
        raise ContextMismatchError("example 3 relations need a three-variable family")
    poly_ring = ctx.ring
    x, y, z = poly_ring.gens
    t = ctx.t
    alpha = x * y * z
    expected = x ** p + y ** q + z ** r + alpha * t
    if ctx.f != expected:
        raise ContextMismatchError(f"family is not x^{p} + y^{q} + z^{r} + t*x*y*z")
    rho = Fraction(1, p) + Fraction(1, q) + Fraction(1, r)
    m1 = maximal_ideal_power(poly_ring, 1)
    mJ = localize(m1 * ctx.jacobian, budget=ctx.budget).basis
    m2J = localize(maximal_ideal_power(poly_ring, 2) * ctx.jacobian, budget=ctx.budget).basis
    t_alpha = alpha * t

    results = {}
    certificates = []

    def record(name, outcome):
        results[name] = bool(outcome)
        if hasattr(outcome, "certificate") and outcome:
            certificates.append(outcome.certificate)
        elif hasattr(outcome, "certificates"):
            certificates.extend(outcome.certificates)

    record(f"{p} x^{p} + t alpha in mJ", membership(p * x ** p + t_alpha, mJ))
    record(f"{q} y^{q} + t alpha in mJ", membership(q * y ** q + t_alpha, mJ))
    record(f"{r} z^{r} + t alpha in mJ", membership(r * z ** r + t_alpha, mJ))
    record(
        "f - (1 - rho) t alpha in mJ",
        membership(ctx.f - t_alpha * to_scalar(ctx.domain, 1 - rho), mJ),
    )
    record("m df/dt in m^2 J", ideal_inclusion(m1 * Ideal([ctx.dfdt], poly_ring), m2J))
    record("m f in m^2 J", ideal_inclusion(m1 * Ideal([ctx.f], poly_ring), m2J))
    record(f"t^2 x^{p} y in m^2 J", membership(x ** p * y * t ** 2, m2J))
    record("a(alpha) in m^2 J", membership(ctx.f * alpha, m2J))

    return CriterionReport(
        name=f"example3({p},{q},{r})",
        holds=all(results.values()),
        certificates=certificates,
        bad_t=_merge_bad(ctx.bad_t, mJ.bad_t, m2J.bad_t),
        details={"rho": render_rational(rho), "relations": results},
    )

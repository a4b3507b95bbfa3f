"""b-closed K-subspaces of truncated E: the lattices P, G and M^k.

A lattice is stored as the reduced row echelon basis of its K-span inside
E mod b^N, columns ordered by (b-power, staircase position). Every lattice
contains b^N E by the truncation convention.
"""

import logging
import time
from dataclasses import dataclass

from abmod.brieskorn.brieskorn_module import BClass, a_apply, b_inv_nabla, nabla, reduce
from abmod.core.errors import ContextMismatchError, InternalCapError, NotInPError
from abmod.core.exact_algebra import monomials_of_degree, render_ratfunc
from abmod.utils.linear_algebra import left_kernel, reduce_vector, row_echelon

LOGGER = logging.getLogger(__name__)


class Lattice:
    """A K[b]-submodule of E mod b^N in canonical echelon form."""

    includes_bN_tail = True

    def __init__(self, rows, pivots, mu, truncation, domain, generators=()):
        self.rows = tuple(rows)
        self.pivots = tuple(pivots)
        self.mu = mu
        self.truncation = truncation
        self.domain = domain
        self.generators = tuple(generators)
        self.steps = None
        self.bn_contained = None

    @classmethod
    def from_rows(cls, rows, ctx, generators=()):
        echelon, pivots = row_echelon(rows, ctx.dimension, ctx.domain)
        return cls(echelon, pivots, ctx.mu, ctx.truncation, ctx.domain, generators)

    @property
    def rank(self):
        return len(self.rows)

    @property
    def dimension(self):
        return self.mu * self.truncation

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.pivots == other.pivots and self.rows == other.rows

    def __repr__(self):
        return f"Lattice(rank={self.rank}, mu={self.mu}, N={self.truncation})"

    def contains(self, x):
        """Membership of a BClass."""
        residual = reduce_vector(x.coords, self.rows, self.pivots)
        return not any(residual)

    def contains_lattice(self, other):
        return all(not any(reduce_vector(row, self.rows, self.pivots)) for row in other.rows)

    def row_classes(self):
        return [BClass(row, self.mu, self.truncation) for row in self.rows]

    def shifted(self):
        """The lattice b L."""
        rows = [BClass(row, self.mu, self.truncation).shift(1).coords for row in self.rows]
        echelon, pivots = row_echelon(rows, self.dimension, self.domain)
        return Lattice(echelon, pivots, self.mu, self.truncation, self.domain)

    def truncated_rows(self, blocks):
        """Echelon rows of the image of L in E mod b^blocks."""
        cut = blocks * self.mu
        return tuple(row[:cut] for row, pivot in zip(self.rows, self.pivots) if pivot < cut)

    def module_generators(self):
        """A minimal set of K[b]-generators: lifts of a K-basis of L / bL."""
        shifted = self.shifted()
        rows, pivots = list(shifted.rows), shifted.pivots
        chosen = []
        for row in self.rows:
            if any(reduce_vector(row, rows, pivots)):
                chosen.append(BClass(row, self.mu, self.truncation))
                rows, pivots = row_echelon(rows + [row], self.dimension, self.domain)
        return chosen


def span(gens, ctx):
    """Smallest b-closed K-subspace containing every b^j * gen."""
    rows = []
    for gen in gens:
        shifted = gen
        for _ in range(ctx.truncation):
            if shifted.is_zero():
                break
            rows.append(shifted.coords)
            shifted = shifted.shift(1)
    return Lattice.from_rows(rows, ctx, generators=gens)


def full_lattice(ctx):
    return span([ctx.basis_class(i) for i in range(ctx.mu)], ctx)


def zero_lattice(ctx):
    return Lattice((), (), ctx.mu, ctx.truncation, ctx.domain)


def m_power_lattice(ctx, k):
    """
    M^k, the image of m^k * Omega^n in E.

    Spanned by the classes of monomials of degree k up to the largest
    staircase degree plus k + 1, closed under b.
    """
    top = max(sum(m) for m in ctx.monomials) + k + 1
    gens = []
    for degree in range(k, top + 1):
        for monom in monomials_of_degree(ctx.n, degree):
            x = reduce(ctx.monomial(monom), ctx)
            if not x.is_zero():
                gens.append(x)
    return span(gens, ctx)


def compute_P(ctx):
    """
    P = {x : nabla(x) in bE}: bE plus the kernel of m_i -> b^0 part of nabla(m_i).
    """
    columns = [image.block(0) for image in ctx.nabla_images]
    kernel = left_kernel(columns, ctx.mu, ctx.domain)
    gens = []
    for vector in kernel:
        x = ctx.zero()
        for i, c in enumerate(vector):
            if c:
                x = x + ctx.basis_class(i).scale(c)
        gens.append(x)
    if ctx.truncation > 1:
        gens.extend(ctx.basis_class(i, 1) for i in range(ctx.mu))
    return span(gens, ctx)


def _combine_rows(lattice, coefficients, ctx):
    combined = [ctx.domain.zero] * ctx.dimension
    for c, row in zip(coefficients, lattice.rows):
        if not c:
            continue
        for k, value in enumerate(row):
            if value:
                combined[k] += c * value
    return tuple(combined)


def _nabla_residuals(lattice, target, ctx):
    """Residuals of nabla(row) modulo ``target`` for every echelon row."""
    return [
        reduce_vector(nabla(x, ctx).coords, target.rows, target.pivots)
        for x in lattice.row_classes()
    ]


def is_stable(lattice, ctx):
    """True when nabla(L) lies in bL, i.e. L is stable under b^-1 nabla."""
    shifted = lattice.shifted()
    return all(not any(residual) for residual in _nabla_residuals(lattice, shifted, ctx))


def saturate_G(ctx):
    """
    The largest b^-1 nabla-stable lattice G, by the descending chain
    L_0 = E, L_(k+1) = {x in L_k : nabla(x) in b L_k}.

    Returns:
        Lattice: G, with ``steps`` set to the number of strict decreases

    Raises:
        InternalCapError: when the chain does not stabilize within mu * N steps
    """
    start_time = time.time()
    current = full_lattice(ctx)
    for step in range(ctx.dimension + 1):
        residuals = _nabla_residuals(current, current.shifted(), ctx)
        kernel = left_kernel(residuals, ctx.dimension, ctx.domain)
        if len(kernel) == current.rank:
            current.steps = step
            LOGGER.info(
                "G saturated after %d steps at rank %d (%.2f seconds)",
                step,
                current.rank,
                time.time() - start_time,
            )
            tail = [ctx.basis_class(i, j) for j in range(ctx.n, ctx.truncation) for i in range(ctx.mu)]
            current.bn_contained = all(current.contains(x) for x in tail)
            if not current.bn_contained:
                LOGGER.warning("b^n E is not contained in G at truncation %d", ctx.truncation)
            return current
        current = Lattice.from_rows([_combine_rows(current, c, ctx) for c in kernel], ctx)
    raise InternalCapError(f"G did not stabilize within {ctx.dimension} steps")


def confirm_truncation(ctx, G):
    """
    Recompute G at N + 2 and compare the blocks b^0 .. b^k*.

    Returns:
        dict: {"blocks": compared block count, "stable": bool}
    """
    wider = ctx.with_truncation(ctx.truncation + 2)
    G_wider = saturate_G(wider)
    blocks = min(G.steps, ctx.truncation - 1) + 1
    stable = G.truncated_rows(blocks) == G_wider.truncated_rows(blocks)
    LOGGER.info("Truncation check at N=%d over %d blocks: %s", wider.truncation, blocks, stable)
    return {"blocks": blocks, "stable": stable}


@dataclass(frozen=True)
class HorizontalDirection:
    """A standard monomial v with b^-1 nabla(v) = c(t) v mod bG."""

    monomial: tuple
    coefficient: object
    direction: BClass

    @property
    def ode(self):
        return f"phi' + ({render_ratfunc(self.coefficient)})*phi = 0"


def kernel_nabla_mod_b(ctx, G):
    """
    The b^-1 nabla-invariant lines of G/bG spanned by single standard monomials.

    Args:
        ctx (FamilyContext): The family
        G (Lattice): Output of saturate_G

    Returns:
        list: HorizontalDirection entries in staircase order
    """
    directions = []
    if G.rank == 0:
        return directions
    bG = G.shifted()
    for i, monom in enumerate(ctx.monomials):
        v = ctx.basis_class(i)
        if not G.contains(v):
            continue
        try:
            image = b_inv_nabla(v, ctx)
        except NotInPError:
            continue
        head = image.block(0)
        if any(value for k, value in enumerate(head) if k != i):
            continue
        c = head[i]
        if bG.contains(image - v.scale(c)):
            directions.append(HorizontalDirection(monom, c, v))
    return directions


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    passed: bool
    lhs: BClass
    rhs: BClass


def verify_extension_example2(ctx):
    """
    Class identities behind the extension E_1 = E + K eps, eps = b^-1 [x^2 y^2],
    for f = x^4 + y^4 + t x^2 y^2.

    Raises:
        ContextMismatchError: the family does not have two variables
    """
    if ctx.n != 2 or ctx.truncation < 3:
        raise ContextMismatchError("the extension check needs a two-variable family with N >= 3")
    domain, t = ctx.domain, ctx.t
    one = reduce(ctx.monomial((0, 0)), ctx)
    q = reduce(ctx.monomial((2, 2)), ctx)
    x4y4 = reduce(ctx.monomial((4, 4)), ctx)
    y4 = reduce(ctx.monomial((0, 4)), ctx)
    four_minus_t2 = domain(4) - t ** 2
    half = domain(1) / domain(2)

    checks = []

    def check(name, lhs, rhs):
        checks.append(IdentityCheck(name, lhs == rhs, lhs, rhs))

    check("a(x^2y^2) = 3/2 b(x^2y^2)", a_apply(q, ctx), q.shift(1).scale(domain(3) / domain(2)))
    check(
        "2(4-t^2) x^4y^4 = b(2 y^4 - 3t x^2y^2)",
        x4y4.scale(2 * four_minus_t2),
        (y4.scale(domain(2)) - q.scale(3 * t)).shift(1),
    )
    check(
        "2(4-t^2) x^4y^4 = b(-4t x^2y^2 + 1/2 b(1))",
        x4y4.scale(2 * four_minus_t2),
        (q.scale(-4 * t) + one.shift(1).scale(half)).shift(1),
    )
    # b(a eps) = a(b eps) - b^2 eps with b eps = [x^2y^2]
    check("a eps = 1/2 b eps", a_apply(q, ctx) - q.shift(1), q.shift(1).scale(half))
    # b nabla(eps) = nabla(b eps)
    check(
        "b^-1 nabla(eps) = 2t/(4-t^2) eps - 1/(4(4-t^2)) 1",
        nabla(q, ctx),
        q.shift(1).scale(2 * t / four_minus_t2) - one.shift(2).scale(domain(1) / (4 * four_minus_t2)),
    )
    check("b^-1 nabla(1) = -eps", nabla(one, ctx), -q)
    check("a 1 = 1/2 b 1", a_apply(one, ctx), one.shift(1).scale(half))
    return checks

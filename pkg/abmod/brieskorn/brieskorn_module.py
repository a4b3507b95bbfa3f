"""The Brieskorn module E of a family f(x, t), truncated at b^N.

E is free over K[[b]] on the standard monomials of J_/(f); a class is stored as
its coordinates on the K-basis b^j * m_i, block by block (b-power major).
Reduction of an n-form g dx uses g = NF(g) + sum h_i df/dx_i, which gives
[g dx] = [NF(g) dx] + b [div(h) dx].
"""

import functools
import logging
import time
from dataclasses import dataclass

from abmod.core.errors import (
    InternalCapError,
    NonIsolatedError,
    NotInImageError,
    NotInPError,
    UnsupportedFamilyError,
)
from abmod.core.exact_algebra import monomial_poly, parameter_generator, partial_derivative, t_derivative
from abmod.ideals.groebner import DEFAULT_SPAIR_BUDGET, Ideal, buchberger, divide, localize, membership, staircase
from abmod.utils.linear_algebra import rank

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class NForm:
    """The relative n-form coefficient * dx_1 ^ ... ^ dx_n."""

    coefficient: object


@dataclass(frozen=True)
class BClass:
    """An element of E mod b^N: coordinate j * mu + i belongs to b^j * m_i."""

    coords: tuple
    mu: int
    truncation: int

    @classmethod
    def zero(cls, domain, mu, truncation):
        return cls((domain.zero,) * (mu * truncation), mu, truncation)

    def coefficient(self, i, j):
        return self.coords[j * self.mu + i]

    def block(self, j):
        return self.coords[j * self.mu:(j + 1) * self.mu]

    def is_zero(self):
        return not any(self.coords)

    def _same_shape(self, other):
        if (self.mu, self.truncation) != (other.mu, other.truncation):
            raise ValueError("classes belong to different truncated modules")

    def __add__(self, other):
        self._same_shape(other)
        return BClass(tuple(a + b for a, b in zip(self.coords, other.coords)), self.mu, self.truncation)

    def __sub__(self, other):
        self._same_shape(other)
        return BClass(tuple(a - b for a, b in zip(self.coords, other.coords)), self.mu, self.truncation)

    def __neg__(self):
        return BClass(tuple(-a for a in self.coords), self.mu, self.truncation)

    def scale(self, scalar):
        return BClass(tuple(scalar * a for a in self.coords), self.mu, self.truncation)

    def __rmul__(self, scalar):
        return self.scale(scalar)

    def shift(self, k=1):
        """Multiply by b^k, dropping what falls beyond b^(N-1)."""
        offset = k * self.mu
        zero = self.coords[0] - self.coords[0]
        coords = (zero,) * offset + self.coords[: len(self.coords) - offset]
        return BClass(coords, self.mu, self.truncation)

    def truncated(self, blocks):
        """Zero every block from ``blocks`` on."""
        cut = blocks * self.mu
        zero = self.coords[0] - self.coords[0]
        return BClass(self.coords[:cut] + (zero,) * (len(self.coords) - cut), self.mu, self.truncation)


class FamilyContext:
    """A family f(x, t) with its relative Jacobian ideal at the origin, staircase and truncation order.

    When every critical point of f over K sits at the origin the global
    Jacobian quotient is used. Otherwise the context switches to the origin
    component J + m^(s+1) (``local_order`` = s) and reduction drops forms in
    m^((N - j)(s + 1)) at level b^j, which lie in b^N E.
    """

    def __init__(self, f, truncation=8, budget=None):
        """
        Args:
            f (MPoly): The family as a polynomial over K = Q(t)
            truncation (int): Truncation order N of the b-adic filtration
            budget (int): S-pair budget for the Groebner bases of J_/(f)

        Raises:
            UnsupportedFamilyError: f(0) != 0, a missing variable, a non-isolated
                singularity, or no critical point at the origin
        """
        if truncation < 1:
            raise ValueError("truncation order must be at least 1")
        self.f = f
        self.ring = f.ring
        self.domain = f.ring.domain
        self.n = f.ring.ngens
        self.truncation = truncation
        self.budget = budget or DEFAULT_SPAIR_BUDGET
        self.t = parameter_generator(f.ring)
        if f.get(f.ring.zero_monom):
            raise UnsupportedFamilyError("f must vanish at the origin (f in the maximal ideal)")

        start_time = time.time()
        self.partials = tuple(partial_derivative(f, i) for i in range(self.n))
        if not all(self.partials):
            raise UnsupportedFamilyError("f does not depend on every variable; the singularity is not isolated")
        self.jacobian = Ideal(self.partials, f.ring)
        global_gb = buchberger(self.jacobian, budget=self.budget)
        global_stairs = staircase(global_gb)
        try:
            local = localize(self.jacobian, budget=self.budget)
        except NonIsolatedError:
            raise UnsupportedFamilyError(
                "the relative Jacobian ideal is not m-primary over Q(t); "
                "the singularity is not isolated"
            ) from None
        if global_stairs.is_finite and len(global_stairs) == local.dimension:
            self.gb, self.local_order = global_gb, None
        else:
            self.gb, self.local_order = local.basis, local.order
            LOGGER.info(
                "f has critical points away from the origin; using J + m^%d", local.order + 1
            )
        self.staircase = staircase(self.gb)
        self.monomials = self.staircase.standard_monomials
        self.mu = len(self.monomials)
        if self.mu == 0:
            raise UnsupportedFamilyError("the origin is not a critical point of f over Q(t)")
        self._position = {monom: i for i, monom in enumerate(self.monomials)}
        self._expressions = {}
        self.dfdt = partial_derivative(f, str(f.ring.domain.field.symbols[0]))
        self.bad_t = tuple(sorted(set(self.gb.bad_t) | set(global_gb.bad_t)))
        self.bad_factors = tuple(sorted(set(self.gb.bad_factors) | set(global_gb.bad_factors)))
        LOGGER.info(
            "Family context ready: mu=%d, N=%d, %d basis elements (%.2f seconds)",
            self.mu,
            truncation,
            len(self.gb.basis),
            time.time() - start_time,
        )

    @property
    def dimension(self):
        """K-dimension mu * N of the truncated module."""
        return self.mu * self.truncation

    def position(self, monom):
        try:
            return self._position[monom]
        except KeyError:
            raise InternalCapError(f"normal form produced the non-standard monomial {monom}") from None

    def zero(self):
        return BClass.zero(self.domain, self.mu, self.truncation)

    def basis_class(self, i, j=0):
        """The basis vector b^j * m_i."""
        coords = [self.domain.zero] * self.dimension
        coords[j * self.mu + i] = self.domain.one
        return BClass(tuple(coords), self.mu, self.truncation)

    def monomial(self, monom, coefficient=1):
        return monomial_poly(self.ring, monom, coefficient)

    def negligible_order(self, level):
        """Forms in m^k with k at least this order vanish in E mod b^(N - level)."""
        if self.local_order is None:
            return None
        return (self.truncation - level) * (self.local_order + 1)

    def monomial_expression(self, monom):
        """
        For a monomial of degree ``local_order``: (h, rho) with
        x^monom = sum h_i df/dx_i + rho and rho in m^(local_order + 1).
        """
        if monom not in self._expressions:
            result = membership(self.monomial(monom), self.gb)
            if not result:
                raise InternalCapError(f"monomial {monom} is not in the origin component of J_/(f)")
            cofactors = result.certificate.cofactors
            rho = self.ring.zero
            for cofactor, generator in zip(cofactors[self.n:], self.gb.origin.generators[self.n:]):
                if cofactor:
                    rho += cofactor * generator
            self._expressions[monom] = (cofactors[: self.n], rho)
        return self._expressions[monom]

    def with_truncation(self, truncation):
        """The same family at another truncation order."""
        return FamilyContext(self.f, truncation=truncation, budget=self.budget)

    @functools.cached_property
    def a_images(self):
        """a(m_i) = [f * m_i dx] for every standard monomial."""
        return tuple(reduce(self.f * self.monomial(m), self) for m in self.monomials)

    @functools.cached_property
    def nabla_images(self):
        """nabla(m_i) = [-(df/dt) * m_i dx] for every standard monomial."""
        return tuple(reduce(-self.dfdt * self.monomial(m), self) for m in self.monomials)


def _split_monomial(monom, degree):
    """Write monom = head * tail with head of the given degree, filling from the first variable."""
    head = []
    remaining = degree
    for e in monom:
        take = min(e, remaining)
        head.append(take)
        remaining -= take
    return tuple(head), tuple(e - h for e, h in zip(monom, head))


def _expand_locally(remainder, ctx, bound):
    """
    Cofactors h with remainder = sum h_i df/dx_i mod m^bound, for remainder in
    m^(local_order + 1). Each round raises the order of what is left by one.
    """
    h = [ctx.ring.zero] * ctx.n
    pending = remainder
    while pending:
        left = ctx.ring.zero
        for monom, coefficient in pending.items():
            if sum(monom) >= bound:
                continue
            head, tail = _split_monomial(monom, ctx.local_order)
            shift = monomial_poly(ctx.ring, tail, coefficient)
            cofactors, rho = ctx.monomial_expression(head)
            for i, cofactor in enumerate(cofactors):
                if cofactor:
                    h[i] += shift * cofactor
            left += shift * rho
        pending = left
    return h


def _drop_order(poly, bound):
    return poly.ring.from_dict({m: c for m, c in poly.items() if sum(m) < bound})


def reduce(form, ctx):
    """
    Coordinates of the class of g dx in E mod b^N.

    Args:
        form (NForm|MPoly): The form, or its coefficient g
        ctx (FamilyContext): The family

    Returns:
        BClass: the reduced class
    """
    g = form.coefficient if isinstance(form, NForm) else form
    coords = [ctx.domain.zero] * ctx.dimension
    current = g
    for j in range(ctx.truncation):
        bound = ctx.negligible_order(j)
        if bound is not None:
            current = _drop_order(current, bound)
        if not current:
            break
        normal_form, cofactors = divide(current, ctx.gb)
        for monom, coefficient in normal_form.items():
            coords[j * ctx.mu + ctx.position(monom)] += coefficient
        lifted = ctx.gb.lift(cofactors)
        h = list(lifted[: ctx.n])
        if bound is not None:
            remainder = ctx.ring.zero
            for cofactor, generator in zip(lifted[ctx.n:], ctx.gb.origin.generators[ctx.n:]):
                if cofactor:
                    remainder += cofactor * generator
            for i, extra in enumerate(_expand_locally(remainder, ctx, bound)):
                h[i] += extra
        current = ctx.ring.zero
        for i, h_i in enumerate(h):
            if h_i:
                current += h_i.diff(ctx.ring.gens[i])
    return BClass(tuple(coords), ctx.mu, ctx.truncation)


def _accumulate(target, source, scalar, shift, mu):
    offset = shift * mu
    for k in range(len(source) - offset):
        if source[k]:
            target[k + offset] += scalar * source[k]


def b_apply(x):
    """Multiplication by b."""
    return x.shift(1)


def a_apply(x, ctx):
    """
    The operator a (multiplication by f), extended from a(m_i) by a b^j = b^j a + j b^(j+1).
    """
    mu = ctx.mu
    coords = [ctx.domain.zero] * ctx.dimension
    images = ctx.a_images
    for j in range(ctx.truncation):
        for i in range(mu):
            c = x.coords[j * mu + i]
            if not c:
                continue
            _accumulate(coords, images[i].coords, c, j, mu)
            if j and j + 1 < ctx.truncation:
                coords[(j + 1) * mu + i] += j * c
    return BClass(tuple(coords), mu, ctx.truncation)


def b_inverse(x):
    """
    Inverse of b on its image, defined mod b^(N-1).

    Raises:
        NotInImageError: the b^0 block of x is nonzero
    """
    if any(x.block(0)):
        raise NotInImageError("class has a nonzero b^0 part and is not in the image of b")
    mu = x.mu
    zero = x.coords[0] - x.coords[0]
    return BClass(x.coords[mu:] + (zero,) * mu, mu, x.truncation)


def nabla(x, ctx):
    """
    The connection: nabla(c b^j m_i) = c b^j nabla(m_i) + c' b^(j+1) m_i.
    """
    mu = ctx.mu
    coords = [ctx.domain.zero] * ctx.dimension
    images = ctx.nabla_images
    for j in range(ctx.truncation):
        for i in range(mu):
            c = x.coords[j * mu + i]
            if not c:
                continue
            _accumulate(coords, images[i].coords, c, j, mu)
            if j + 1 < ctx.truncation:
                derivative = t_derivative(c)
                if derivative:
                    coords[(j + 1) * mu + i] += derivative
    return BClass(tuple(coords), mu, ctx.truncation)


def b_inv_nabla(x, ctx):
    """
    b^-1 nabla on P.

    Raises:
        NotInPError: nabla(x) has a nonzero b^0 part
    """
    image = nabla(x, ctx)
    if any(image.block(0)):
        raise NotInPError("class is not in P: its nabla is not divisible by b")
    return b_inverse(image)


def nabla_power(x, ctx, power):
    for _ in range(power):
        x = nabla(x, ctx)
    return x


def operator_matrix(op, ctx):
    """
    Matrix of a or nabla on the K-basis b^j m_i.

    Column k holds the coordinates of op(e_k); for nabla the basis vectors have
    constant coefficients, so only the K-linear part appears.

    Args:
        op (str): "a" or "nabla"
        ctx (FamilyContext): The family

    Returns:
        tuple: rows of the (mu N) x (mu N) matrix
    """
    apply = {"a": a_apply, "nabla": nabla}.get(op)
    if apply is None:
        raise ValueError(f"unknown operator '{op}' (use a or nabla)")
    columns = [
        apply(ctx.basis_class(i, j), ctx).coords
        for j in range(ctx.truncation)
        for i in range(ctx.mu)
    ]
    size = ctx.dimension
    return tuple(tuple(columns[col][row] for col in range(size)) for row in range(size))


def operator_blocks(op, ctx):
    """
    The b-blocks of op on the b^0 basis vectors: block j is the mu x mu matrix
    whose column i holds the b^j part of op(m_i).
    """
    images = ctx.a_images if op == "a" else ctx.nabla_images
    return tuple(
        tuple(tuple(images[i].coefficient(row, j) for i in range(ctx.mu)) for row in range(ctx.mu))
        for j in range(ctx.truncation)
    )


def is_monomial_basis(ctx, monomials):
    """True when the classes of the given monomials form a K-basis of E/bE."""
    if len(monomials) != ctx.mu:
        return False
    rows = [reduce(ctx.monomial(m), ctx).block(0) for m in monomials]
    return rank(rows, ctx.mu, ctx.domain) == ctx.mu

import itertools
import math
import random

import pytest

from abmod.brieskorn.brieskorn_module import (
    FamilyContext,
    NForm,
    a_apply,
    b_apply,
    b_inv_nabla,
    b_inverse,
    is_monomial_basis,
    nabla,
    nabla_power,
    operator_blocks,
    operator_matrix,
    reduce,
)
from abmod.core.errors import NotInImageError, NotInPError, UnsupportedFamilyError
from abmod.core.exact_algebra import (
    MonomialOrder,
    parameter_generator,
    polynomial_ring,
    t_derivative,
)
from abmod.utils.linear_algebra import left_kernel


def _family(text_builder, variables=("x", "y"), order=None):
    R = polynomial_ring(list(variables), order=order)
    return text_builder(R.gens, parameter_generator(R))


def _example2(order=None):
    return _family(lambda g, t: g[0] ** 4 + g[1] ** 4 + g[0] ** 2 * g[1] ** 2 * t, order=order)


@pytest.fixture(scope="module")
def ctx():
    return FamilyContext(_example2(), truncation=4)


@pytest.fixture(scope="module")
def small_ctx():
    """x^3 + y^3 + t x^2 y, mu = 4."""
    return FamilyContext(_family(lambda g, t: g[0] ** 3 + g[1] ** 3 + g[0] ** 2 * g[1] * t), truncation=3)


def _random_class(ctx, rng, support=3):
    t = ctx.t
    x = ctx.zero()
    for _ in range(support):
        i = rng.randrange(ctx.mu)
        j = rng.randrange(ctx.truncation)
        coefficient = ctx.domain(rng.randint(-3, 3)) + t * rng.randint(-2, 2)
        x = x + ctx.basis_class(i, j).scale(coefficient)
    return x


def _random_poly(R, rng, degree=3, terms=3):
    p = R.zero
    for _ in range(terms):
        exponents = [0] * R.ngens
        for _ in range(rng.randint(0, degree)):
            exponents[rng.randrange(R.ngens)] += 1
        p += R.term_new(tuple(exponents), R.domain(rng.randint(-4, 4)))
    return p


def test_context_shape(ctx):
    assert ctx.mu == 9
    assert ctx.n == 2
    assert ctx.dimension == 36
    assert ctx.local_order is None
    assert ctx.dfdt == ctx.monomial((2, 2))


def test_unsupported_families():
    with pytest.raises(UnsupportedFamilyError):
        FamilyContext(_family(lambda g, t: g[0] ** 2 + g[1] ** 2 + 1))
    with pytest.raises(UnsupportedFamilyError):
        FamilyContext(_family(lambda g, t: g[0] ** 2))
    with pytest.raises(UnsupportedFamilyError):
        FamilyContext(_family(lambda g, t: g[0] ** 2 + g[1] ** 2 + g[0] * t))


def test_local_mode_for_critical_points_away_from_origin():
    """x^4 + y^2 + t x^3 has a second critical point at x = -3t/4; only the origin counts."""
    ctx = FamilyContext(_family(lambda g, t: g[0] ** 4 + g[1] ** 2 + g[0] ** 3 * t), truncation=3)
    assert ctx.local_order is not None
    assert ctx.mu == 2
    x = ctx.ring.gens[0]
    # f_x = x^2 (4x + 3t), so x^2 lies in the local Jacobian ideal
    assert reduce(x**2, ctx).block(0) == ctx.zero().block(0)


def test_reduce_of_jacobian_multiples(ctx):
    fx, fy = ctx.partials
    x, y = ctx.ring.gens
    assert reduce(fx, ctx).is_zero()
    assert reduce(NForm(fy), ctx).is_zero()
    one = reduce(ctx.monomial((0, 0)), ctx)
    assert reduce(x * fx, ctx) == b_apply(one)
    assert reduce(x * fx + y * fy, ctx) == b_apply(one).scale(ctx.domain(2))


def test_reduce_identity_under_orders():
    """[p f_x + q f_y] = b [p_x + q_y], whichever monomial order builds the staircase."""
    rng = random.Random(5)
    contexts = [
        FamilyContext(_example2(), truncation=3),
        FamilyContext(_example2(MonomialOrder("grlex", (1, 0))), truncation=3),
    ]
    for ctx in contexts:
        fx, fy = ctx.partials
        x, y = ctx.ring.gens
        for _ in range(25):
            p, q = _random_poly(ctx.ring, rng), _random_poly(ctx.ring, rng)
            lhs = reduce(p * fx + q * fy, ctx)
            rhs = b_apply(reduce(p.diff(x) + q.diff(y), ctx))
            assert lhs == rhs


def test_reduce_is_linear(small_ctx):
    rng = random.Random(9)
    for _ in range(50):
        p, q = _random_poly(small_ctx.ring, rng, 5), _random_poly(small_ctx.ring, rng, 5)
        c = small_ctx.domain(rng.randint(1, 5)) + small_ctx.t
        assert reduce(p * c + q, small_ctx) == reduce(p, small_ctx).scale(c) + reduce(q, small_ctx)


def test_commutation_relation(ctx):
    """(ab - ba)(x) = b^2 x."""
    rng = random.Random(1)
    for _ in range(50):
        x = _random_class(ctx, rng)
        assert a_apply(b_apply(x), ctx) - b_apply(a_apply(x, ctx)) == b_apply(b_apply(x))


def test_a_on_unit_is_half_b(ctx):
    one = reduce(ctx.monomial((0, 0)), ctx)
    half = ctx.domain(1) / ctx.domain(2)
    assert a_apply(one, ctx) == b_apply(one).scale(half)


def test_nabla_leibniz_and_b_commutation(small_ctx):
    rng = random.Random(2)
    t = small_ctx.t
    for _ in range(50):
        x = _random_class(small_ctx, rng)
        phi = t**2 * rng.randint(1, 3) + 1 / (t + rng.randint(1, 4))
        assert nabla(x.scale(phi), small_ctx) == nabla(x, small_ctx).scale(phi) + b_apply(x).scale(
            t_derivative(phi)
        )
        assert nabla(b_apply(x), small_ctx) == b_apply(nabla(x, small_ctx))


def test_higher_leibniz_formula(small_ctx):
    """nabla^v(phi x) = sum_j C(v, j) phi^(j) b^j nabla^(v-j)(x) for v <= 3."""
    rng = random.Random(4)
    t = small_ctx.t
    for case in range(50):
        x = _random_class(small_ctx, rng, support=2)
        phi = t ** rng.randint(1, 3) + rng.randint(-2, 2) * t / (t + 3)
        nu = case % 3 + 1
        derivatives = [phi]
        for _ in range(nu):
            derivatives.append(t_derivative(derivatives[-1]))
        expected = small_ctx.zero()
        for j in range(nu + 1):
            term = nabla_power(x, small_ctx, nu - j).shift(j).scale(derivatives[j] * math.comb(nu, j))
            expected = expected + term
        assert nabla_power(x.scale(phi), small_ctx, nu) == expected


def test_b_injectivity(ctx):
    rng = random.Random(6)
    for _ in range(50):
        x = _random_class(ctx, rng)
        assert b_inverse(b_apply(x)) == x.truncated(ctx.truncation - 1)
    with pytest.raises(NotInImageError):
        b_inverse(ctx.basis_class(0))


def test_example2_connection(ctx):
    """nabla(m) = -[x^2 y^2 m] and b^-1 nabla(x) = t/(2(4 - t^2)) x."""
    x, y = ctx.ring.gens
    t = ctx.t
    for monom in ctx.monomials:
        m = reduce(ctx.monomial(monom), ctx)
        assert nabla(m, ctx) == reduce(-(x**2 * y**2) * ctx.monomial(monom), ctx)
    v = reduce(x, ctx)
    assert b_inv_nabla(v, ctx) == v.scale(t / (2 * (4 - t**2)))
    with pytest.raises(NotInPError):
        b_inv_nabla(reduce(ctx.monomial((0, 0)), ctx), ctx)


def test_operator_matrix_agrees_with_operators(small_ctx):
    for op, apply in (("a", a_apply), ("nabla", nabla)):
        matrix = operator_matrix(op, small_ctx)
        assert len(matrix) == small_ctx.dimension
        for column in range(small_ctx.dimension):
            i, j = column % small_ctx.mu, column // small_ctx.mu
            image = apply(small_ctx.basis_class(i, j), small_ctx)
            assert tuple(row[column] for row in matrix) == image.coords
    blocks = operator_blocks("a", small_ctx)
    assert len(blocks) == small_ctx.truncation
    assert all(len(block) == small_ctx.mu for block in blocks)
    with pytest.raises(ValueError):
        operator_matrix("b", small_ctx)


def test_monomial_basis_check(ctx):
    assert is_monomial_basis(ctx, [(0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (1, 1), (2, 1), (1, 2), (2, 2)])
    assert not is_monomial_basis(ctx, [(0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (1, 1), (2, 1), (1, 2), (3, 0)])
    assert not is_monomial_basis(ctx, [(0, 0)])


def test_truncation_change_keeps_low_blocks(ctx):
    wider = ctx.with_truncation(6)
    assert wider.mu == ctx.mu
    x = ctx.ring.gens[0]
    low = reduce(x**6, ctx)
    high = reduce(x**6, wider)
    for j in range(ctx.truncation):
        assert low.block(j) == high.block(j)


def _cubic_surface_context(order):
    R = polynomial_ring(["x", "y", "z"], order=order)
    g = dict(zip((str(s) for s in R.symbols), R.gens))
    t = parameter_generator(R)
    f = g["x"] ** 3 + g["y"] ** 3 + g["z"] ** 3 + g["x"] * g["y"] * g["z"] * t
    return FamilyContext(f, truncation=2), g


def test_classes_agree_across_orders_and_precedences():
    """Linear relations among fixed forms in E mod b^N do not depend on the staircase."""
    rng = random.Random(8)
    terms = []
    for _ in range(20):
        exponents = {name: 0 for name in "xyz"}
        for _ in range(rng.randint(0, 5)):
            exponents[rng.choice("xyz")] += 1
        terms.append((rng.randint(1, 4), rng.randint(0, 1), exponents))

    relations = []
    for kind in ("grevlex", "grlex"):
        for precedence in itertools.permutations(range(3)):
            ctx, g = _cubic_surface_context(MonomialOrder(kind, precedence))
            assert ctx.mu == 8
            classes = []
            for constant, power, exponents in terms:
                p = ctx.ring.one * (constant + ctx.t**power)
                for name, e in exponents.items():
                    p *= g[name] ** e
                classes.append(reduce(p, ctx).coords)
            relations.append(left_kernel(classes, ctx.dimension, ctx.domain))
    assert len(relations) == 12
    assert relations[0]
    assert all(r == relations[0] for r in relations)

"""Re-derivation of the worked examples: every displayed identity is one fixture row."""

from fractions import Fraction

import pytest

from abmod.brieskorn.brieskorn_module import FamilyContext
from abmod.core.errors import AbmodError
from abmod.services import paper_fixtures
from abmod.services.paper_fixtures import (
    EXAMPLE2_TRUNCATION,
    EXAMPLE3_TRUNCATION,
    FixtureRow,
    example1_rows,
    example2_polynomial,
    example2_rows,
    example3_polynomial,
    example3_rows,
    fixtures_for,
)


def _failures(rows):
    return [f"[{row.example}] {row.name} {row.detail}".strip() for row in rows if not row.passed]


@pytest.fixture(scope="module")
def example2_ctx():
    return FamilyContext(example2_polynomial(), truncation=EXAMPLE2_TRUNCATION)


def test_example2_identities(example2_ctx):
    rows = example2_rows(example2_ctx)
    assert _failures(rows) == []
    names = [row.name for row in rows]
    assert "2(4-t^2) x^3y = 2y f_x - tx f_y" in names
    assert "2(4-t^2) x^3y^2 = 2y^2 f_x - txy f_y" in names
    assert "G = M" in names
    assert len(names) == len(set(names))


def test_example2_context(example2_ctx):
    assert example2_ctx.mu == 9
    assert {Fraction(-2), Fraction(2)} <= set(example2_ctx.bad_t)


def test_example1_rows():
    assert _failures(example1_rows()) == []


@pytest.mark.parametrize("p, q, r", [(3, 4, 5), (4, 4, 4)])
def test_example3_with_lattice(p, q, r):
    assert EXAMPLE3_TRUNCATION >= 4
    ctx = FamilyContext(example3_polynomial(p, q, r), truncation=EXAMPLE3_TRUNCATION)
    assert ctx.mu == 11
    assert ctx.local_order is not None
    rows = example3_rows(ctx, p, q, r)
    assert _failures(rows) == []
    names = [row.name for row in rows]
    assert "f - (1 - rho) t alpha in mJ" in names
    assert "estim k=1" in names
    assert "G = mE" in names
    assert "b^n E in G" in names


def test_example3_rows_without_lattice():
    ctx = FamilyContext(example3_polynomial(4, 4, 4), truncation=2)
    rows = example3_rows(ctx, 4, 4, 4, lattice=False)
    assert _failures(rows) == []
    assert "estim k=1" not in [row.name for row in rows]


def test_fixtures_only_apply_to_the_worked_families():
    R = example2_polynomial().ring
    x, y = R.gens
    other = FamilyContext(x**3 + y**3 + x**2 * y * R.domain.field.gens[0], truncation=2)
    assert fixtures_for(other) == []


def test_verification_turns_errors_into_failed_rows(monkeypatch):
    def broken(*args, **kwargs):
        raise AbmodError("budget exhausted")

    monkeypatch.setattr(paper_fixtures, "FamilyContext", lambda *args, **kwargs: None)
    monkeypatch.setattr(paper_fixtures, "example2_rows", lambda ctx: [FixtureRow("2", "stub", True)])
    monkeypatch.setattr(paper_fixtures, "example1_rows", broken)
    monkeypatch.setattr(paper_fixtures, "example3_rows", lambda ctx, p, q, r: [])
    rows = paper_fixtures.verify_paper_examples()
    assert rows[0] == FixtureRow("2", "stub", True)
    assert rows[1] == FixtureRow("1", "computation", False, "budget exhausted")
    assert len(rows) == 2


def test_fixture_row_serialization():
    assert FixtureRow("2", "relation", True).to_dict() == {"example": "2", "name": "relation", "passed": True}
    assert FixtureRow("1", "x", False, "why").to_dict()["detail"] == "why"

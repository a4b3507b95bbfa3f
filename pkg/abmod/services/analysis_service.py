"""Family analysis service: Groebner basis, Brieskorn matrices, lattices and criteria."""

import logging
import time
import traceback

from abmod.brieskorn.brieskorn_module import FamilyContext, operator_blocks, operator_matrix, reduce
from abmod.brieskorn.lattice import (
    compute_P,
    confirm_truncation,
    kernel_nabla_mod_b,
    m_power_lattice,
    saturate_G,
)
from abmod.config.analysis_config import AnalysisConfig
from abmod.core.errors import UsageError
from abmod.core.exact_algebra import render_monomial, render_ratfunc, render_rational
from abmod.criteria.criteria import (
    estim_criterion,
    euler_vector_field_check,
    g_equals_e_test,
    mu_constancy_probe,
    quasihomogeneous_detect,
    spectral_identity,
)
from abmod.services import paper_fixtures
from abmod.storage.report_storage import ReportStorage
from abmod.utils.family_format import FamilySpec, parse_family
from abmod.utils.report_rendering import render_bad_t, render_criterion, render_lattice, render_matrix

LOGGER = logging.getLogger(__name__)

OPERATORS = ("a", "nabla")


class AnalysisService:
    """Service for analysing a family f(x, t)."""

    def __init__(self, data_dir="data", mode=None):
        """
        Initialize the analysis service with its dependencies.

        Args:
            data_dir (str): Directory for stored reports
            mode (str): Optional preset passed to set_analysis_mode
        """
        self.config = AnalysisConfig()
        if mode:
            self.config.set_analysis_mode(mode)
        self.storage = ReportStorage(data_dir)

    def set_analysis_mode(self, mode):
        return self.config.set_analysis_mode(mode)

    def load_spec(self, family, overrides=None):
        """
        Resolve a family argument to a FamilySpec.

        Args:
            family (FamilySpec|str|bytes): A parsed spec or a family document
            overrides (dict): Option values that take precedence over the document

        Returns:
            FamilySpec: The validated spec
        """
        if isinstance(family, FamilySpec):
            spec = family
        elif isinstance(family, (str, bytes)):
            spec = parse_family(family, defaults=self.config.settings())
        else:
            raise UsageError("a family document is required")
        if overrides:
            spec = spec.replace(**overrides)
        return spec

    def build_context(self, spec):
        return FamilyContext(spec.polynomial(), truncation=spec.b_order, budget=self.config.spair_budget)

    def _error(self, exc):
        LOGGER.error("Analysis failed: %s", exc)
        return {
            "error": str(exc),
            "trace": traceback.format_exc(),
            "exit_code": getattr(exc, "exit_code", 3),
        }

    def _header(self, spec, ctx):
        return {
            "family": spec.to_dict(),
            "staircase": {
                "monomials": [render_monomial(m, ctx.ring.symbols) for m in ctx.monomials],
                "local_order": ctx.local_order,
            },
            "mu": ctx.mu,
            "bad_t": render_bad_t(ctx.bad_t, ctx.bad_factors),
        }

    def _matrices(self, ctx):
        return {
            op: {"blocks": [render_matrix(block) for block in operator_blocks(op, ctx)]}
            for op in OPERATORS
        }

    def _lattice_section(self, spec, ctx, G):
        """G with its comparisons, the truncation re-run and the horizontal lines."""
        section = render_lattice(G, ctx)
        section["equals M"] = G == m_power_lattice(ctx, 1)
        section["equals E"] = G.rank == ctx.dimension
        section["contains 1"] = G.contains(reduce(ctx.monomial((0,) * ctx.n), ctx))
        if self.config.confirm_truncation:
            section["truncation"] = confirm_truncation(ctx, G)
        if "horizontal" in spec.checks:
            section["horizontal"] = [
                {
                    "monomial": render_monomial(direction.monomial, ctx.ring.symbols),
                    "coefficient": render_ratfunc(direction.coefficient),
                    "ode": direction.ode,
                }
                for direction in kernel_nabla_mod_b(ctx, G)
            ]
        return section

    def _quasihomogeneous_section(self, ctx):
        weights = quasihomogeneous_detect(ctx.f)
        if weights is None:
            return {"weights": None}
        section = {
            "weights": [render_rational(w) for w in weights],
            "euler": euler_vector_field_check(ctx.f, weights),
        }
        if weights[-1] == 0:
            section["spectral_identity"] = render_criterion(spectral_identity(ctx, weights))
        return section

    def _criteria(self, spec, ctx):
        criteria = {}
        if "mu_probe" in spec.checks:
            criteria["mu_probe"] = render_criterion(mu_constancy_probe(ctx, spec.samples))
        if "g_equals_e" in spec.checks:
            criteria["g_equals_e"] = render_criterion(g_equals_e_test(ctx))
        if "estim" in spec.checks:
            criteria["estim"] = render_criterion(estim_criterion(ctx, self.config.estim_k))
        if "quasihomogeneous" in spec.checks:
            criteria["quasihomogeneous"] = self._quasihomogeneous_section(ctx)
        return criteria

    def build_report(self, spec, ctx):
        """
        Run the full pipeline on a prepared context.

        Returns:
            dict: JSON-safe report with the keys family, staircase, mu, bad_t,
                matrices, P, G, criteria and fixtures
        """
        report = self._header(spec, ctx)

        stage_time = time.time()
        report["matrices"] = self._matrices(ctx)
        LOGGER.info("Operator matrices completed in %.2f seconds", time.time() - stage_time)

        stage_time = time.time()
        report["P"] = render_lattice(compute_P(ctx), ctx)
        G = saturate_G(ctx)
        report["G"] = self._lattice_section(spec, ctx, G)
        LOGGER.info("Lattices completed in %.2f seconds", time.time() - stage_time)

        stage_time = time.time()
        report["criteria"] = self._criteria(spec, ctx)
        LOGGER.info("Criteria completed in %.2f seconds", time.time() - stage_time)

        report["fixtures"] = [row.to_dict() for row in paper_fixtures.fixtures_for(ctx, G)]
        return report

    def analyze(self, family, overrides=None, out=None):
        """
        Analyze a family and optionally save the report.

        Args:
            family (FamilySpec|str|bytes): The family
            overrides (dict): Option overrides
            out (str): Report name or path to save to

        Returns:
            tuple: (success, report or error_info)
        """
        try:
            start_time = time.time()
            spec = self.load_spec(family, overrides)
            LOGGER.info("Starting analysis of f = %s", spec.f)
            ctx = self.build_context(spec)
            report = self.build_report(spec, ctx)
            if out:
                path = self.storage.save_report(report, out)
                LOGGER.info("Report saved to %s", path)
            LOGGER.info("Analysis completed in %.2f seconds", time.time() - start_time)
            return True, report
        except Exception as e:
            return False, self._error(e)

    def basis(self, family, overrides=None):
        """
        Staircase, mu and bad parameter values of a family.

        Returns:
            tuple: (success, result or error_info)
        """
        try:
            spec = self.load_spec(family, overrides)
            ctx = self.build_context(spec)
            return True, self._header(spec, ctx)
        except Exception as e:
            return False, self._error(e)

    def matrix(self, family, op, overrides=None):
        """
        Full matrix of a or nabla on the K-basis b^j m_i of E mod b^N.

        Args:
            family (FamilySpec|str|bytes): The family
            op (str): "a" or "nabla"
            overrides (dict): Option overrides

        Returns:
            tuple: (success, result or error_info)
        """
        try:
            if op not in OPERATORS:
                raise UsageError(f"unknown operator '{op}' (use a or nabla)")
            start_time = time.time()
            spec = self.load_spec(family, overrides)
            ctx = self.build_context(spec)
            result = self._header(spec, ctx)
            result["op"] = op
            result["matrix"] = render_matrix(operator_matrix(op, ctx))
            LOGGER.info("Matrix of %s completed in %.2f seconds", op, time.time() - start_time)
            return True, result
        except Exception as e:
            return False, self._error(e)

    def lattice_g(self, family, overrides=None):
        """
        P and the saturated lattice G of a family.

        Returns:
            tuple: (success, result or error_info)
        """
        try:
            start_time = time.time()
            spec = self.load_spec(family, overrides)
            ctx = self.build_context(spec)
            result = self._header(spec, ctx)
            result["P"] = render_lattice(compute_P(ctx), ctx)
            result["G"] = self._lattice_section(spec, ctx, saturate_G(ctx))
            LOGGER.info("Lattice G completed in %.2f seconds", time.time() - start_time)
            return True, result
        except Exception as e:
            return False, self._error(e)

    def check_criterion(self, family, k, overrides=None):
        """
        The estim criterion m^k df/dt in m^(k+1) J_/(f) and, when it holds, M^k stability.

        Returns:
            tuple: (success, result or error_info)
        """
        try:
            spec = self.load_spec(family, overrides)
            ctx = self.build_context(spec)
            result = self._header(spec, ctx)
            result["criteria"] = {"estim": render_criterion(estim_criterion(ctx, k))}
            return True, result
        except Exception as e:
            return False, self._error(e)

    def verify_paper_examples(self):
        """
        Re-derive the worked-example identities.

        Returns:
            tuple: (success, {"fixtures": rows, "passed": bool}) where success is
                False only when the verification itself could not run
        """
        try:
            rows = paper_fixtures.verify_paper_examples(budget=self.config.spair_budget)
            return True, {
                "fixtures": [row.to_dict() for row in rows],
                "passed": all(row.passed for row in rows),
            }
        except Exception as e:
            return False, self._error(e)

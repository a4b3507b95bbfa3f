"""
Family Analysis API Routes

This module provides REST API endpoints over the analysis service.

API Workflow:
1. Use POST /api/basis to check that a family document parses and to see its staircase
2. Use POST /api/analyze for the full report (matrices, P, G, criteria, fixtures)
3. Use POST /api/matrix, /api/lattice_g or /api/check_criterion for a single part
4. Use GET /api/verify_paper_examples to re-derive the worked-example identities
5. Use POST /api/set_mode to switch between the quick, standard and full presets

Family documents travel as the "family" string of the request body, in the
same key = value format the command line reads from files.
"""

import os

from flask import Blueprint, jsonify, request

from abmod.config.analysis_config import AnalysisConfig
from abmod.services.analysis_service import OPERATORS, AnalysisService

# Create a blueprint for our API routes
api_bp = Blueprint("api", __name__, url_prefix="/api")

DATA_DIR = os.environ.get("ABMOD_DATA_DIR", "data")
analysis_service = AnalysisService(DATA_DIR)

OVERRIDE_KEYS = ("b_order", "order", "samples", "checks")
VALID_MODES = ("quick", "standard", "full")
STATUS_BY_EXIT_CODE = {1: 400, 2: 422}


def _overrides(data):
    return {key: data[key] for key in OVERRIDE_KEYS if key in data}


def _failure(result):
    status = STATUS_BY_EXIT_CODE.get(result.get("exit_code"), 500)
    return jsonify({"error": result["error"], "trace": result["trace"]}), status


def _respond(success, result):
    if success:
        return jsonify({"status": "success", **result})
    return _failure(result)


def _family_request():
    """The JSON body when it carries a family document, else None."""
    data = request.get_json(silent=True)
    if not data or not isinstance(data.get("family"), str):
        return None
    return data


@api_bp.route("/analyze", methods=["POST"])
def analyze():
    """
    Run the full analysis of a family.

    Request JSON format:
    {
        "family": "variables = x, y\\nf = x^4 + y^4 + t*x^2*y^2\\n",
        "b_order": 8,
        "samples": "0, 1, 3"
    }

    Response JSON format (success):
    {
        "status": "success",
        "family": {...},
        "staircase": {"monomials": ["1", "y", "x", ...], "local_order": null},
        "mu": 9,
        "bad_t": {"values": ["-2/1", "0/1", "2/1"], "factors": []},
        "matrices": {"a": {"blocks": [...]}, "nabla": {"blocks": [...]}},
        "P": {...},
        "G": {...},
        "criteria": {...},
        "fixtures": [...]
    }

    Response JSON format (error):
    {
        "error": "line 2, column 11: unexpected '+'",
        "trace": "Stack trace for debugging"
    }
    """
    try:
        data = _family_request()
        if data is None:
            return jsonify({"error": "Missing family parameter"}), 400

        return _respond(*analysis_service.analyze(data["family"], _overrides(data)))

    except Exception as e:
        import traceback

        return jsonify({"error": str(e), "trace": traceback.format_exc()}), 500


@api_bp.route("/basis", methods=["POST"])
def basis():
    """
    Staircase, Milnor number and bad parameter values of a family.

    Request JSON format:
    {
        "family": "variables = x, y\\nf = x^4 + y^4 + t*x^2*y^2\\n"
    }

    Response JSON format (success):
    {
        "status": "success",
        "family": {...},
        "staircase": {"monomials": [...], "local_order": null},
        "mu": 9,
        "bad_t": {"values": [...], "factors": [...]}
    }
    """
    try:
        data = _family_request()
        if data is None:
            return jsonify({"error": "Missing family parameter"}), 400

        return _respond(*analysis_service.basis(data["family"], _overrides(data)))

    except Exception as e:
        import traceback

        return jsonify({"error": str(e), "trace": traceback.format_exc()}), 500


@api_bp.route("/matrix", methods=["POST"])
def matrix():
    """
    Matrix of a or nabla on the basis b^j m_i of E mod b^N.

    Request JSON format:
    {
        "family": "...",
        "op": "nabla"
    }

    Response JSON format (success):
    {
        "status": "success",
        "op": "nabla",
        "matrix": [["0/1", ...], ...],
        ...
    }
    """
    try:
        data = _family_request()
        if data is None or "op" not in data:
            return jsonify({"error": "Missing required parameters"}), 400

        if data["op"] not in OPERATORS:
            return (
                jsonify({"error": f"Invalid op. Must be one of: {', '.join(OPERATORS)}"}),
                400,
            )

        return _respond(*analysis_service.matrix(data["family"], data["op"], _overrides(data)))

    except Exception as e:
        import traceback

        return jsonify({"error": str(e), "trace": traceback.format_exc()}), 500


@api_bp.route("/lattice_g", methods=["POST"])
def lattice_g():
    """
    The lattices P and G of a family.

    Request JSON format:
    {
        "family": "..."
    }

    Response JSON format (success):
    {
        "status": "success",
        "P": {"rank": ..., "generators": [...]},
        "G": {"rank": ..., "steps": ..., "equals M": true, "contains 1": false, ...},
        ...
    }
    """
    try:
        data = _family_request()
        if data is None:
            return jsonify({"error": "Missing family parameter"}), 400

        return _respond(*analysis_service.lattice_g(data["family"], _overrides(data)))

    except Exception as e:
        import traceback

        return jsonify({"error": str(e), "trace": traceback.format_exc()}), 500


@api_bp.route("/check_criterion", methods=["POST"])
def check_criterion():
    """
    The estim criterion at a given power k of the maximal ideal.

    Request JSON format:
    {
        "family": "...",
        "k": 1
    }

    Response JSON format (success):
    {
        "status": "success",
        "criteria": {"estim": {"holds": true, "details": {...}, "certificates": [...]}},
        ...
    }
    """
    try:
        data = _family_request()
        if data is None or "k" not in data:
            return jsonify({"error": "Missing required parameters"}), 400

        k = data["k"]
        if isinstance(k, bool) or not isinstance(k, int) or k < 0:
            return jsonify({"error": "k must be a non-negative integer"}), 400

        return _respond(*analysis_service.check_criterion(data["family"], k, _overrides(data)))

    except Exception as e:
        import traceback

        return jsonify({"error": str(e), "trace": traceback.format_exc()}), 500


@api_bp.route("/verify_paper_examples", methods=["GET"])
def verify_paper_examples():
    """
    Re-derive every worked-example identity.

    Response JSON format (success):
    {
        "status": "success",
        "passed": true,
        "fixtures": [{"example": "2", "name": "2(4-t^2) x^3y = 2y f_x - tx f_y", "passed": true}, ...]
    }
    """
    try:
        return _respond(*analysis_service.verify_paper_examples())

    except Exception as e:
        import traceback

        return jsonify({"error": str(e), "trace": traceback.format_exc()}), 500


@api_bp.route("/set_mode", methods=["POST"])
def set_mode():
    """
    Set the analysis preset.

    Request JSON format:
    {
        "mode": "standard"
    }

    Response JSON format (success):
    {
        "status": "success",
        "message": "Analysis mode set to: standard",
        "settings": {"b_order": 8, "checks": [...], ...}
    }
    """
    try:
        data = request.get_json(silent=True)

        if not data or "mode" not in data:
            return jsonify({"error": "Missing mode parameter"}), 400

        mode = data["mode"]
        if mode not in VALID_MODES:
            return (
                jsonify({"error": f"Invalid mode. Must be one of: {', '.join(VALID_MODES)}"}),
                400,
            )

        settings = analysis_service.set_analysis_mode(mode)

        return jsonify(
            {
                "status": "success",
                "message": f"Analysis mode set to: {mode}",
                "settings": settings,
            }
        )

    except Exception as e:
        return jsonify({"error": str(e)}), 500


@api_bp.route("/settings", methods=["GET"])
def settings():
    """Current analysis settings and the built-in defaults."""
    return jsonify(
        {
            "status": "success",
            "settings": analysis_service.config.settings(),
            "defaults": AnalysisConfig().settings(),
        }
    )

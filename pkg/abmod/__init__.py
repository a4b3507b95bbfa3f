"""Exact (a,b)-module computations for mu-constant families f(x, t)."""


def create_app():
    """Create the Flask application serving the /api analysis routes."""
    from flask import Flask, jsonify
    from flask_cors import CORS

    from abmod.routes.api import api_bp

    app = Flask(__name__)
    app.json.sort_keys = True
    CORS(app)
    app.register_blueprint(api_bp)

    @app.route("/healthcheck", methods=["GET"])
    def healthcheck():
        return jsonify({"status": "ok", "message": "Family analysis service is running"})

    @app.errorhandler(404)
    @app.errorhandler(405)
    def routing_error(error):
        return jsonify({"error": error.description}), error.code

    return app

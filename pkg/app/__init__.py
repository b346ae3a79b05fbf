from flask import Flask, jsonify

from .config import get_config
from .extensions import init_extensions
from .core.errors import AssoError
from .core.logging import log_event, setup_logging
from .blueprints.health import bp as health_bp
from .blueprints.registry import bp as registry_bp
from .blueprints.issuer import bp as issuer_bp
from .blueprints.verifier import bp as verifier_bp
from .blueprints.central import bp as central_bp


def _handle_asso_error(exc: AssoError):
    log_event("request_failed", error=exc.error_class, detail=exc.detail or None)
    return jsonify(exc.to_dict()), exc.http_status


def create_app(config_object=None, **overrides):
    app = Flask(__name__)
    app.config.from_object(config_object or get_config())
    app.config.update(overrides)
    app.config["JSON_AS_ASCII"] = False

    setup_logging(app)
    init_extensions(app)

    app.register_error_handler(AssoError, _handle_asso_error)

    app.register_blueprint(health_bp)
    app.register_blueprint(registry_bp)
    app.register_blueprint(issuer_bp)
    app.register_blueprint(verifier_bp)
    app.register_blueprint(central_bp)

    from .cli import cli

    app.cli.add_command(cli)

    return app

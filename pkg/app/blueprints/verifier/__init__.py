from flask import Blueprint

bp = Blueprint("verifier", __name__)

from . import routes  # noqa: E402,F401

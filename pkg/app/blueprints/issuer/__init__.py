from flask import Blueprint

bp = Blueprint("issuer", __name__)

from . import routes  # noqa: E402,F401

from flask import Blueprint

bp = Blueprint("central", __name__)

from . import routes  # noqa: E402,F401

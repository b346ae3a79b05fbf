from flask import Response

from app.blueprints import ENVELOPE_MIMETYPE
from app.extensions import get_params
from app.transport.envelope import seal

from . import bp


@bp.get("/healthz")
def healthz():
    return "ok", 200


@bp.get("/")
def root():
    return "ASSO ativo. Use /healthz, /params, /registry, /issuer, /verifiers/<id> e /central."


@bp.get("/params")
def params():
    return Response(seal(get_params()), mimetype=ENVELOPE_MIMETYPE)

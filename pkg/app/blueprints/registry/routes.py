from app.blueprints import envelope_response, read_envelope
from app.core.errors import RecordNotFound
from app.extensions import get_master_secret, get_params, get_registry, get_rng
from app.services.registration_service import ca_handle_registration
from app.transport.envelope import MessageType

from . import bp


@bp.post("/registry/registrations")
def registrations():
    pp = get_params()
    msk = get_master_secret()
    registration = read_envelope(MessageType.REGISTRATION_REQUEST, pp.group)
    credential = ca_handle_registration(pp, msk, get_registry(), registration, get_rng())
    return envelope_response(credential, status=201)


@bp.get("/registry/records/<identity>")
def record(identity):
    found = get_registry().get(identity)
    if found is None:
        raise RecordNotFound(identity)
    return envelope_response(found)

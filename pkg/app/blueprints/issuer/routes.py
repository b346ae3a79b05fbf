from flask import current_app

from app.blueprints import envelope_response, read_envelope
from app.crypto.credentials import Role
from app.extensions import get_enrollment_by_role, get_params, get_registry, get_rng
from app.services.issuing_service import default_text_policy, issuer_issue_ticket
from app.transport.envelope import MessageType

from . import bp


@bp.post("/issuer/tickets")
def tickets():
    settings = current_app.config
    pp = get_params()
    issuer = get_enrollment_by_role(Role.ISSUER)
    ticket_request = read_envelope(MessageType.TICKET_REQUEST, pp.group)
    policy = default_text_policy(
        settings.get("ASSO_TEXT_PREFIX", "asso/1"),
        settings.get("ASSO_TAG_VALIDITY_SECONDS", 86400),
    )
    _c_u, ticket = issuer_issue_ticket(pp, issuer, get_registry(), ticket_request, policy, get_rng())
    return envelope_response(ticket, status=201)

from app.blueprints import read_envelope
from app.crypto.credentials import Role
from app.extensions import get_enrollment_by_role, get_issuer_key, get_params, get_registry
from app.services.trace_service import cv_trace
from app.transport.envelope import MessageType

from . import bp


@bp.post("/central/traces")
def traces():
    pp = get_params()
    cv = get_enrollment_by_role(Role.CENTRAL_VERIFIER)
    trace_request = read_envelope(MessageType.TRACE_REQUEST, pp.group)

    report = cv_trace(pp, cv, get_registry(), trace_request, get_issuer_key())
    if not report.traced:
        return {"status": report.status.value, "reason": report.reason}, 403
    return {
        "status": report.status.value,
        "user_key": report.user_key.encode().hex(),
        "user_id": report.user_id,
        "services": report.service_ids,
    }, 200

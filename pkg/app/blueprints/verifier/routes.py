from app.blueprints import read_envelope
from app.core.errors import UnknownVerifier
from app.core.models import RejectReason
from app.extensions import get_cv_record, get_enrollment, get_issuer_key, get_ledger, get_params
from app.services.validation_service import verifier_validate
from app.transport.envelope import MessageType

from . import bp


@bp.post("/verifiers/<verifier_id>/showings")
def showings(verifier_id):
    pp = get_params()
    verifier = get_enrollment(verifier_id)
    if verifier is None:
        raise UnknownVerifier(verifier_id)
    showing = read_envelope(MessageType.SHOWING, pp.group)

    result = verifier_validate(
        pp,
        verifier.keys,
        get_ledger(verifier_id),
        showing.tag,
        showing.proof,
        get_issuer_key(),
        get_cv_record().y,
        verifier_id=verifier_id,
    )
    if result:
        return {"status": "accept", "verifier": verifier_id}, 200

    status = 409 if result.reason is RejectReason.DOUBLE_SPEND else 403
    return {"status": "reject", "verifier": verifier_id, "reason": result.reason.value}, status

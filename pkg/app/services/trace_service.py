"""Central-verifier trace: opens every pseudonym and tag key of a ticket."""
from app.core.logging import fingerprint_hex, log_event
from app.core.models import Enrollment, TicketWallet, TraceReport, TraceRequest, TraceStatus
from app.crypto.algebra import G1Elem, G2Elem, PublicParams, Scalar
from app.crypto.credentials import Role, bbs_verify_scalar
from app.repositories.registry_repo import RegistryRepository
from app.services.issuing_service import closure_serial, tag_hash_ok, tag_signature_ok
from app.services.validation_service import check_tag, user_show_tag

TRACE_CONTAINMENT = "containment"
TRACE_UNKNOWN_VERIFIER = "unknown_verifier"
TRACE_HASH = "hash"
TRACE_SIGNATURE = "signature"
TRACE_USER_KEY = "user_key_mismatch"
TRACE_CLOSURE_HASH = "closure_hash"
TRACE_CLOSURE_SIGNATURE = "closure_signature"

_TRACEABLE_ROLES = (Role.VERIFIER, Role.CENTRAL_VERIFIER)


def user_prepare_trace(
    pp: PublicParams,
    wallet: TicketWallet,
    x_u: Scalar,
    cv_id: str,
    y_cv: G1Elem,
    rng,
) -> TraceRequest:
    ticket = wallet.ticket
    showing = user_show_tag(pp, ticket, ticket.c_u, wallet.z_u, x_u, cv_id, y_cv, rng)
    return TraceRequest(entries=ticket.entries, closure=ticket.closure, showing=showing)


def _failed(reason: str) -> TraceReport:
    log_event("trace", status=TraceStatus.FAILED.value, reason=reason)
    return TraceReport.failed(reason)


def cv_trace(
    pp: PublicParams,
    cv: Enrollment,
    registry: RegistryRepository,
    request: TraceRequest,
    y_tilde_i: G2Elem,
) -> TraceReport:
    x_cv = cv.keys.x
    shown = request.showing.tag
    if not any(entry.tag == shown for entry in request.entries):
        return _failed(TRACE_CONTAINMENT)

    reason = check_tag(pp, shown, request.showing.proof, x_cv, y_tilde_i, cv.keys.y)
    if reason is not None:
        return _failed(reason.value)

    user_key = None
    services = []
    for index, entry in enumerate(request.entries):
        tag = entry.tag
        entry_user_key = tag.p / tag.q ** x_cv
        y_v = tag.k / tag.e_elem ** x_cv

        record = registry.find_by_key(y_v)
        if record is None or record.role not in _TRACEABLE_ROLES:
            return _failed(f"{TRACE_UNKNOWN_VERIFIER}:{index}")
        if not tag_hash_ok(pp, tag):
            return _failed(f"{TRACE_HASH}:{index}")
        if not tag_signature_ok(pp, tag, y_tilde_i):
            return _failed(f"{TRACE_SIGNATURE}:{index}")

        if user_key is None:
            user_key = entry_user_key
        elif user_key != entry_user_key:
            return _failed(TRACE_USER_KEY)
        services.append((record.identity, y_v))

    closure = request.closure
    if closure.s != closure_serial(pp, [entry.tag.s for entry in request.entries]):
        return _failed(TRACE_CLOSURE_HASH)
    if not bbs_verify_scalar(pp, y_tilde_i, closure.s, closure.signature):
        return _failed(TRACE_CLOSURE_SIGNATURE)

    user = registry.find_by_key(user_key)
    user_id = user.identity if user is not None and user.role is Role.USER else None
    log_event(
        "trace",
        status=TraceStatus.TRACED.value,
        services=len(services),
        user=fingerprint_hex(user_key.encode()),
    )
    return TraceReport(
        status=TraceStatus.TRACED,
        user_key=user_key,
        services=tuple(services),
        user_id=user_id,
    )

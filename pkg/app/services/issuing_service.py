"""Ticket issuing: the user's request under Pi1 and the issuer's ticket."""
import time
from typing import Callable

from app.core.errors import MissingMaterial, ProofRejected, UnknownVerifier
from app.core.logging import log_event
from app.core.models import AuthTag, Enrollment, ServiceSet, Ticket, TicketClosure, TicketEntry, TicketRequest
from app.crypto.algebra import G1Elem, G2Elem, PublicParams, Scalar
from app.crypto.credentials import Credential, Role, bbs_sign_scalar, bbs_verify_scalar
from app.crypto.proofs import PI1_SHAPE, PseudonymPair, pi1_prove, pi1_verify
from app.repositories.registry_repo import RegistryRepository

TextPolicy = Callable[[str], str]

DEFAULT_TEXT_PREFIX = "asso/1"
DEFAULT_TAG_VALIDITY_SECONDS = 86400


def default_text_policy(
    prefix: str = DEFAULT_TEXT_PREFIX,
    validity_seconds: int = DEFAULT_TAG_VALIDITY_SECONDS,
    now: float | None = None,
) -> TextPolicy:
    expires = int(time.time() if now is None else now) + int(validity_seconds)

    def policy(verifier_id: str) -> str:
        return f"{prefix};svc={verifier_id};exp={expires}"

    return policy


def designator(pp: PublicParams, c_u: G1Elem, verifier_id: str) -> Scalar:
    """D_V = H2(C_U || ID_V)."""
    return pp.h2(c_u, verifier_id)


def tag_serial(pp: PublicParams, p, q, e_elem, f, k, text: str) -> Scalar:
    return pp.h1(p, q, e_elem, f, k, text)


def closure_serial(pp: PublicParams, serials) -> Scalar:
    return pp.h1(*serials)


def tag_hash_ok(pp: PublicParams, tag: AuthTag) -> bool:
    return tag.s == tag_serial(pp, tag.p, tag.q, tag.e_elem, tag.f, tag.k, tag.text)


def tag_signature_ok(pp: PublicParams, tag: AuthTag, y_tilde_i: G2Elem) -> bool:
    return bbs_verify_scalar(pp, y_tilde_i, tag.s, tag.signature)


def new_ticket_secret(pp: PublicParams, rng) -> Scalar:
    """z_u, fresh per ticket and kept by the user."""
    return pp.random_scalar(rng)


def user_derive_pseudonyms(pp: PublicParams, x_u: Scalar, z_u: Scalar, service_set: ServiceSet, y_cv: G1Elem):
    y_u = pp.xi ** x_u
    pseudonyms = []
    for verifier_id in service_set:
        z_v = pp.h1(z_u, verifier_id)
        pair = PseudonymPair(verifier_id=verifier_id, p=y_u * y_cv ** z_v, q=pp.xi ** z_v)
        pseudonyms.append((pair, z_v))
    return pseudonyms


def user_build_ticket_request(
    pp: PublicParams,
    x_u: Scalar,
    credential: Credential,
    z_u: Scalar,
    service_set: ServiceSet,
    y_cv: G1Elem,
    rng,
) -> TicketRequest:
    pseudonyms = user_derive_pseudonyms(pp, x_u, z_u, service_set, y_cv)
    proof = pi1_prove(pp, x_u, credential, pseudonyms, y_cv, rng)
    return TicketRequest(
        service_set=service_set,
        pseudonyms=tuple(pair for pair, _z in pseudonyms),
        proof=proof,
    )


def resolve_service_keys(registry: RegistryRepository, service_set: ServiceSet):
    """Returns (central verifier record, [(id, Y_V)] in J_U order)."""
    cv = registry.central_verifier()
    if cv is None:
        raise MissingMaterial("central verifier nao registrado")
    service_set.ensure_valid(cv.identity)

    keys = []
    for verifier_id in service_set.ids[:-1]:
        record = registry.get(verifier_id)
        if record is None or record.role is not Role.VERIFIER:
            raise UnknownVerifier(verifier_id)
        keys.append((verifier_id, record.y))
    keys.append((cv.identity, cv.y))
    return cv, keys


def issuer_issue_ticket(
    pp: PublicParams,
    issuer: Enrollment,
    registry: RegistryRepository,
    request: TicketRequest,
    text_policy: TextPolicy,
    rng,
):
    """Verifies Pi1 and issues (C_U, Ticket); raises ProofRejected / UnknownVerifier."""
    if issuer.role is not Role.ISSUER:
        raise ValueError("somente o issuer emite tickets")

    cv, service_keys = resolve_service_keys(registry, request.service_set)
    if tuple(pair.verifier_id for pair in request.pseudonyms) != request.service_set.ids:
        log_event("ticket_rejected", issuer=issuer.identity, reason=PI1_SHAPE)
        raise ProofRejected(PI1_SHAPE)

    verdict = pi1_verify(pp, request.proof, request.pseudonyms, cv.y)
    if not verdict:
        log_event("ticket_rejected", issuer=issuer.identity, reason=verdict.reason)
        raise ProofRejected(verdict.reason)

    c_u = pp.xi ** pp.random_scalar(rng)
    entries = []
    for pair, (verifier_id, y_v) in zip(request.pseudonyms, service_keys):
        d_v = pp.random_scalar(rng)
        e_elem = pp.xi ** d_v
        f = y_v ** d_v
        k = y_v * cv.y ** d_v
        text = text_policy(verifier_id)
        s = tag_serial(pp, pair.p, pair.q, e_elem, f, k, text)
        sig = bbs_sign_scalar(pp, issuer.keys.x, s, rng)
        tag = AuthTag(p=pair.p, q=pair.q, e_elem=e_elem, f=f, k=k, text=text, s=s, w=sig.w, e=sig.e, z=sig.z)
        entries.append(TicketEntry(d=designator(pp, c_u, verifier_id), tag=tag))

    s_cv = closure_serial(pp, [entry.tag.s for entry in entries])
    sig = bbs_sign_scalar(pp, issuer.keys.x, s_cv, rng)
    ticket = Ticket(entries=tuple(entries), closure=TicketClosure(s=s_cv, w=sig.w, e=sig.e, z=sig.z), c_u=c_u)

    log_event("ticket_issued", issuer=issuer.identity, services=len(entries))
    return c_u, ticket


def user_verify_ticket(
    pp: PublicParams,
    ticket: Ticket,
    c_u: G1Elem,
    service_set: ServiceSet,
    y_tilde_i: G2Elem,
) -> bool:
    if ticket.c_u != c_u or len(ticket.entries) != len(service_set):
        return False
    for entry, verifier_id in zip(ticket.entries, service_set):
        if entry.d != designator(pp, c_u, verifier_id):
            return False
        if not tag_hash_ok(pp, entry.tag) or not tag_signature_ok(pp, entry.tag, y_tilde_i):
            return False
    closure = ticket.closure
    if closure.s != closure_serial(pp, [entry.tag.s for entry in ticket.entries]):
        return False
    return bbs_verify_scalar(pp, y_tilde_i, closure.s, closure.signature)

"""Showing a tag to its verifier and validating it against the spend ledger."""
from app.core.errors import TagNotFound
from app.core.logging import log_event
from app.core.models import AuthTag, RejectReason, Showing, Ticket, TicketWallet, ValidationResult
from app.crypto.algebra import G1Elem, G2Elem, PublicParams, Scalar
from app.crypto.credentials import EntityKeys
from app.crypto.proofs import Pi2Proof, pi2_prove, pi2_verify
from app.repositories.ledger_repo import InsertOutcome, SpendLedger
from app.services.issuing_service import designator, tag_hash_ok, tag_signature_ok
from app.transport.codec import spend_fingerprint


def user_show_tag(
    pp: PublicParams,
    ticket: Ticket,
    c_u: G1Elem,
    z_u: Scalar,
    x_u: Scalar,
    target_id: str,
    y_cv: G1Elem,
    rng,
) -> Showing:
    d = designator(pp, c_u, target_id)
    entry = next((item for item in ticket.entries if item.d == d), None)
    if entry is None:
        raise TagNotFound(target_id)
    z_v = pp.h1(z_u, target_id)
    proof = pi2_prove(pp, x_u, z_v, entry.tag.pseudonym, y_cv, rng)
    return Showing(tag=entry.tag, proof=proof)


def show_from_wallet(pp: PublicParams, wallet: TicketWallet, x_u: Scalar, target_id: str, y_cv: G1Elem, rng):
    return user_show_tag(pp, wallet.ticket, wallet.ticket.c_u, wallet.z_u, x_u, target_id, y_cv, rng)


def check_tag(
    pp: PublicParams,
    tag: AuthTag,
    proof: Pi2Proof,
    x_designated: Scalar,
    y_tilde_i: G2Elem,
    y_cv: G1Elem,
) -> RejectReason | None:
    """Checks (1)-(4) in order; returns the first failing one or None."""
    if not pi2_verify(pp, proof, tag.pseudonym, y_cv):
        return RejectReason.PROOF_FAIL
    if not tag_hash_ok(pp, tag):
        return RejectReason.HASH_FAIL
    if tag.f != tag.e_elem ** x_designated:
        return RejectReason.NOT_DESIGNATED
    if not tag_signature_ok(pp, tag, y_tilde_i):
        return RejectReason.SIG_FAIL
    return None


def verifier_validate(
    pp: PublicParams,
    verifier: EntityKeys,
    ledger: SpendLedger,
    tag: AuthTag,
    proof: Pi2Proof,
    y_tilde_i: G2Elem,
    y_cv: G1Elem,
    *,
    verifier_id: str | None = None,
) -> ValidationResult:
    if ledger.insert_if_absent(spend_fingerprint(tag)) is InsertOutcome.ALREADY_PRESENT:
        log_event("tag_rejected", verifier=verifier_id, reason=RejectReason.DOUBLE_SPEND.value)
        return ValidationResult.reject(RejectReason.DOUBLE_SPEND)

    reason = check_tag(pp, tag, proof, verifier.x, y_tilde_i, y_cv)
    if reason is not None:
        log_event("tag_rejected", verifier=verifier_id, reason=reason.value)
        return ValidationResult.reject(reason)

    log_event("tag_accepted", verifier=verifier_id, text=tag.text)
    return ValidationResult.accept()

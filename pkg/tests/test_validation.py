import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import pytest

from app.core.errors import TagNotFound
from app.core.models import RejectReason
from app.crypto.credentials import Role, entity_keygen
from app.repositories.ledger_repo import SpendLedger
from app.services.validation_service import check_tag, show_from_wallet, verifier_validate
from app.transport.codec import spend_fingerprint


def _show(system, wallet, target_id):
    return show_from_wallet(system.pp, wallet, system.user.keys.x, target_id, system.y_cv, system.rng)


def _validate(system, verifier_id, showing, keys=None, ledger=None):
    keys = keys or system.verifier(verifier_id).keys
    ledger = ledger if ledger is not None else system.ledger(verifier_id)
    return verifier_validate(
        system.pp, keys, ledger, showing.tag, showing.proof, system.y_tilde_i, system.y_cv, verifier_id=verifier_id
    )


def test_honest_showing_is_accepted_once(system):
    wallet = system.issue(3)
    showing = _show(system, wallet, "V2")
    first = _validate(system, "V2", showing)
    assert first.accepted
    assert first.reason is None
    second = _validate(system, "V2", showing)
    assert not second
    assert second.reason is RejectReason.DOUBLE_SPEND


def test_fresh_proof_does_not_bypass_ledger(system):
    wallet = system.issue(2)
    assert _validate(system, "V1", _show(system, wallet, "V1"))
    again = _validate(system, "V1", _show(system, wallet, "V1"))
    assert again.reason is RejectReason.DOUBLE_SPEND


def test_each_verifier_accepts_its_own_tag(system):
    wallet = system.issue(3)
    for verifier_id in ("V1", "V2", "V3"):
        assert _validate(system, verifier_id, _show(system, wallet, verifier_id)).accepted


def test_showing_to_a_verifier_outside_the_ticket(system):
    wallet = system.issue(1)
    with pytest.raises(TagNotFound) as excinfo:
        _show(system, wallet, "V3")
    assert excinfo.value.identity == "V3"


def test_tag_shown_to_wrong_verifier_is_not_designated(system):
    wallet = system.issue(2)
    showing = _show(system, wallet, "V1")
    result = _validate(system, "V2", showing)
    assert result.reason is RejectReason.NOT_DESIGNATED


def test_random_verifier_keys_are_never_designated(system):
    wallet = system.issue(1)
    showing = _show(system, wallet, "V1")
    for _ in range(100):
        stranger = entity_keygen(system.pp, Role.VERIFIER, system.rng)
        result = _validate(system, "V1", showing, keys=stranger, ledger=SpendLedger(system.pp.curve_id))
        assert result.reason is RejectReason.NOT_DESIGNATED


def test_cv_tag_is_not_accepted_by_a_verifier(system):
    wallet = system.issue(2)
    showing = _show(system, wallet, "CV")
    result = _validate(system, "V1", showing)
    assert result.reason is RejectReason.NOT_DESIGNATED
    assert check_tag(system.pp, showing.tag, showing.proof, system.cv.keys.x, system.y_tilde_i, system.y_cv) is None


def test_proof_for_another_tag_fails(system):
    wallet = system.issue(2)
    v1 = _show(system, wallet, "V1")
    v2 = _show(system, wallet, "V2")
    result = _validate(system, "V1", replace(v1, proof=v2.proof))
    assert result.reason is RejectReason.PROOF_FAIL


def test_other_users_proof_fails(system):
    other = system.add_user("U2")
    wallet = system.issue(1)
    showing = _show(system, wallet, "V1")
    forged = show_from_wallet(system.pp, wallet, other.keys.x, "V1", system.y_cv, system.rng)
    assert _validate(system, "V1", replace(showing, proof=forged.proof)).reason is RejectReason.PROOF_FAIL


TAG_MUTATIONS = {
    "p": (lambda s, t: replace(t, p=t.p * s.pp.g), RejectReason.PROOF_FAIL),
    "q": (lambda s, t: replace(t, q=t.q * s.pp.g), RejectReason.PROOF_FAIL),
    "e_elem": (lambda s, t: replace(t, e_elem=t.e_elem * s.pp.g), RejectReason.HASH_FAIL),
    "f": (lambda s, t: replace(t, f=t.f * s.pp.g), RejectReason.HASH_FAIL),
    "k": (lambda s, t: replace(t, k=t.k * s.pp.g), RejectReason.HASH_FAIL),
    "text": (lambda s, t: replace(t, text=t.text + "x"), RejectReason.HASH_FAIL),
    "s": (lambda s, t: replace(t, s=t.s + 1), RejectReason.HASH_FAIL),
    "w": (lambda s, t: replace(t, w=t.w + 1), RejectReason.SIG_FAIL),
    "e": (lambda s, t: replace(t, e=t.e + 1), RejectReason.SIG_FAIL),
    "z": (lambda s, t: replace(t, z=t.z * s.pp.g), RejectReason.SIG_FAIL),
}


@pytest.mark.parametrize("field_name", sorted(TAG_MUTATIONS))
def test_every_single_tag_field_mutation_is_rejected(system, field_name):
    wallet = system.issue(2)
    showing = _show(system, wallet, "V1")
    mutate, reason = TAG_MUTATIONS[field_name]
    tag = mutate(system, showing.tag)
    result = _validate(system, "V1", replace(showing, tag=tag), ledger=SpendLedger(system.pp.curve_id))
    assert result.reason is reason


def test_designation_check_uses_e_with_verifier_secret(system):
    wallet = system.issue(1)
    showing = _show(system, wallet, "V1")
    tag = showing.tag
    assert tag.f == tag.e_elem ** system.verifier("V1").keys.x


def test_rejected_showing_still_spends_the_fingerprint(system):
    wallet = system.issue(1)
    showing = _show(system, wallet, "V1")
    ledger = system.ledger("V1")
    bad = replace(showing, proof=_show(system, wallet, "CV").proof)
    assert _validate(system, "V1", bad).reason is RejectReason.PROOF_FAIL
    assert spend_fingerprint(showing.tag) in ledger
    assert _validate(system, "V1", showing).reason is RejectReason.DOUBLE_SPEND


def test_concurrent_showings_accept_exactly_once(system):
    wallet = system.issue(1)
    showing = _show(system, wallet, "V1")
    ledger = system.ledger("V1")
    barrier = threading.Barrier(16)

    def attempt(_):
        barrier.wait()
        return _validate(system, "V1", showing, ledger=ledger)

    with ThreadPoolExecutor(max_workers=16) as pool:
        results = list(pool.map(attempt, range(16)))

    assert sum(1 for result in results if result.accepted) == 1
    assert sum(1 for result in results if result.reason is RejectReason.DOUBLE_SPEND) == 15
    assert len(ledger) == 1

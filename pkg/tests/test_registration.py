from dataclasses import replace

import pytest

from app.core.errors import CredentialRejected, DuplicateIdentity, InvalidRegistration
from app.crypto.credentials import Role, entity_keygen, verify_credential
from app.repositories.registry_repo import RegistryRepository
from app.services.registration_service import (
    accept_credential,
    build_registration_request,
    ca_handle_registration,
    register_entity,
)


@pytest.fixture
def ca(toy_params):
    msk, pp = toy_params
    return pp, msk, RegistryRepository(pp.group)


@pytest.mark.parametrize("role", list(Role))
def test_register_every_role(ca, rng, role):
    pp, msk, registry = ca
    enrollment = register_entity(pp, msk, registry, "E1", role, rng)
    assert enrollment.role is role
    assert verify_credential(pp, enrollment.keys.y, enrollment.credential)
    record = registry.get("E1")
    assert record.y == enrollment.keys.y
    assert record.credential == enrollment.credential
    assert (record.y_tilde is not None) == (role is Role.ISSUER)


def test_duplicate_identity_is_rejected(ca, rng):
    pp, msk, registry = ca
    register_entity(pp, msk, registry, "V1", Role.VERIFIER, rng)
    with pytest.raises(DuplicateIdentity):
        register_entity(pp, msk, registry, "V1", Role.VERIFIER, rng)


def test_second_central_verifier_is_rejected(ca, rng):
    pp, msk, registry = ca
    register_entity(pp, msk, registry, "CV", Role.CENTRAL_VERIFIER, rng)
    with pytest.raises(InvalidRegistration):
        register_entity(pp, msk, registry, "CV2", Role.CENTRAL_VERIFIER, rng)


def test_issuer_with_mismatched_g2_key_is_rejected(ca, rng):
    pp, msk, registry = ca
    _keys, request = build_registration_request(pp, "I", Role.ISSUER, rng)
    other = entity_keygen(pp, Role.ISSUER, rng)
    with pytest.raises(InvalidRegistration):
        ca_handle_registration(pp, msk, registry, replace(request, y_tilde=other.y_tilde), rng)
    assert registry.get("I") is None


def test_g2_key_only_accepted_for_issuer(ca, rng):
    pp, msk, registry = ca
    _keys, request = build_registration_request(pp, "V1", Role.VERIFIER, rng)
    with pytest.raises(InvalidRegistration):
        ca_handle_registration(pp, msk, registry, replace(request, y_tilde=pp.frak_g), rng)


def test_empty_identity_is_rejected(ca, rng):
    pp, msk, registry = ca
    with pytest.raises(InvalidRegistration):
        register_entity(pp, msk, registry, "", Role.USER, rng)


def test_entity_rejects_credential_for_another_key(ca, rng):
    pp, msk, registry = ca
    keys, request = build_registration_request(pp, "U", Role.USER, rng)
    credential = ca_handle_registration(pp, msk, registry, request, rng)
    other = entity_keygen(pp, Role.USER, rng)
    with pytest.raises(CredentialRejected):
        accept_credential(pp, "U", other, credential)
    assert accept_credential(pp, "U", keys, credential).identity == "U"

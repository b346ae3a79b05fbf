from app.core.errors import CredentialRejected, DuplicateIdentity, InvalidRegistration
from app.core.logging import fingerprint_hex, log_event
from app.core.models import Enrollment, RegistrationRequest
from app.crypto.algebra import MasterSecret, PublicParams, pairings_equal
from app.crypto.credentials import (
    Credential,
    EntityKeys,
    RegistryRecord,
    Role,
    ca_issue_credential,
    entity_keygen,
    verify_credential,
)
from app.repositories.registry_repo import RegistryRepository

_SINGLETON_ROLES = (Role.ISSUER, Role.CENTRAL_VERIFIER)


def build_registration_request(pp: PublicParams, identity: str, role: Role, rng):
    keys = entity_keygen(pp, role, rng)
    request = RegistrationRequest(identity=identity, role=role, y=keys.y, y_tilde=keys.y_tilde)
    return keys, request


def _check_request(pp: PublicParams, registry: RegistryRepository, request: RegistrationRequest):
    if not request.identity:
        raise InvalidRegistration("identidade vazia")
    if request.y.is_identity():
        raise InvalidRegistration("chave publica nula")

    if request.role is Role.ISSUER:
        if request.y_tilde is None:
            raise InvalidRegistration("issuer sem Y~")
        if not pairings_equal((request.y, pp.frak_g), (pp.xi, request.y_tilde)):
            raise InvalidRegistration("Y e Y~ do issuer nao correspondem")
    elif request.y_tilde is not None:
        raise InvalidRegistration("Y~ so e aceito para o issuer")

    if registry.get(request.identity) is not None:
        raise DuplicateIdentity(request.identity)
    if request.role in _SINGLETON_ROLES:
        current = registry.issuer() if request.role is Role.ISSUER else registry.central_verifier()
        if current is not None:
            raise InvalidRegistration(f"{request.role.value} ja registrado como {current.identity}")


def ca_handle_registration(
    pp: PublicParams,
    msk: MasterSecret,
    registry: RegistryRepository,
    request: RegistrationRequest,
    rng,
) -> Credential:
    _check_request(pp, registry, request)
    credential = ca_issue_credential(pp, msk, request.y, rng)
    registry.add(
        RegistryRecord(
            identity=request.identity,
            role=request.role,
            y=request.y,
            credential=credential,
            y_tilde=request.y_tilde,
        )
    )
    log_event(
        "registration",
        identity=request.identity,
        role=request.role.value,
        key=fingerprint_hex(request.y.encode()),
    )
    return credential


def accept_credential(pp: PublicParams, identity: str, keys: EntityKeys, credential: Credential) -> Enrollment:
    if not verify_credential(pp, keys.y, credential):
        log_event("credential_rejected", identity=identity, role=keys.role.value)
        raise CredentialRejected(f"credencial invalida para {identity}")
    return Enrollment(identity=identity, keys=keys, credential=credential)


def register_entity(
    pp: PublicParams,
    msk: MasterSecret,
    registry: RegistryRepository,
    identity: str,
    role: Role,
    rng,
) -> Enrollment:
    """Runs the entity and CA sides of one registration in-process."""
    keys, request = build_registration_request(pp, identity, role, rng)
    credential = ca_handle_registration(pp, msk, registry, request, rng)
    return accept_credential(pp, identity, keys, credential)

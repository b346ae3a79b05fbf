from dataclasses import dataclass, field

import pytest

from app.core.models import Enrollment, ServiceSet, TicketWallet
from app.crypto.algebra import MasterSecret, PublicParams, setup_params
from app.crypto.credentials import Role
from app.crypto.rng import default_rng
from app.repositories.ledger_repo import SpendLedger
from app.repositories.registry_repo import RegistryRepository
from app.services.issuing_service import (
    default_text_policy,
    issuer_issue_ticket,
    new_ticket_secret,
    user_build_ticket_request,
)
from app.services.registration_service import register_entity

TOY64 = 64
TOY16 = 16


@dataclass
class System:
    pp: PublicParams
    msk: MasterSecret
    registry: RegistryRepository
    issuer: Enrollment
    cv: Enrollment
    verifiers: list
    user: Enrollment
    rng: object
    ledgers: dict = field(default_factory=dict)

    @property
    def y_cv(self):
        return self.cv.keys.y

    @property
    def y_tilde_i(self):
        return self.issuer.keys.y_tilde

    def verifier(self, identity: str) -> Enrollment:
        return next(v for v in self.verifiers if v.identity == identity)

    def service_set(self, n: int | None = None) -> ServiceSet:
        chosen = self.verifiers if n is None else self.verifiers[:n]
        return ServiceSet.build([v.identity for v in chosen], self.cv.identity)

    def ledger(self, identity: str) -> SpendLedger:
        if identity not in self.ledgers:
            self.ledgers[identity] = SpendLedger(self.pp.curve_id, label=identity)
        return self.ledgers[identity]

    def add_user(self, identity: str) -> Enrollment:
        return register_entity(self.pp, self.msk, self.registry, identity, Role.USER, self.rng)

    def request(self, n: int | None = None, user: Enrollment | None = None):
        user = user or self.user
        service_set = self.service_set(n)
        z_u = new_ticket_secret(self.pp, self.rng)
        request = user_build_ticket_request(
            self.pp, user.keys.x, user.credential, z_u, service_set, self.y_cv, self.rng
        )
        return z_u, service_set, request

    def issue(self, n: int | None = None, user: Enrollment | None = None, policy=None) -> TicketWallet:
        z_u, service_set, request = self.request(n, user)
        _c_u, ticket = issuer_issue_ticket(
            self.pp, self.issuer, self.registry, request, policy or default_text_policy(now=1_700_000_000), self.rng
        )
        return TicketWallet(z_u=z_u, service_set=service_set, ticket=ticket)


def build_system(level: int = TOY64, n_verifiers: int = 3, seed: str = "asso-tests", registry_path=None) -> System:
    msk, pp = setup_params(level, seed)
    rng = default_rng(f"{seed}:rng")
    registry = RegistryRepository(pp.group, registry_path, fsync=False)
    issuer = register_entity(pp, msk, registry, "I", Role.ISSUER, rng)
    cv = register_entity(pp, msk, registry, "CV", Role.CENTRAL_VERIFIER, rng)
    verifiers = [
        register_entity(pp, msk, registry, f"V{i}", Role.VERIFIER, rng) for i in range(1, n_verifiers + 1)
    ]
    user = register_entity(pp, msk, registry, "U", Role.USER, rng)
    return System(pp=pp, msk=msk, registry=registry, issuer=issuer, cv=cv, verifiers=verifiers, user=user, rng=rng)


@pytest.fixture
def system():
    return build_system()


@pytest.fixture
def make_system():
    return build_system


@pytest.fixture
def toy_params():
    msk, pp = setup_params(TOY64, "asso-params")
    return msk, pp


@pytest.fixture
def rng():
    return default_rng("asso-tests:local")

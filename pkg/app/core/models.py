"""Protocol messages and results exchanged between the roles."""
from dataclasses import dataclass, field
from enum import Enum

from app.core.errors import InvalidServiceSet
from app.crypto.algebra import G1Elem, G2Elem, Scalar
from app.crypto.credentials import BbsSignature, Credential, EntityKeys, Role
from app.crypto.proofs import Pi1Proof, Pi2Proof, PseudonymPair


@dataclass(frozen=True)
class ServiceSet:
    """J_U: verifier ids in the user's order, central verifier id last."""

    ids: tuple[str, ...]

    @classmethod
    def build(cls, verifier_ids, cv_id: str) -> "ServiceSet":
        ids = [i for i in verifier_ids if i != cv_id]
        return cls(tuple(ids) + (cv_id,))

    def ensure_valid(self, cv_id: str) -> None:
        if len(set(self.ids)) != len(self.ids):
            raise InvalidServiceSet("ids repetidos em J_U")
        if self.ids.count(cv_id) != 1 or self.ids[-1] != cv_id:
            raise InvalidServiceSet(f"J_U deve terminar com {cv_id}")
        if any(not i for i in self.ids):
            raise InvalidServiceSet("id vazio em J_U")

    @property
    def cv_id(self) -> str:
        return self.ids[-1]

    def __iter__(self):
        return iter(self.ids)

    def __len__(self):
        return len(self.ids)


@dataclass(frozen=True)
class RegistrationRequest:
    identity: str
    role: Role
    y: G1Elem
    y_tilde: G2Elem | None = None


@dataclass(frozen=True)
class Enrollment:
    """What an entity keeps after registering: its id, key pair and CA credential."""

    identity: str
    keys: EntityKeys
    credential: Credential

    @property
    def role(self) -> Role:
        return self.keys.role


@dataclass(frozen=True)
class TicketRequest:
    service_set: ServiceSet
    pseudonyms: tuple[PseudonymPair, ...]
    proof: Pi1Proof


@dataclass(frozen=True)
class AuthTag:
    p: G1Elem
    q: G1Elem
    e_elem: G1Elem
    f: G1Elem
    k: G1Elem
    text: str
    s: Scalar
    w: Scalar
    e: Scalar
    z: G1Elem

    @property
    def pseudonym(self) -> PseudonymPair:
        return PseudonymPair("", self.p, self.q)

    @property
    def signature(self) -> BbsSignature:
        return BbsSignature(w=self.w, e=self.e, z=self.z)


@dataclass(frozen=True)
class TicketEntry:
    d: Scalar
    tag: AuthTag


@dataclass(frozen=True)
class TicketClosure:
    s: Scalar
    w: Scalar
    e: Scalar
    z: G1Elem

    @property
    def signature(self) -> BbsSignature:
        return BbsSignature(w=self.w, e=self.e, z=self.z)


@dataclass(frozen=True)
class Ticket:
    entries: tuple[TicketEntry, ...]
    closure: TicketClosure
    c_u: G1Elem


@dataclass(frozen=True)
class TicketWallet:
    """User-side state for one ticket; z_u and C_U never leave it."""

    z_u: Scalar
    service_set: ServiceSet
    ticket: Ticket


@dataclass(frozen=True)
class Showing:
    tag: AuthTag
    proof: Pi2Proof


@dataclass(frozen=True)
class TraceRequest:
    entries: tuple[TicketEntry, ...]
    closure: TicketClosure
    showing: Showing


class RejectReason(str, Enum):
    DOUBLE_SPEND = "DoubleSpend"
    PROOF_FAIL = "ProofFail"
    HASH_FAIL = "HashFail"
    NOT_DESIGNATED = "NotDesignated"
    SIG_FAIL = "SigFail"


@dataclass(frozen=True)
class ValidationResult:
    accepted: bool
    reason: RejectReason | None = None

    @classmethod
    def accept(cls) -> "ValidationResult":
        return cls(True)

    @classmethod
    def reject(cls, reason: RejectReason) -> "ValidationResult":
        return cls(False, reason)

    def __bool__(self):
        return self.accepted


class TraceStatus(str, Enum):
    TRACED = "Traced"
    FAILED = "Failed"


@dataclass(frozen=True)
class TraceReport:
    status: TraceStatus
    user_key: G1Elem | None = None
    services: tuple[tuple[str, G1Elem], ...] = field(default_factory=tuple)
    user_id: str | None = None
    reason: str | None = None

    def __post_init__(self):
        # vazio e None teriam a mesma codificacao
        if self.user_id == "" or self.reason == "":
            raise ValueError("user_id e reason nao podem ser vazios; use None")

    @classmethod
    def failed(cls, reason: str) -> "TraceReport":
        return cls(TraceStatus.FAILED, reason=reason)

    @property
    def traced(self) -> bool:
        return self.status is TraceStatus.TRACED

    @property
    def service_ids(self) -> list[str]:
        return [identity for identity, _y in self.services]

"""Entity keys and single-message BBS+ signatures."""
from dataclasses import dataclass
from enum import Enum

from app.core.errors import DegenerateExponent
from app.crypto.algebra import G1Elem, G2Elem, MasterSecret, PublicParams, Scalar, pairings_equal

_MAX_RESAMPLES = 64

__all__ = [
    "BbsSignature",
    "Credential",
    "EntityKeys",
    "MasterSecret",
    "RegistryRecord",
    "Role",
    "bbs_sign_scalar",
    "bbs_verify_scalar",
    "ca_issue_credential",
    "entity_keygen",
    "verify_credential",
]


class Role(str, Enum):
    ISSUER = "issuer"
    VERIFIER = "verifier"
    USER = "user"
    CENTRAL_VERIFIER = "central_verifier"

    @property
    def code(self) -> int:
        return _ROLE_CODES[self]

    @classmethod
    def from_code(cls, code: int) -> "Role":
        for role, value in _ROLE_CODES.items():
            if value == code:
                return role
        raise ValueError(f"papel desconhecido: {code}")


_ROLE_CODES = {
    Role.ISSUER: 1,
    Role.VERIFIER: 2,
    Role.USER: 3,
    Role.CENTRAL_VERIFIER: 4,
}


@dataclass(frozen=True)
class EntityKeys:
    role: Role
    x: Scalar
    y: G1Elem
    y_tilde: G2Elem | None = None

    def __post_init__(self):
        if (self.role is Role.ISSUER) != (self.y_tilde is not None):
            raise ValueError("Y~ existe somente para o issuer")


@dataclass(frozen=True)
class Credential:
    e: Scalar
    r: Scalar
    sigma: G1Elem


@dataclass(frozen=True)
class BbsSignature:
    w: Scalar
    e: Scalar
    z: G1Elem


@dataclass(frozen=True)
class RegistryRecord:
    identity: str
    role: Role
    y: G1Elem
    credential: Credential
    y_tilde: G2Elem | None = None


def entity_keygen(pp: PublicParams, role: Role, rng) -> EntityKeys:
    x = pp.random_scalar(rng)
    y_tilde = pp.frak_g ** x if role is Role.ISSUER else None
    return EntityKeys(role=role, x=x, y=pp.xi ** x, y_tilde=y_tilde)


def _nondegenerate_exponent(pp: PublicParams, secret: Scalar, rng) -> Scalar:
    for _ in range(_MAX_RESAMPLES):
        e = pp.random_scalar(rng)
        if not (secret + e).is_zero():
            return e
    raise DegenerateExponent("x + e = 0 em todas as tentativas")


def ca_issue_credential(pp: PublicParams, msk: MasterSecret, y: G1Elem, rng) -> Credential:
    """sigma = (g h^r Y)^(1/(x_a + e))."""
    e = _nondegenerate_exponent(pp, msk.x_a, rng)
    r = pp.random_scalar(rng)
    sigma = (pp.g * pp.h ** r * y) ** (msk.x_a + e).inverse()
    return Credential(e=e, r=r, sigma=sigma)


def verify_credential(pp: PublicParams, y: G1Elem, cred: Credential, y_a: G2Elem | None = None) -> bool:
    y_a = pp.y_a if y_a is None else y_a
    return pairings_equal(
        (cred.sigma, y_a * pp.frak_g ** cred.e),
        (pp.g * pp.h ** cred.r * y, pp.frak_g),
    )


def bbs_sign_scalar(pp: PublicParams, x_signer: Scalar, s: Scalar, rng) -> BbsSignature:
    """Z = (g h^w h~^s)^(1/(x + e))."""
    e = _nondegenerate_exponent(pp, x_signer, rng)
    w = pp.random_scalar(rng)
    z = (pp.g * pp.h ** w * pp.h_tilde ** s) ** (x_signer + e).inverse()
    return BbsSignature(w=w, e=e, z=z)


def bbs_verify_scalar(pp: PublicParams, y_tilde_signer: G2Elem, s: Scalar, sig: BbsSignature) -> bool:
    return pairings_equal(
        (sig.z, y_tilde_signer * pp.frak_g ** sig.e),
        (pp.g * pp.h ** sig.w * pp.h_tilde ** s, pp.frak_g),
    )

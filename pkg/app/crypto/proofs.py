"""Fiat-Shamir proofs for ticket issuing (Pi1) and tag showing (Pi2)."""
from dataclasses import dataclass

from app.crypto.algebra import G1Elem, PublicParams, Scalar, pairings_equal
from app.crypto.credentials import Credential

PI1_OK = "ok"
PI1_PAIRING = "pairing"
PI1_SHAPE = "shape"
PI1_CHALLENGE = "challenge"
PI1_W1 = "w1"
PI1_W2 = "w2"
PI1_PSEUDONYM = "pseudonym"

PI2_CHALLENGE = "challenge"
PI2_P = "p_commitment"
PI2_Q = "q_commitment"


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str | None = None

    def __bool__(self):
        return self.ok

    @classmethod
    def accept(cls) -> "Verdict":
        return cls(True)

    @classmethod
    def reject(cls, reason: str) -> "Verdict":
        return cls(False, reason)


@dataclass(frozen=True)
class BlindedCredential:
    sigma_bar: G1Elem
    sigma_tilde: G1Elem
    b_bar: G1Elem


@dataclass(frozen=True)
class BlindAux:
    b_u: G1Elem
    v1: Scalar
    v2: Scalar
    v3: Scalar
    v: Scalar


@dataclass(frozen=True)
class PseudonymPair:
    verifier_id: str
    p: G1Elem
    q: G1Elem


@dataclass(frozen=True)
class Pi1Proof:
    sigma_bar: G1Elem
    sigma_tilde: G1Elem
    b_bar: G1Elem
    w1: G1Elem
    w2: G1Elem
    commitments: tuple[tuple[G1Elem, G1Elem], ...]
    c: Scalar
    e_hat: Scalar
    v2_hat: Scalar
    v3_hat: Scalar
    v_hat: Scalar
    x_hat: Scalar
    z_hats: tuple[Scalar, ...]

    @property
    def blinded(self) -> BlindedCredential:
        return BlindedCredential(self.sigma_bar, self.sigma_tilde, self.b_bar)


@dataclass(frozen=True)
class Pi2Proof:
    p_prime: G1Elem
    q_prime: G1Elem
    c: Scalar
    x_hat: Scalar
    z_hat: Scalar


@dataclass(frozen=True)
class Pi2Nonces:
    x_prime: Scalar
    z_prime: Scalar


def blind_credential(pp: PublicParams, cred: Credential, y_u: G1Elem, rng):
    b_u = pp.g * pp.h ** cred.r * y_u
    v1 = pp.random_scalar(rng)
    v2 = pp.random_scalar(rng)
    v3 = v1.inverse()
    v = cred.r - v2 * v3
    sigma_bar = cred.sigma ** v1
    sigma_tilde = sigma_bar ** (-cred.e) * b_u ** v1
    b_bar = b_u ** v1 * pp.h ** (-v2)
    return BlindedCredential(sigma_bar, sigma_tilde, b_bar), BlindAux(b_u, v1, v2, v3, v)


def _pi1_challenge(pp: PublicParams, sigma_bar, sigma_tilde, b_bar, w1, w2, pairs, commitments) -> Scalar:
    parts = [sigma_bar, sigma_tilde, b_bar, w1, w2]
    for pair, (p_prime, q_prime) in zip(pairs, commitments):
        parts.extend((pair.p, p_prime, pair.q, q_prime))
    return pp.h1(*parts)


def pi1_prove(pp: PublicParams, x_u: Scalar, cred: Credential, pseudonyms, y_cv: G1Elem, rng) -> Pi1Proof:
    """pseudonyms: list of (PseudonymPair, z_v) in service-set order."""
    if not pseudonyms:
        raise ValueError("lista de pseudonimos vazia")
    y_u = pp.xi ** x_u
    blinded, aux = blind_credential(pp, cred, y_u, rng)

    e_p, v2_p, v3_p, v_p, x_p = (pp.random_scalar(rng) for _ in range(5))
    z_ps = [pp.random_scalar(rng) for _ in pseudonyms]

    w1 = blinded.sigma_bar ** (-e_p) * pp.h ** v2_p
    w2 = blinded.b_bar ** (-v3_p) * pp.xi ** x_p * pp.h ** v_p
    commitments = tuple(
        (pp.xi ** x_p * y_cv ** z_p, pp.xi ** z_p) for z_p in z_ps
    )
    pairs = [pair for pair, _z in pseudonyms]
    c = _pi1_challenge(pp, blinded.sigma_bar, blinded.sigma_tilde, blinded.b_bar, w1, w2, pairs, commitments)

    return Pi1Proof(
        sigma_bar=blinded.sigma_bar,
        sigma_tilde=blinded.sigma_tilde,
        b_bar=blinded.b_bar,
        w1=w1,
        w2=w2,
        commitments=commitments,
        c=c,
        e_hat=e_p - c * cred.e,
        v2_hat=v2_p - c * aux.v2,
        v3_hat=v3_p - c * aux.v3,
        v_hat=v_p - c * aux.v,
        x_hat=x_p - c * x_u,
        z_hats=tuple(z_p - c * z_v for z_p, (_pair, z_v) in zip(z_ps, pseudonyms)),
    )


def pi1_verify(pp: PublicParams, proof: Pi1Proof, pseudonyms, y_cv: G1Elem) -> Verdict:
    """pseudonyms: list of PseudonymPair in the order the prover hashed them."""
    pairs = list(pseudonyms)
    if not pairs or len(proof.commitments) != len(pairs) or len(proof.z_hats) != len(pairs):
        return Verdict.reject(PI1_SHAPE)
    if proof.sigma_bar.is_identity():
        return Verdict.reject(PI1_PAIRING)
    if not pairings_equal((proof.sigma_bar, pp.y_a), (proof.sigma_tilde, pp.frak_g)):
        return Verdict.reject(PI1_PAIRING)

    c = _pi1_challenge(
        pp, proof.sigma_bar, proof.sigma_tilde, proof.b_bar, proof.w1, proof.w2, pairs, proof.commitments
    )
    if c != proof.c:
        return Verdict.reject(PI1_CHALLENGE)

    w1 = proof.sigma_bar ** (-proof.e_hat) * pp.h ** proof.v2_hat * (proof.sigma_tilde / proof.b_bar) ** c
    if w1 != proof.w1:
        return Verdict.reject(PI1_W1)

    w2 = proof.b_bar ** (-proof.v3_hat) * pp.xi ** proof.x_hat * pp.h ** proof.v_hat * pp.g ** (-c)
    if w2 != proof.w2:
        return Verdict.reject(PI1_W2)

    for index, (pair, (p_prime, q_prime), z_hat) in enumerate(zip(pairs, proof.commitments, proof.z_hats)):
        if p_prime != pp.xi ** proof.x_hat * y_cv ** z_hat * pair.p ** c:
            return Verdict.reject(f"{PI1_PSEUDONYM}:{index}")
        if q_prime != pp.xi ** z_hat * pair.q ** c:
            return Verdict.reject(f"{PI1_PSEUDONYM}:{index}")
    return Verdict.accept()


def pi2_commit(pp: PublicParams, y_cv: G1Elem, rng):
    nonces = Pi2Nonces(pp.random_scalar(rng), pp.random_scalar(rng))
    p_prime = pp.xi ** nonces.x_prime * y_cv ** nonces.z_prime
    q_prime = pp.xi ** nonces.z_prime
    return (p_prime, q_prime), nonces


def pi2_challenge(pp: PublicParams, pair: PseudonymPair, p_prime: G1Elem, q_prime: G1Elem) -> Scalar:
    return pp.h1(pair.p, p_prime, pair.q, q_prime)


def pi2_respond(x_u: Scalar, z_v: Scalar, nonces: Pi2Nonces, c: Scalar) -> tuple[Scalar, Scalar]:
    return nonces.x_prime - c * x_u, nonces.z_prime - c * z_v


def pi2_prove(pp: PublicParams, x_u: Scalar, z_v: Scalar, pair: PseudonymPair, y_cv: G1Elem, rng) -> Pi2Proof:
    (p_prime, q_prime), nonces = pi2_commit(pp, y_cv, rng)
    c = pi2_challenge(pp, pair, p_prime, q_prime)
    x_hat, z_hat = pi2_respond(x_u, z_v, nonces, c)
    return Pi2Proof(p_prime=p_prime, q_prime=q_prime, c=c, x_hat=x_hat, z_hat=z_hat)


def pi2_check_relations(pp: PublicParams, proof: Pi2Proof, pair: PseudonymPair, y_cv: G1Elem) -> str | None:
    """Algebraic checks for the given challenge; returns the failing check or None."""
    if proof.p_prime != pp.xi ** proof.x_hat * y_cv ** proof.z_hat * pair.p ** proof.c:
        return PI2_P
    if proof.q_prime != pp.xi ** proof.z_hat * pair.q ** proof.c:
        return PI2_Q
    return None


def pi2_verify(pp: PublicParams, proof: Pi2Proof, pair: PseudonymPair, y_cv: G1Elem) -> Verdict:
    if pi2_challenge(pp, pair, proof.p_prime, proof.q_prime) != proof.c:
        return Verdict.reject(PI2_CHALLENGE)
    failed = pi2_check_relations(pp, proof, pair, y_cv)
    if failed:
        return Verdict.reject(failed)
    return Verdict.accept()


def extract_witness(first: Pi2Proof, second: Pi2Proof) -> tuple[Scalar, Scalar]:
    """Rewinding extractor: two accepting transcripts, same commitments, distinct challenges."""
    if first.p_prime != second.p_prime or first.q_prime != second.q_prime:
        raise ValueError("transcricoes com compromissos diferentes")
    delta = first.c - second.c
    if delta.is_zero():
        raise ValueError("desafios iguais")
    x_u = (second.x_hat - first.x_hat) / delta
    z_v = (second.z_hat - first.z_hat) / delta
    return x_u, z_v

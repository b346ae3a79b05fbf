"""Pairing group backends over raw py_ecc points or plain integers (toy groups)."""
import hashlib
from abc import ABC, abstractmethod

from py_ecc import optimized_bls12_381 as bls
from py_ecc import optimized_bn128 as bn
from py_ecc.bls.g2_primitives import (
    G1_to_pubkey,
    G2_to_signature,
    pubkey_to_G1,
    signature_to_G2,
)
from py_ecc.bls.hash_to_curve import hash_to_G1, hash_to_G2

from app.core.errors import DecodeError, UnsupportedSecurityLevel

CURVE_BLS12_381 = 0x01
CURVE_BN254 = 0x02
CURVE_TOY64 = 0xF0
CURVE_TOY16 = 0xF1

_H2C_DST_G1 = b"ASSO-V01-CS01-with-BLS12381G1_XMD:SHA-256_SSWU_RO_"
_H2C_DST_G2 = b"ASSO-V01-CS01-with-BLS12381G2_XMD:SHA-256_SSWU_RO_"


def _tag_scalar(tag: bytes, order: int) -> int:
    digest = hashlib.shake_256(b"ASSO:tag" + tag).digest(2 * ((order.bit_length() + 7) // 8) + 16)
    value = int.from_bytes(digest, "big") % order
    return value or 1


def _coeff_ints(fq2) -> tuple[int, int]:
    return tuple(int(c.n) if hasattr(c, "n") else int(c) for c in fq2.coeffs)


class PairingGroup(ABC):
    name: str
    curve_id: int
    security_bits: int
    order: int
    g1_size: int
    g2_size: int

    @property
    def scalar_size(self) -> int:
        return (self.order.bit_length() + 7) // 8

    @abstractmethod
    def g1_identity(self): ...

    @abstractmethod
    def g2_identity(self): ...

    @abstractmethod
    def gt_identity(self): ...

    @abstractmethod
    def g1_add(self, a, b): ...

    @abstractmethod
    def g1_mul(self, a, k: int): ...

    @abstractmethod
    def g1_neg(self, a): ...

    @abstractmethod
    def g1_eq(self, a, b) -> bool: ...

    @abstractmethod
    def g2_add(self, a, b): ...

    @abstractmethod
    def g2_mul(self, a, k: int): ...

    @abstractmethod
    def g2_neg(self, a): ...

    @abstractmethod
    def g2_eq(self, a, b) -> bool: ...

    @abstractmethod
    def gt_mul(self, a, b): ...

    @abstractmethod
    def gt_pow(self, a, k: int): ...

    @abstractmethod
    def gt_eq(self, a, b) -> bool: ...

    @abstractmethod
    def pair(self, a, b): ...

    def pairing_product_is_one(self, pairs) -> bool:
        acc = self.gt_identity()
        for a, b in pairs:
            acc = self.gt_mul(acc, self.pair(a, b))
        return self.gt_eq(acc, self.gt_identity())

    @abstractmethod
    def g1_from_tag(self, tag: bytes): ...

    @abstractmethod
    def g2_from_tag(self, tag: bytes): ...

    @abstractmethod
    def encode_g1(self, a) -> bytes: ...

    @abstractmethod
    def decode_g1(self, data: bytes): ...

    @abstractmethod
    def encode_g2(self, a) -> bytes: ...

    @abstractmethod
    def decode_g2(self, data: bytes): ...


class _PyEccGroup(PairingGroup):
    curve = None

    def g1_identity(self):
        return self.curve.Z1

    def g2_identity(self):
        return self.curve.Z2

    def gt_identity(self):
        return self.curve.FQ12.one()

    def g1_add(self, a, b):
        return self.curve.add(a, b)

    def g1_mul(self, a, k):
        return self.curve.multiply(a, k % self.order)

    def g1_neg(self, a):
        return self.curve.neg(a)

    def g1_eq(self, a, b):
        return self.curve.eq(a, b)

    g2_add = g1_add
    g2_mul = g1_mul
    g2_neg = g1_neg
    g2_eq = g1_eq

    def gt_mul(self, a, b):
        return a * b

    def gt_pow(self, a, k):
        return a ** (k % self.order)

    def gt_eq(self, a, b):
        return a == b

    def pair(self, a, b):
        return self.curve.pairing(b, a)

    def pairing_product_is_one(self, pairs):
        acc = self.curve.FQ12.one()
        for a, b in pairs:
            if self.curve.is_inf(a) or self.curve.is_inf(b):
                continue
            acc = acc * self.curve.pairing(b, a, final_exponentiate=False)
        return self.curve.final_exponentiate(acc) == self.curve.FQ12.one()

    def _in_subgroup(self, point) -> bool:
        return self.curve.is_inf(self.curve.multiply(point, self.order))


class Bls12381Group(_PyEccGroup):
    name = "bls12_381"
    curve_id = CURVE_BLS12_381
    security_bits = 128
    curve = bls
    order = bls.curve_order
    g1_size = 48
    g2_size = 96

    def g1_from_tag(self, tag):
        return hash_to_G1(tag, _H2C_DST_G1, hashlib.sha256)

    def g2_from_tag(self, tag):
        return hash_to_G2(tag, _H2C_DST_G2, hashlib.sha256)

    def encode_g1(self, a):
        return bytes(G1_to_pubkey(a))

    def decode_g1(self, data):
        if len(data) != self.g1_size:
            raise DecodeError(f"G1 com {len(data)} bytes")
        try:
            point = pubkey_to_G1(data)
        except (ValueError, AssertionError) as exc:
            raise DecodeError(f"G1 invalido: {exc}") from exc
        if not self._in_subgroup(point):
            raise DecodeError("G1 fora do subgrupo")
        if self.encode_g1(point) != bytes(data):
            raise DecodeError("G1 nao canonico")
        return point

    def encode_g2(self, a):
        return bytes(G2_to_signature(a))

    def decode_g2(self, data):
        if len(data) != self.g2_size:
            raise DecodeError(f"G2 com {len(data)} bytes")
        try:
            point = signature_to_G2(data)
        except (ValueError, AssertionError) as exc:
            raise DecodeError(f"G2 invalido: {exc}") from exc
        if not self._in_subgroup(point):
            raise DecodeError("G2 fora do subgrupo")
        if self.encode_g2(point) != bytes(data):
            raise DecodeError("G2 nao canonico")
        return point


class Bn254Group(_PyEccGroup):
    """Barreto-Naehrig compatibility profile; affine fixed-width encodings."""

    name = "bn254"
    curve_id = CURVE_BN254
    security_bits = 100
    curve = bn
    order = bn.curve_order
    g1_size = 64
    g2_size = 128

    def g1_from_tag(self, tag):
        q = bn.field_modulus
        x = _tag_scalar(tag, q)
        while True:
            rhs = (pow(x, 3, q) + 3) % q
            y = pow(rhs, (q + 1) // 4, q)
            if y * y % q == rhs:
                y = min(y, q - y)
                return (bn.FQ(x), bn.FQ(y), bn.FQ.one())
            x = (x + 1) % q

    def g2_from_tag(self, tag):
        return bn.multiply(bn.G2, _tag_scalar(tag, self.order))

    def encode_g1(self, a):
        if bn.is_inf(a):
            return bytes(self.g1_size)
        x, y = bn.normalize(a)
        return int(x.n).to_bytes(32, "big") + int(y.n).to_bytes(32, "big")

    def decode_g1(self, data):
        if len(data) != self.g1_size:
            raise DecodeError(f"G1 com {len(data)} bytes")
        if data == bytes(self.g1_size):
            return bn.Z1
        x = int.from_bytes(data[:32], "big")
        y = int.from_bytes(data[32:], "big")
        if x >= bn.field_modulus or y >= bn.field_modulus:
            raise DecodeError("coordenada G1 nao canonica")
        point = (bn.FQ(x), bn.FQ(y), bn.FQ.one())
        if not bn.is_on_curve(point, bn.b) or not self._in_subgroup(point):
            raise DecodeError("G1 fora da curva ou do subgrupo")
        return point

    def encode_g2(self, a):
        if bn.is_inf(a):
            return bytes(self.g2_size)
        x, y = bn.normalize(a)
        out = b""
        for coeff in _coeff_ints(x) + _coeff_ints(y):
            out += coeff.to_bytes(32, "big")
        return out

    def decode_g2(self, data):
        if len(data) != self.g2_size:
            raise DecodeError(f"G2 com {len(data)} bytes")
        if data == bytes(self.g2_size):
            return bn.Z2
        coeffs = [int.from_bytes(data[i:i + 32], "big") for i in range(0, 128, 32)]
        if any(c >= bn.field_modulus for c in coeffs):
            raise DecodeError("coordenada G2 nao canonica")
        point = (bn.FQ2(coeffs[:2]), bn.FQ2(coeffs[2:]), bn.FQ2.one())
        if not bn.is_on_curve(point, bn.b2) or not self._in_subgroup(point):
            raise DecodeError("G2 fora da curva ou do subgrupo")
        return point


class ToyGroup(PairingGroup):
    """Exponent-representation group of prime order: e(a, b) = a*b mod p.

    Offers no security at all. Used for fast tests and for the rewinding
    extractor smoke test, which needs a group small enough to reason about.
    """

    security_bits = 0

    def __init__(self, name: str, curve_id: int, order: int, bits: int):
        self.name = name
        self.curve_id = curve_id
        self.order = order
        self.security_bits = bits
        self.g1_size = self.scalar_size
        self.g2_size = self.scalar_size

    def g1_identity(self):
        return 0

    g2_identity = g1_identity
    gt_identity = g1_identity

    def g1_add(self, a, b):
        return (a + b) % self.order

    def g1_mul(self, a, k):
        return (a * k) % self.order

    def g1_neg(self, a):
        return (-a) % self.order

    def g1_eq(self, a, b):
        return a % self.order == b % self.order

    g2_add = g1_add
    g2_mul = g1_mul
    g2_neg = g1_neg
    g2_eq = g1_eq
    gt_mul = g1_add
    gt_pow = g1_mul
    gt_eq = g1_eq
    pair = g1_mul

    def g1_from_tag(self, tag):
        return _tag_scalar(b"G1" + tag, self.order)

    def g2_from_tag(self, tag):
        return _tag_scalar(b"G2" + tag, self.order)

    def encode_g1(self, a):
        return int(a).to_bytes(self.g1_size, "big")

    def decode_g1(self, data):
        if len(data) != self.g1_size:
            raise DecodeError(f"elemento com {len(data)} bytes")
        value = int.from_bytes(data, "big")
        if value >= self.order:
            raise DecodeError("elemento fora do grupo")
        return value

    encode_g2 = encode_g1
    decode_g2 = decode_g1


_GROUPS = {}

PROFILES = {
    "default": (CURVE_BLS12_381, 128),
    "compat": (CURVE_BN254, 100),
    "toy64": (CURVE_TOY64, 64),
    "toy16": (CURVE_TOY16, 16),
}


def _build(curve_id):
    if curve_id == CURVE_BLS12_381:
        return Bls12381Group()
    if curve_id == CURVE_BN254:
        return Bn254Group()
    if curve_id == CURVE_TOY64:
        return ToyGroup("toy64", CURVE_TOY64, 2**61 - 1, 64)
    if curve_id == CURVE_TOY16:
        return ToyGroup("toy16", CURVE_TOY16, 65521, 16)
    raise DecodeError(f"curva desconhecida: {curve_id:#x}")


def group_for_curve_id(curve_id: int) -> PairingGroup:
    group = _GROUPS.get(curve_id)
    if group is None:
        group = _GROUPS[curve_id] = _build(curve_id)
    return group


def group_for_level(security_level: int) -> PairingGroup:
    for curve_id, bits in PROFILES.values():
        if bits == security_level:
            return group_for_curve_id(curve_id)
    raise UnsupportedSecurityLevel(f"nivel de seguranca nao suportado: {security_level}")


def group_for_profile(profile: str) -> PairingGroup:
    try:
        curve_id, _bits = PROFILES[profile]
    except KeyError:
        raise UnsupportedSecurityLevel(f"perfil desconhecido: {profile}") from None
    return group_for_curve_id(curve_id)


def security_level_for_profile(profile: str) -> int:
    try:
        return PROFILES[profile][1]
    except KeyError:
        raise UnsupportedSecurityLevel(f"perfil desconhecido: {profile}") from None

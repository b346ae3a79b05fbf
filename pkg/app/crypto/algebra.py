"""Scalars, group elements, public parameters and the H1/H2 hashes."""
import functools
import hashlib
import struct
from dataclasses import dataclass
from types import MappingProxyType

from app.core.errors import DecodeError, UnsupportedSecurityLevel, ZeroInversion
from app.crypto.groups import PairingGroup, group_for_level
from app.crypto.rng import default_rng

H1_DOMAIN = 0x01
H2_DOMAIN = 0x02
HASH_NAME = "shake256"

GENERATOR_TAGS = {
    "g": b"ASSO:g",
    "h": b"ASSO:h",
    "xi": b"ASSO:xi",
    "h_tilde": b"ASSO:htilde",
    "frak_g": b"ASSO:frakg",
}


@dataclass(frozen=True)
class Scalar:
    value: int
    order: int

    def __post_init__(self):
        if not 0 <= self.value < self.order:
            raise ValueError("escalar fora de [0, p)")

    @classmethod
    def of(cls, value: int, order: int) -> "Scalar":
        return cls(value % order, order)

    def _coerce(self, other) -> int:
        if isinstance(other, Scalar):
            if other.order != self.order:
                raise ValueError("escalares de grupos diferentes")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return Scalar.of(self.value + v, self.order)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return Scalar.of(self.value - v, self.order)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return Scalar.of(v - self.value, self.order)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return Scalar.of(self.value * v, self.order)

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar.of(-self.value, self.order)

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return self * Scalar.of(v, self.order).inverse()

    def inverse(self) -> "Scalar":
        if self.value == 0:
            raise ZeroInversion("inversao de zero")
        return Scalar(pow(self.value, -1, self.order), self.order)

    def is_zero(self) -> bool:
        return self.value == 0

    def __int__(self):
        return self.value

    def to_bytes(self) -> bytes:
        return self.value.to_bytes((self.order.bit_length() + 7) // 8, "big")

    @classmethod
    def from_bytes(cls, data: bytes, order: int) -> "Scalar":
        width = (order.bit_length() + 7) // 8
        if len(data) != width:
            raise DecodeError(f"escalar com {len(data)} bytes, esperado {width}")
        value = int.from_bytes(data, "big")
        if value >= order:
            raise DecodeError("escalar nao canonico")
        return cls(value, order)


def _exponent(k) -> int:
    if isinstance(k, Scalar):
        return k.value
    if isinstance(k, int):
        return k
    raise TypeError(f"expoente invalido: {type(k).__name__}")


class _Element:
    __slots__ = ("group", "point")
    kind = ""

    def __init__(self, group: PairingGroup, point):
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "point", point)

    def __setattr__(self, name, value):
        raise AttributeError("elementos sao imutaveis")

    def _check(self, other):
        if type(other) is not type(self) or other.group is not self.group:
            raise TypeError(f"operacao entre {self.kind} e {type(other).__name__}")

    def __hash__(self):
        return hash((self.kind, self.encode()))

    def __repr__(self):
        return f"{self.kind}({self.encode().hex()[:16]}…)"


class G1Elem(_Element):
    kind = "G1"

    def __mul__(self, other):
        self._check(other)
        return G1Elem(self.group, self.group.g1_add(self.point, other.point))

    def __truediv__(self, other):
        self._check(other)
        return G1Elem(self.group, self.group.g1_add(self.point, self.group.g1_neg(other.point)))

    def __pow__(self, k):
        return G1Elem(self.group, self.group.g1_mul(self.point, _exponent(k)))

    def inverse(self):
        return G1Elem(self.group, self.group.g1_neg(self.point))

    def __eq__(self, other):
        if type(other) is not G1Elem or other.group is not self.group:
            return NotImplemented
        return self.group.g1_eq(self.point, other.point)

    __hash__ = _Element.__hash__

    def is_identity(self) -> bool:
        return self.group.g1_eq(self.point, self.group.g1_identity())

    def encode(self) -> bytes:
        return self.group.encode_g1(self.point)

    @classmethod
    def decode(cls, group: PairingGroup, data: bytes) -> "G1Elem":
        return cls(group, group.decode_g1(bytes(data)))

    @classmethod
    def identity(cls, group: PairingGroup) -> "G1Elem":
        return cls(group, group.g1_identity())


class G2Elem(_Element):
    kind = "G2"

    def __mul__(self, other):
        self._check(other)
        return G2Elem(self.group, self.group.g2_add(self.point, other.point))

    def __truediv__(self, other):
        self._check(other)
        return G2Elem(self.group, self.group.g2_add(self.point, self.group.g2_neg(other.point)))

    def __pow__(self, k):
        return G2Elem(self.group, self.group.g2_mul(self.point, _exponent(k)))

    def __eq__(self, other):
        if type(other) is not G2Elem or other.group is not self.group:
            return NotImplemented
        return self.group.g2_eq(self.point, other.point)

    __hash__ = _Element.__hash__

    def is_identity(self) -> bool:
        return self.group.g2_eq(self.point, self.group.g2_identity())

    def encode(self) -> bytes:
        return self.group.encode_g2(self.point)

    @classmethod
    def decode(cls, group: PairingGroup, data: bytes) -> "G2Elem":
        return cls(group, group.decode_g2(bytes(data)))


class GtElem(_Element):
    kind = "Gt"

    def __mul__(self, other):
        self._check(other)
        return GtElem(self.group, self.group.gt_mul(self.point, other.point))

    def __pow__(self, k):
        return GtElem(self.group, self.group.gt_pow(self.point, _exponent(k)))

    def __eq__(self, other):
        if type(other) is not GtElem or other.group is not self.group:
            return NotImplemented
        return self.group.gt_eq(self.point, other.point)

    def __hash__(self):
        raise TypeError("GtElem nao e hashable")

    def __repr__(self):
        return "Gt(…)"

    def is_identity(self) -> bool:
        return self.group.gt_eq(self.point, self.group.gt_identity())

    @classmethod
    def identity(cls, group: PairingGroup) -> "GtElem":
        return cls(group, group.gt_identity())


def pairing(a: G1Elem, b: G2Elem) -> GtElem:
    if a.group is not b.group:
        raise TypeError("elementos de grupos diferentes")
    return GtElem(a.group, a.group.pair(a.point, b.point))


def pairings_equal(left: tuple[G1Elem, G2Elem], right: tuple[G1Elem, G2Elem]) -> bool:
    """e(a, b) == e(c, d), evaluated as one product with a shared final exponentiation."""
    (a, b), (c, d) = left, right
    group = a.group
    return group.pairing_product_is_one([(a.point, b.point), (group.g1_neg(c.point), d.point)])


def canonical_bytes(part) -> bytes:
    if isinstance(part, (G1Elem, G2Elem)):
        return part.encode()
    if isinstance(part, Scalar):
        return part.to_bytes()
    if isinstance(part, str):
        return part.encode("utf-8")
    if isinstance(part, (bytes, bytearray)):
        return bytes(part)
    raise TypeError(f"tipo sem codificacao canonica: {type(part).__name__}")


def length_prefixed(data: bytes) -> bytes:
    return struct.pack(">I", len(data)) + data


def hash_input(*parts) -> bytes:
    return b"".join(length_prefixed(canonical_bytes(p)) for p in parts)


def hash_to_scalar(domain: int, payload: bytes, group: PairingGroup) -> Scalar:
    width = 2 * group.scalar_size + 16
    digest = hashlib.shake_256(bytes([domain]) + payload).digest(width)
    return Scalar.of(int.from_bytes(digest, "big"), group.order)


@dataclass(frozen=True)
class MasterSecret:
    x_a: Scalar

    def __post_init__(self):
        if self.x_a.is_zero():
            raise ValueError("segredo mestre nulo")


@dataclass(frozen=True, eq=False)
class PublicParams:
    group: PairingGroup
    g: G1Elem
    h: G1Elem
    xi: G1Elem
    h_tilde: G1Elem
    frak_g: G2Elem
    y_a: G2Elem
    hash_name: str = HASH_NAME

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def curve_id(self) -> int:
        return self.group.curve_id

    def scalar(self, value: int) -> Scalar:
        return Scalar.of(value, self.group.order)

    def random_scalar(self, rng, nonzero: bool = True) -> Scalar:
        while True:
            value = rng.randbelow(self.group.order)
            if value or not nonzero:
                return Scalar(value, self.group.order)

    def h1(self, *parts) -> Scalar:
        return hash_to_scalar(H1_DOMAIN, hash_input(*parts), self.group)

    def h2(self, *parts) -> Scalar:
        return hash_to_scalar(H2_DOMAIN, hash_input(*parts), self.group)

    def pairing_identity(self) -> GtElem:
        return GtElem.identity(self.group)

    def __eq__(self, other):
        if not isinstance(other, PublicParams):
            return NotImplemented
        return (
            self.group is other.group
            and (self.g, self.h, self.xi, self.h_tilde) == (other.g, other.h, other.xi, other.h_tilde)
            and self.frak_g == other.frak_g
            and self.y_a == other.y_a
        )

    def __hash__(self):
        return hash((self.group.curve_id, self.y_a))


@functools.lru_cache(maxsize=None)
def derive_generators(group: PairingGroup) -> MappingProxyType:
    gens = {
        name: G1Elem(group, group.g1_from_tag(tag))
        for name, tag in GENERATOR_TAGS.items()
        if name != "frak_g"
    }
    gens["frak_g"] = G2Elem(group, group.g2_from_tag(GENERATOR_TAGS["frak_g"]))
    g1s = [gens[n] for n in ("g", "h", "xi", "h_tilde")]
    if any(e.is_identity() for e in g1s) or gens["frak_g"].is_identity():
        raise UnsupportedSecurityLevel(f"gerador degenerado em {group.name}")
    if len({e.encode() for e in g1s}) != len(g1s):
        raise UnsupportedSecurityLevel(f"geradores repetidos em {group.name}")
    return MappingProxyType(gens)


def setup_params(security_level: int, seed: bytes | str | None = None):
    """CA set-up: master secret x_a and PP = (group, g, h, xi, h~, frak_g, Y_A)."""
    group = group_for_level(security_level)
    rng = default_rng(seed)
    gens = derive_generators(group)
    while True:
        x_a = rng.randbelow(group.order)
        if x_a:
            break
    x_a = Scalar(x_a, group.order)
    pp = PublicParams(group=group, y_a=gens["frak_g"] ** x_a, **gens)
    return MasterSecret(x_a), pp

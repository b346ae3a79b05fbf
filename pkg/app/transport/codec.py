"""Canonical length-prefixed encoding of every domain type; H1/H2 hash these bytes."""
import struct

from app.core.errors import DecodeError
from app.core.models import (
    AuthTag,
    Enrollment,
    RegistrationRequest,
    ServiceSet,
    Showing,
    Ticket,
    TicketClosure,
    TicketEntry,
    TicketRequest,
    TicketWallet,
    TraceReport,
    TraceRequest,
    TraceStatus,
)
from app.crypto.algebra import G1Elem, G2Elem, MasterSecret, PublicParams, Scalar, length_prefixed
from app.crypto.credentials import Credential, EntityKeys, RegistryRecord, Role
from app.crypto.groups import PairingGroup, group_for_curve_id
from app.crypto.proofs import BlindedCredential, Pi1Proof, Pi2Proof, PseudonymPair


class Writer:
    def __init__(self):
        self._parts = []

    def raw(self, data: bytes) -> "Writer":
        self._parts.append(length_prefixed(bytes(data)))
        return self

    def u8(self, value: int) -> "Writer":
        return self.raw(bytes([value]))

    def count(self, value: int) -> "Writer":
        return self.raw(struct.pack(">I", value))

    def scalar(self, value: Scalar) -> "Writer":
        return self.raw(value.to_bytes())

    def g1(self, value: G1Elem) -> "Writer":
        return self.raw(value.encode())

    def g2(self, value: G2Elem) -> "Writer":
        return self.raw(value.encode())

    def text(self, value: str) -> "Writer":
        return self.raw(value.encode("utf-8"))

    def nested(self, value) -> "Writer":
        return self.raw(encode_canonical(value))

    def optional(self, value, write) -> "Writer":
        if value is None:
            return self.raw(b"")
        if value == "":
            raise ValueError("campo opcional vazio; use None")
        return write(value)

    def items(self, values, write) -> "Writer":
        values = list(values)
        self.count(len(values))
        for value in values:
            write(value)
        return self

    def getvalue(self) -> bytes:
        return b"".join(self._parts)


class Reader:
    def __init__(self, data: bytes, group: PairingGroup | None):
        self._data = memoryview(bytes(data))
        self._pos = 0
        self.group = group

    def raw(self) -> bytes:
        if self._pos + 4 > len(self._data):
            raise DecodeError("campo truncado")
        (size,) = struct.unpack(">I", self._data[self._pos:self._pos + 4])
        start = self._pos + 4
        end = start + size
        if end > len(self._data):
            raise DecodeError("campo truncado")
        self._pos = end
        return bytes(self._data[start:end])

    @property
    def position(self) -> int:
        return self._pos

    def _require_group(self) -> PairingGroup:
        if self.group is None:
            raise DecodeError("grupo desconhecido para decodificar elemento")
        return self.group

    def u8(self) -> int:
        data = self.raw()
        if len(data) != 1:
            raise DecodeError("u8 invalido")
        return data[0]

    def count(self) -> int:
        data = self.raw()
        if len(data) != 4:
            raise DecodeError("contador invalido")
        return struct.unpack(">I", data)[0]

    def scalar(self) -> Scalar:
        return Scalar.from_bytes(self.raw(), self._require_group().order)

    def g1(self) -> G1Elem:
        return G1Elem.decode(self._require_group(), self.raw())

    def g2(self) -> G2Elem:
        return G2Elem.decode(self._require_group(), self.raw())

    def text(self) -> str:
        try:
            return self.raw().decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DecodeError("texto nao UTF-8") from exc

    def nested(self, cls):
        return decode_canonical(cls, self.raw(), self.group)

    def optional(self, read):
        if self._pos + 4 <= len(self._data) and self._data[self._pos:self._pos + 4] == b"\x00\x00\x00\x00":
            self._pos += 4
            return None
        return read()

    def items(self, read) -> tuple:
        n = self.count()
        if n > len(self._data):
            raise DecodeError("lista com tamanho impossivel")
        return tuple(read() for _ in range(n))

    def done(self) -> None:
        if self._pos != len(self._data):
            raise DecodeError("bytes sobrando apos o ultimo campo")


def _write_params(w, pp: PublicParams):
    w.u8(pp.curve_id).text(pp.hash_name)
    w.g1(pp.g).g1(pp.h).g1(pp.xi).g1(pp.h_tilde).g2(pp.frak_g).g2(pp.y_a)


def _read_params(r) -> PublicParams:
    r.group = group_for_curve_id(r.u8())
    hash_name = r.text()
    return PublicParams(
        group=r.group,
        hash_name=hash_name,
        g=r.g1(),
        h=r.g1(),
        xi=r.g1(),
        h_tilde=r.g1(),
        frak_g=r.g2(),
        y_a=r.g2(),
    )


def _read_role(r) -> Role:
    try:
        return Role.from_code(r.u8())
    except ValueError as exc:
        raise DecodeError(str(exc)) from exc


def _write_keys(w, keys: EntityKeys):
    w.u8(keys.role.code).scalar(keys.x).g1(keys.y).optional(keys.y_tilde, w.g2)


def _read_keys(r) -> EntityKeys:
    role = _read_role(r)
    x, y = r.scalar(), r.g1()
    y_tilde = r.optional(r.g2)
    try:
        return EntityKeys(role=role, x=x, y=y, y_tilde=y_tilde)
    except ValueError as exc:
        raise DecodeError(str(exc)) from exc


def _write_record(w, rec: RegistryRecord):
    w.text(rec.identity).u8(rec.role.code).g1(rec.y).nested(rec.credential).optional(rec.y_tilde, w.g2)


def _read_record(r) -> RegistryRecord:
    return RegistryRecord(
        identity=r.text(),
        role=_read_role(r),
        y=r.g1(),
        credential=r.nested(Credential),
        y_tilde=r.optional(r.g2),
    )


def _write_request(w, req: RegistrationRequest):
    w.text(req.identity).u8(req.role.code).g1(req.y).optional(req.y_tilde, w.g2)


def _read_request(r) -> RegistrationRequest:
    return RegistrationRequest(identity=r.text(), role=_read_role(r), y=r.g1(), y_tilde=r.optional(r.g2))


def _write_pi1(w, proof: Pi1Proof):
    w.g1(proof.sigma_bar).g1(proof.sigma_tilde).g1(proof.b_bar).g1(proof.w1).g1(proof.w2)
    w.items(proof.commitments, lambda pq: w.g1(pq[0]).g1(pq[1]))
    w.scalar(proof.c).scalar(proof.e_hat).scalar(proof.v2_hat).scalar(proof.v3_hat)
    w.scalar(proof.v_hat).scalar(proof.x_hat)
    w.items(proof.z_hats, w.scalar)


def _read_pi1(r) -> Pi1Proof:
    return Pi1Proof(
        sigma_bar=r.g1(),
        sigma_tilde=r.g1(),
        b_bar=r.g1(),
        w1=r.g1(),
        w2=r.g1(),
        commitments=r.items(lambda: (r.g1(), r.g1())),
        c=r.scalar(),
        e_hat=r.scalar(),
        v2_hat=r.scalar(),
        v3_hat=r.scalar(),
        v_hat=r.scalar(),
        x_hat=r.scalar(),
        z_hats=r.items(r.scalar),
    )


def _write_tag(w, tag: AuthTag):
    w.g1(tag.p).g1(tag.q).g1(tag.e_elem).g1(tag.f).g1(tag.k).text(tag.text)
    w.scalar(tag.s).scalar(tag.w).scalar(tag.e).g1(tag.z)


def _read_tag(r) -> AuthTag:
    return AuthTag(
        p=r.g1(),
        q=r.g1(),
        e_elem=r.g1(),
        f=r.g1(),
        k=r.g1(),
        text=r.text(),
        s=r.scalar(),
        w=r.scalar(),
        e=r.scalar(),
        z=r.g1(),
    )


def _write_entries(w, entries):
    w.items(entries, w.nested)


def _write_ticket(w, ticket: Ticket):
    _write_entries(w, ticket.entries)
    w.nested(ticket.closure).g1(ticket.c_u)


def _read_ticket(r) -> Ticket:
    return Ticket(entries=r.items(lambda: r.nested(TicketEntry)), closure=r.nested(TicketClosure), c_u=r.g1())


def _write_trace_report(w, report: TraceReport):
    w.u8(1 if report.traced else 0)
    w.optional(report.user_key, w.g1)
    w.items(report.services, lambda item: w.text(item[0]).g1(item[1]))
    w.optional(report.user_id, w.text)
    w.optional(report.reason, w.text)


def _read_trace_report(r) -> TraceReport:
    status = TraceStatus.TRACED if r.u8() == 1 else TraceStatus.FAILED
    return TraceReport(
        status=status,
        user_key=r.optional(r.g1),
        services=r.items(lambda: (r.text(), r.g1())),
        user_id=r.optional(r.text),
        reason=r.optional(r.text),
    )


_CODECS = {
    Scalar: (lambda w, v: w.scalar(v), lambda r: r.scalar()),
    G1Elem: (lambda w, v: w.g1(v), lambda r: r.g1()),
    G2Elem: (lambda w, v: w.g2(v), lambda r: r.g2()),
    PublicParams: (_write_params, _read_params),
    MasterSecret: (lambda w, v: w.scalar(v.x_a), lambda r: MasterSecret(r.scalar())),
    EntityKeys: (_write_keys, _read_keys),
    Credential: (
        lambda w, v: w.scalar(v.e).scalar(v.r).g1(v.sigma),
        lambda r: Credential(e=r.scalar(), r=r.scalar(), sigma=r.g1()),
    ),
    RegistryRecord: (_write_record, _read_record),
    RegistrationRequest: (_write_request, _read_request),
    Enrollment: (
        lambda w, v: w.text(v.identity).nested(v.keys).nested(v.credential),
        lambda r: Enrollment(identity=r.text(), keys=r.nested(EntityKeys), credential=r.nested(Credential)),
    ),
    BlindedCredential: (
        lambda w, v: w.g1(v.sigma_bar).g1(v.sigma_tilde).g1(v.b_bar),
        lambda r: BlindedCredential(r.g1(), r.g1(), r.g1()),
    ),
    PseudonymPair: (
        lambda w, v: w.text(v.verifier_id).g1(v.p).g1(v.q),
        lambda r: PseudonymPair(verifier_id=r.text(), p=r.g1(), q=r.g1()),
    ),
    Pi1Proof: (_write_pi1, _read_pi1),
    Pi2Proof: (
        lambda w, v: w.g1(v.p_prime).g1(v.q_prime).scalar(v.c).scalar(v.x_hat).scalar(v.z_hat),
        lambda r: Pi2Proof(p_prime=r.g1(), q_prime=r.g1(), c=r.scalar(), x_hat=r.scalar(), z_hat=r.scalar()),
    ),
    ServiceSet: (
        lambda w, v: w.items(v.ids, w.text),
        lambda r: ServiceSet(r.items(r.text)),
    ),
    TicketRequest: (
        lambda w, v: w.nested(v.service_set).items(v.pseudonyms, w.nested).nested(v.proof),
        lambda r: TicketRequest(
            service_set=r.nested(ServiceSet),
            pseudonyms=r.items(lambda: r.nested(PseudonymPair)),
            proof=r.nested(Pi1Proof),
        ),
    ),
    AuthTag: (_write_tag, _read_tag),
    TicketEntry: (
        lambda w, v: w.scalar(v.d).nested(v.tag),
        lambda r: TicketEntry(d=r.scalar(), tag=r.nested(AuthTag)),
    ),
    TicketClosure: (
        lambda w, v: w.scalar(v.s).scalar(v.w).scalar(v.e).g1(v.z),
        lambda r: TicketClosure(s=r.scalar(), w=r.scalar(), e=r.scalar(), z=r.g1()),
    ),
    Ticket: (_write_ticket, _read_ticket),
    TicketWallet: (
        lambda w, v: w.scalar(v.z_u).nested(v.service_set).nested(v.ticket),
        lambda r: TicketWallet(z_u=r.scalar(), service_set=r.nested(ServiceSet), ticket=r.nested(Ticket)),
    ),
    Showing: (
        lambda w, v: w.nested(v.tag).nested(v.proof),
        lambda r: Showing(tag=r.nested(AuthTag), proof=r.nested(Pi2Proof)),
    ),
    TraceRequest: (
        lambda w, v: (_write_entries(w, v.entries), w.nested(v.closure).nested(v.showing)),
        lambda r: TraceRequest(
            entries=r.items(lambda: r.nested(TicketEntry)),
            closure=r.nested(TicketClosure),
            showing=r.nested(Showing),
        ),
    ),
    TraceReport: (_write_trace_report, _read_trace_report),
}


def encode_canonical(obj) -> bytes:
    try:
        write, _read = _CODECS[type(obj)]
    except KeyError:
        raise TypeError(f"tipo sem codificacao canonica: {type(obj).__name__}") from None
    w = Writer()
    write(w, obj)
    return w.getvalue()


def decode_canonical(cls, data: bytes, group: PairingGroup | None = None):
    try:
        _write, read = _CODECS[cls]
    except KeyError:
        raise TypeError(f"tipo sem decodificacao canonica: {cls.__name__}") from None
    r = Reader(data, group)
    try:
        obj = read(r)
    except (ValueError, TypeError) as exc:
        raise DecodeError(f"{cls.__name__} invalido: {exc}") from exc
    r.done()
    return obj


def spend_fingerprint(tag: AuthTag) -> bytes:
    """Ledger key for a shown tag: (e, w, s, Z)."""
    return Writer().scalar(tag.e).scalar(tag.w).scalar(tag.s).g1(tag.z).getvalue()

"""Envelope framing, log record framing and the armored JSON wrapper."""
import base64
import binascii
import json
import struct
import zlib
from enum import IntEnum

from app.core.errors import DecodeError, UnknownMessageType, UnsupportedVersion
from app.core.models import (
    Enrollment,
    RegistrationRequest,
    Showing,
    Ticket,
    TicketRequest,
    TicketWallet,
    TraceReport,
    TraceRequest,
)
from app.crypto.algebra import MasterSecret, PublicParams
from app.crypto.credentials import Credential, RegistryRecord
from app.transport.codec import Writer, Reader, decode_canonical, encode_canonical

MAGIC = b"ASSO"
VERSION = 1
_HEADER = struct.Struct(">4sHB")
_RECORD_LEN = struct.Struct(">I")
_RECORD_CRC = struct.Struct(">I")


class MessageType(IntEnum):
    PARAMS = 0x01
    MASTER_SECRET = 0x02
    ENROLLMENT = 0x03
    REGISTRY_RECORD = 0x04
    REGISTRATION_REQUEST = 0x05
    CREDENTIAL = 0x06
    TICKET_REQUEST = 0x07
    TICKET = 0x08
    WALLET = 0x09
    SHOWING = 0x0A
    TRACE_REQUEST = 0x0B
    TRACE_REPORT = 0x0C
    REGISTRY_LOG = 0x0D
    LEDGER_LOG = 0x0E


_TYPES = {
    MessageType.PARAMS: PublicParams,
    MessageType.MASTER_SECRET: MasterSecret,
    MessageType.ENROLLMENT: Enrollment,
    MessageType.REGISTRY_RECORD: RegistryRecord,
    MessageType.REGISTRATION_REQUEST: RegistrationRequest,
    MessageType.CREDENTIAL: Credential,
    MessageType.TICKET_REQUEST: TicketRequest,
    MessageType.TICKET: Ticket,
    MessageType.WALLET: TicketWallet,
    MessageType.SHOWING: Showing,
    MessageType.TRACE_REQUEST: TraceRequest,
    MessageType.TRACE_REPORT: TraceReport,
}
_TYPE_OF = {cls: msg_type for msg_type, cls in _TYPES.items()}


def message_type_for(obj) -> MessageType:
    try:
        return _TYPE_OF[type(obj)]
    except KeyError:
        raise TypeError(f"sem tipo de mensagem para {type(obj).__name__}") from None


def seal_raw(msg_type: MessageType, body: bytes) -> bytes:
    return _HEADER.pack(MAGIC, VERSION, int(msg_type)) + body


def seal(obj) -> bytes:
    return seal_raw(message_type_for(obj), encode_canonical(obj))


def read_header(data: bytes) -> tuple[MessageType, bytes]:
    if len(data) < _HEADER.size:
        raise DecodeError("envelope truncado")
    magic, version, raw_type = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise DecodeError("magic invalido")
    if version != VERSION:
        raise UnsupportedVersion(f"versao {version} nao suportada")
    try:
        msg_type = MessageType(raw_type)
    except ValueError:
        raise UnknownMessageType(f"tipo de mensagem desconhecido: {raw_type:#x}") from None
    return msg_type, bytes(data[_HEADER.size:])


def unseal(data: bytes, group=None, expected: MessageType | None = None):
    """Decodes an envelope; params carry their own curve id, everything else needs ``group``."""
    msg_type, body = read_header(data)
    if expected is not None and msg_type is not expected:
        raise DecodeError(f"esperado {expected.name}, recebido {msg_type.name}")
    cls = _TYPES.get(msg_type)
    if cls is None:
        raise UnknownMessageType(f"{msg_type.name} nao tem corpo decodificavel")
    return decode_canonical(cls, body, group)


def log_header(msg_type: MessageType, curve_id: int, label: str = "") -> bytes:
    return seal_raw(msg_type, Writer().u8(curve_id).text(label).getvalue())


def read_log_header(data: bytes, expected: MessageType) -> tuple[int, str, int]:
    """Returns (curve id, label, header size) of a log file."""
    msg_type, rest = read_header(data)
    if msg_type is not expected:
        raise DecodeError(f"esperado {expected.name}, recebido {msg_type.name}")
    r = Reader(rest, None)
    curve_id = r.u8()
    label = r.text()
    return curve_id, label, _HEADER.size + r.position


def frame_record(body: bytes) -> bytes:
    return _RECORD_LEN.pack(len(body)) + body + _RECORD_CRC.pack(zlib.crc32(body))


def iter_records(data: bytes, offset: int = 0):
    """Yields (offset, body) for each complete record.

    A record cut short at the end of the data is a torn write: iteration stops
    and the caller gets ``TornTail`` as the last item. A complete record with a
    wrong checksum raises DecodeError.
    """
    pos = offset
    while pos < len(data):
        if pos + _RECORD_LEN.size > len(data):
            yield TornTail(pos)
            return
        (size,) = _RECORD_LEN.unpack_from(data, pos)
        end = pos + _RECORD_LEN.size + size + _RECORD_CRC.size
        if end > len(data):
            yield TornTail(pos)
            return
        body = bytes(data[pos + _RECORD_LEN.size:end - _RECORD_CRC.size])
        (crc,) = _RECORD_CRC.unpack_from(data, end - _RECORD_CRC.size)
        if crc != zlib.crc32(body):
            raise DecodeError(f"checksum invalido no registro em {pos}")
        yield pos, body
        pos = end


class TornTail:
    __slots__ = ("offset",)

    def __init__(self, offset: int):
        self.offset = offset


def armor(data: bytes) -> str:
    msg_type, _body = read_header(data)
    return json.dumps(
        {"asso": VERSION, "type": msg_type.name, "data": base64.b64encode(data).decode("ascii")},
        ensure_ascii=False,
    )


def dearmor(text: str | bytes) -> bytes:
    try:
        doc = json.loads(text)
        data = base64.b64decode(doc["data"], validate=True)
    except (ValueError, KeyError, TypeError, binascii.Error) as exc:
        raise DecodeError(f"JSON armado invalido: {exc}") from exc
    if doc.get("asso") != VERSION:
        raise UnsupportedVersion(f"versao {doc.get('asso')} nao suportada")
    msg_type, _body = read_header(data)
    if doc.get("type") != msg_type.name:
        raise DecodeError("tipo do JSON nao confere com o envelope")
    return data


def load_bytes(raw: bytes) -> bytes:
    """Accepts either a binary envelope or its armored JSON form."""
    if raw[:len(MAGIC)] == MAGIC:
        return raw
    if raw.lstrip()[:1] == b"{":
        return dearmor(raw)
    raise DecodeError("nem envelope binario nem JSON armado")

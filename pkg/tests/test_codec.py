import json
from dataclasses import replace

import pytest

from app.core.errors import DecodeError, UnknownMessageType, UnsupportedVersion
from app.core.models import Enrollment, TicketWallet, TraceReport, TraceStatus
from app.crypto.algebra import PublicParams, setup_params
from app.crypto.credentials import RegistryRecord
from app.services.trace_service import cv_trace, user_prepare_trace
from app.services.validation_service import show_from_wallet
from app.transport.codec import Writer, decode_canonical, encode_canonical, spend_fingerprint
from app.transport.envelope import (
    MAGIC,
    MessageType,
    TornTail,
    armor,
    dearmor,
    frame_record,
    iter_records,
    load_bytes,
    log_header,
    read_log_header,
    seal,
    seal_raw,
    unseal,
)

TOY64_PARAMS_S0 = (
    "4153534f" "0001" "01"
    "00000001" "f0"
    "00000008" "7368616b65323536"
    "00000008" "0f54cff37642f137"
    "00000008" "0b6d4fdb7490a538"
    "00000008" "1f119b3119f3b80d"
    "00000008" "00d404b4321ae3a5"
    "00000008" "1c284a8bf87edc61"
    "00000008" "0dbfe408c5a3f2fc"
)


def test_params_envelope_regression_fixture():
    _msk, pp = setup_params(64, "s0")
    assert seal(pp).hex() == TOY64_PARAMS_S0


def test_params_decode_without_group():
    _msk, pp = setup_params(64, "s0")
    decoded = unseal(bytes.fromhex(TOY64_PARAMS_S0))
    assert isinstance(decoded, PublicParams)
    assert decoded == pp
    assert decoded.group is pp.group


def test_master_secret_round_trip():
    msk, pp = setup_params(64, "s0")
    assert unseal(seal(msk), pp.group, MessageType.MASTER_SECRET) == msk


def _every_message(system):
    pp = system.pp
    wallet = system.issue(2)
    _z_u, _set, request = system.request(2)
    showing = show_from_wallet(pp, wallet, system.user.keys.x, "V1", system.y_cv, system.rng)
    trace_request = user_prepare_trace(pp, wallet, system.user.keys.x, "CV", system.y_cv, system.rng)
    traced = cv_trace(pp, system.cv, system.registry, trace_request, system.y_tilde_i)
    return {
        "params": pp,
        "enrollment": system.user,
        "issuer_enrollment": system.issuer,
        "record": system.registry.get("I"),
        "credential": system.user.credential,
        "ticket_request": request,
        "ticket": wallet.ticket,
        "wallet": wallet,
        "showing": showing,
        "trace_request": trace_request,
        "trace_report": traced,
        "failed_report": TraceReport.failed("containment"),
    }


ROUND_TRIP_INSTANCES = 50


@pytest.mark.parametrize("instance", range(ROUND_TRIP_INSTANCES))
def test_every_message_round_trips(make_system, instance):
    system = make_system(seed=f"codec-{instance}")
    identity = f"U{instance}"
    messages = _every_message(system)
    messages["fresh_enrollment"] = system.add_user(identity)
    messages["fresh_record"] = system.registry.get(identity)
    messages["fresh_credential"] = messages["fresh_enrollment"].credential
    for name, obj in messages.items():
        data = seal(obj)
        assert data[:4] == MAGIC, name
        assert unseal(data, system.pp.group) == obj, name
        assert encode_canonical(obj) == data[7:], name


def test_encoding_is_deterministic(system):
    wallet = system.issue(1)
    assert encode_canonical(wallet) == encode_canonical(wallet)
    assert seal(decode_canonical(TicketWallet, encode_canonical(wallet), system.pp.group)) == seal(wallet)


def test_every_tag_field_changes_the_encoding(system):
    tag = system.issue(1).ticket.entries[0].tag
    g = system.pp.g
    variants = [
        replace(tag, p=tag.p * g),
        replace(tag, q=tag.q * g),
        replace(tag, e_elem=tag.e_elem * g),
        replace(tag, f=tag.f * g),
        replace(tag, k=tag.k * g),
        replace(tag, text=tag.text + "!"),
        replace(tag, s=tag.s + 1),
        replace(tag, w=tag.w + 1),
        replace(tag, e=tag.e + 1),
        replace(tag, z=tag.z * g),
    ]
    encodings = {encode_canonical(variant) for variant in variants}
    assert len(encodings) == len(variants)
    assert encode_canonical(tag) not in encodings


def test_spend_fingerprint_covers_signature_and_serial(system):
    tag = system.issue(1).ticket.entries[0].tag
    base = spend_fingerprint(tag)
    assert spend_fingerprint(replace(tag, text="other")) == base
    for variant in (replace(tag, e=tag.e + 1), replace(tag, w=tag.w + 1), replace(tag, s=tag.s + 1)):
        assert spend_fingerprint(variant) != base
    assert spend_fingerprint(replace(tag, z=tag.z * system.pp.g)) != base


def test_text_is_utf8(system):
    def policy(verifier_id):
        return f"acesso;svc={verifier_id};região=sul"

    wallet = system.issue(1, policy=policy)
    decoded = unseal(seal(wallet), system.pp.group)
    assert decoded.ticket.entries[0].tag.text == "acesso;svc=V1;região=sul"


def test_registry_record_keeps_optional_g2_key(system):
    issuer = system.registry.get("I")
    verifier = system.registry.get("V1")
    assert unseal(seal(issuer), system.pp.group).y_tilde == issuer.y_tilde
    assert unseal(seal(verifier), system.pp.group).y_tilde is None


def test_trace_report_keeps_status(system):
    report = TraceReport.failed("hash:2")
    decoded = unseal(seal(report), system.pp.group)
    assert decoded.status is TraceStatus.FAILED
    assert decoded.reason == "hash:2"
    assert decoded.user_key is None


def test_bad_magic():
    data = bytearray(bytes.fromhex(TOY64_PARAMS_S0))
    data[0] ^= 0xFF
    with pytest.raises(DecodeError):
        unseal(bytes(data))


def test_unsupported_version():
    data = bytearray(bytes.fromhex(TOY64_PARAMS_S0))
    data[5] = 2
    with pytest.raises(UnsupportedVersion):
        unseal(bytes(data))


def test_unknown_message_type():
    data = bytearray(bytes.fromhex(TOY64_PARAMS_S0))
    data[6] = 0x7F
    with pytest.raises(UnknownMessageType):
        unseal(bytes(data))


def test_unexpected_message_type(system):
    with pytest.raises(DecodeError):
        unseal(seal(system.user.credential), system.pp.group, MessageType.TICKET)


def test_log_types_have_no_body_codec():
    with pytest.raises(UnknownMessageType):
        unseal(log_header(MessageType.LEDGER_LOG, 0xF0, "V1"))


def test_truncated_envelope():
    data = bytes.fromhex(TOY64_PARAMS_S0)
    with pytest.raises(DecodeError):
        unseal(data[:5])
    with pytest.raises(DecodeError):
        unseal(data[:-1])


def test_trailing_bytes_are_rejected():
    with pytest.raises(DecodeError):
        unseal(bytes.fromhex(TOY64_PARAMS_S0) + b"\x00")


def test_unknown_curve_id():
    data = bytearray(bytes.fromhex(TOY64_PARAMS_S0))
    data[11] = 0x77
    with pytest.raises(DecodeError):
        unseal(bytes(data))


def test_element_from_other_curve_is_rejected(system):
    _msk, pp16 = setup_params(16, "s0")
    with pytest.raises(DecodeError):
        unseal(seal(system.user.credential), pp16.group)


def test_invalid_role_code(system):
    record = system.registry.get("V1")
    body = bytearray(encode_canonical(record))
    role_at = 4 + len(b"V1") + 4
    body[role_at] = 9
    with pytest.raises(DecodeError):
        decode_canonical(RegistryRecord, bytes(body), system.pp.group)


def test_element_decode_needs_group(system):
    with pytest.raises(DecodeError):
        unseal(seal(system.user.credential))


def test_unencodable_type():
    with pytest.raises(TypeError):
        encode_canonical(object())


def test_armor_round_trip(system):
    data = seal(system.user)
    text = armor(data)
    doc = json.loads(text)
    assert doc["asso"] == 1
    assert doc["type"] == "ENROLLMENT"
    assert dearmor(text) == data
    assert load_bytes(text.encode()) == data
    assert load_bytes(data) == data
    assert isinstance(unseal(load_bytes(text.encode()), system.pp.group), Enrollment)


def test_armor_type_must_match_envelope(system):
    doc = json.loads(armor(seal(system.user)))
    doc["type"] = "TICKET"
    with pytest.raises(DecodeError):
        dearmor(json.dumps(doc))


@pytest.mark.parametrize("text", ["not json", '{"asso": 1}', '{"asso": 1, "type": "PARAMS", "data": "%%%"}'])
def test_dearmor_rejects_garbage(text):
    with pytest.raises(DecodeError):
        dearmor(text)


def test_dearmor_rejects_other_version():
    doc = json.loads(armor(bytes.fromhex(TOY64_PARAMS_S0)))
    doc["asso"] = 2
    with pytest.raises(UnsupportedVersion):
        dearmor(json.dumps(doc))


def test_load_bytes_rejects_unknown_format():
    with pytest.raises(DecodeError):
        load_bytes(b"hello")


def test_log_header_round_trip():
    header = log_header(MessageType.REGISTRY_LOG, 0xF0, "registry")
    assert read_log_header(header, MessageType.REGISTRY_LOG) == (0xF0, "registry", len(header))
    with pytest.raises(DecodeError):
        read_log_header(header, MessageType.LEDGER_LOG)


def test_record_framing():
    data = frame_record(b"one") + frame_record(b"") + frame_record(b"three")
    records = list(iter_records(data))
    assert [body for _pos, body in records] == [b"one", b"", b"three"]
    assert records[1][0] == 4 + 3 + 4


def test_torn_record_is_reported():
    first = frame_record(b"one")
    data = first + frame_record(b"two")[:-2]
    items = list(iter_records(data))
    assert items[0] == (0, b"one")
    assert isinstance(items[1], TornTail)
    assert items[1].offset == len(first)


def test_bad_checksum_raises():
    data = bytearray(frame_record(b"one"))
    data[5] ^= 0x01
    with pytest.raises(DecodeError):
        list(iter_records(bytes(data)))


def test_writer_fields_are_length_prefixed():
    assert Writer().text("ab").u8(7).getvalue() == b"\x00\x00\x00\x02ab\x00\x00\x00\x01\x07"
    assert seal_raw(MessageType.PARAMS, b"") == b"ASSO\x00\x01\x01"


def test_empty_optional_text_is_refused():
    with pytest.raises(ValueError):
        TraceReport.failed("")
    with pytest.raises(ValueError):
        TraceReport(TraceStatus.TRACED, user_id="")
    writer = Writer()
    with pytest.raises(ValueError):
        writer.optional("", writer.text)
    assert writer.optional(None, writer.text).getvalue() == b"\x00\x00\x00\x00"

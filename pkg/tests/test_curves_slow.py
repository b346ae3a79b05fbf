import pytest
from py_ecc import optimized_bls12_381 as bls
from py_ecc import optimized_bn128 as bn
from py_ecc.bls.hash_to_curve import map_to_curve_G1, map_to_curve_G2

from app.core.errors import DecodeError
from app.core.models import RejectReason
from app.crypto.algebra import pairing, setup_params
from app.crypto.groups import group_for_profile, security_level_for_profile
from app.services.trace_service import cv_trace, user_prepare_trace
from app.services.validation_service import show_from_wallet, verifier_validate
from app.transport.envelope import seal, unseal

pytestmark = pytest.mark.slow

BLS_X_A_S0 = 4838328894089703424036209986558090820926388655586959577979757354898102693645
BLS_PARAMS_S0_PREFIX = (
    "4153534f" "0001" "01"
    "00000001" "01"
    "00000008" "7368616b65323536"
)


@pytest.mark.parametrize("profile", ["default", "compat"])
def test_setup_on_real_curves(profile):
    group = group_for_profile(profile)
    _msk, pp = setup_params(security_level_for_profile(profile), "curves")
    assert pp.group is group
    assert not pairing(pp.g, pp.frak_g).is_identity()
    a, b = pp.scalar(3), pp.scalar(5)
    assert pairing(pp.g ** a, pp.frak_g ** b) == pairing(pp.g, pp.frak_g) ** (a * b)
    assert unseal(seal(pp)) == pp


def test_end_to_end_on_bls12_381(make_system):
    system = make_system(level=128, n_verifiers=2, seed="bls")
    wallet = system.issue(2)

    showing = show_from_wallet(system.pp, wallet, system.user.keys.x, "V2", system.y_cv, system.rng)
    verifier = system.verifier("V2")
    result = verifier_validate(
        system.pp, verifier.keys, system.ledger("V2"), showing.tag, showing.proof, system.y_tilde_i, system.y_cv
    )
    assert result.accepted
    again = verifier_validate(
        system.pp, verifier.keys, system.ledger("V2"), showing.tag, showing.proof, system.y_tilde_i, system.y_cv
    )
    assert again.reason is RejectReason.DOUBLE_SPEND

    request = user_prepare_trace(system.pp, wallet, system.user.keys.x, "CV", system.y_cv, system.rng)
    report = cv_trace(system.pp, system.cv, system.registry, request, system.y_tilde_i)
    assert report.traced
    assert report.user_id == "U"
    assert report.service_ids == ["V1", "V2", "CV"]


def test_bls12_381_params_regression_fixture():
    msk, pp = setup_params(128, "s0")
    data = seal(pp)
    assert msk.x_a.value == BLS_X_A_S0
    assert data.hex().startswith(BLS_PARAMS_S0_PREFIX)
    assert pp.y_a == pp.frak_g ** msk.x_a

    offset = len(BLS_PARAMS_S0_PREFIX) // 2
    for expected in (48, 48, 48, 48, 96, 96):
        size = int.from_bytes(data[offset:offset + 4], "big")
        assert size == expected
        field = data[offset + 4:offset + 4 + size]
        assert field[0] & 0x80
        assert not field[0] & 0x40
        offset += 4 + size
    assert offset == len(data)
    assert seal(setup_params(128, "s0")[1]) == data


def _in_subgroup(curve, point):
    return curve.is_inf(curve.multiply(point, curve.curve_order))


def test_bls12_381_rejects_points_outside_subgroup():
    group = group_for_profile("default")
    g1_point = map_to_curve_G1(bls.FQ(7))
    g2_point = map_to_curve_G2(bls.FQ2([1, 2]))
    assert bls.is_on_curve(g1_point, bls.b) and not _in_subgroup(bls, g1_point)
    assert bls.is_on_curve(g2_point, bls.b2) and not _in_subgroup(bls, g2_point)

    with pytest.raises(DecodeError):
        group.decode_g1(group.encode_g1(g1_point))
    with pytest.raises(DecodeError):
        group.decode_g2(group.encode_g2(g2_point))


def test_bls12_381_rejects_non_canonical_encodings():
    group = group_for_profile("default")
    g1 = bytearray(group.encode_g1(bls.G1))
    g2 = bytearray(group.encode_g2(bls.G2))
    assert bls.eq(group.decode_g1(bytes(g1)), bls.G1)

    uncompressed_flag = bytes([g1[0] & 0x7F]) + bytes(g1[1:])
    x_equal_to_modulus = bytearray(bls.field_modulus.to_bytes(48, "big"))
    x_equal_to_modulus[0] |= 0x80
    dirty_infinity = bytearray(48)
    dirty_infinity[0] = 0xC0
    dirty_infinity[-1] = 0x01
    for data in (uncompressed_flag, bytes(x_equal_to_modulus), bytes(dirty_infinity), bytes(g1) + b"\x00"):
        with pytest.raises(DecodeError):
            group.decode_g1(data)

    flagged_real_part = bytearray(g2)
    flagged_real_part[48] |= 0x80
    for data in (bytes([g2[0] & 0x7F]) + bytes(g2[1:]), bytes(flagged_real_part)):
        with pytest.raises(DecodeError):
            group.decode_g2(data)


def test_bn254_rejects_bad_g1_points():
    group = group_for_profile("compat")
    q = bn.field_modulus
    generator = group.encode_g1(bn.G1)
    assert bn.eq(group.decode_g1(generator), bn.G1)

    off_curve = (1).to_bytes(32, "big") + (1).to_bytes(32, "big")
    unreduced_x = (1 + q).to_bytes(32, "big") + generator[32:]
    unreduced_y = generator[:32] + (2 + q).to_bytes(32, "big")
    for data in (off_curve, unreduced_x, unreduced_y):
        with pytest.raises(DecodeError):
            group.decode_g1(data)


def _fq2_sqrt(value):
    q = bn.field_modulus
    a1 = value ** ((q - 3) // 4)
    alpha = a1 * a1 * value
    x0 = a1 * value
    if alpha == -bn.FQ2.one():
        root = bn.FQ2([0, 1]) * x0
    else:
        root = (bn.FQ2.one() + alpha) ** ((q - 1) // 2) * x0
    return root if root * root == value else None


def _bn254_twist_point_outside_subgroup():
    for k in range(1, 64):
        x = bn.FQ2([k, 1])
        y = _fq2_sqrt(x ** 3 + bn.b2)
        if y is not None:
            return (x, y, bn.FQ2.one())
    raise AssertionError("nenhum ponto encontrado")


def test_bn254_rejects_g2_cofactor_point():
    group = group_for_profile("compat")
    point = _bn254_twist_point_outside_subgroup()
    assert bn.is_on_curve(point, bn.b2)
    assert not _in_subgroup(bn, point)

    with pytest.raises(DecodeError):
        group.decode_g2(group.encode_g2(point))
    assert bn.eq(group.decode_g2(group.encode_g2(bn.G2)), bn.G2)

    data = bytearray(group.encode_g2(bn.G2))
    data[:32] = (int.from_bytes(data[:32], "big") + bn.field_modulus).to_bytes(32, "big")
    with pytest.raises(DecodeError):
        group.decode_g2(bytes(data))

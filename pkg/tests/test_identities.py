# tests/test_identities.py
import pytest

from conftest import close
from errors import UnknownIdentity
from identities import get_identity, registry
from qarith import QContext
from verify import ParamSample, sweep, verify_identity

EXPECTED_IDS = [
    "QPDE_HAHN", "EXPANSION_ROUNDTRIP", "GEN_FUNC", "MEHLER", "ANDREWS_ASKEY", "MOMENT_W",
    "QINT_HAHN_SERIES", "QINT_3PHI2", "AL_SALAM_VERMA", "QGAUSS_STEP", "QINT_DOUBLE",
    "ASKEY_WILSON", "AW_QINT_EXCHANGE", "CURIOUS", "ISV", "LIU_BETA", "NASSRALLAH_RAHMAN",
    "MULTILINEAR", "Q_LAURICELLA", "HK_PARTIAL_FRACTION", "RS_MULTISUM", "SRIVASTAVA_JAIN",
]


# -----------------------
# Registry
# -----------------------
def test_registry_order_and_size():
    assert registry() == EXPECTED_IDS


@pytest.mark.parametrize("identity_id", EXPECTED_IDS)
def test_sides_take_different_paths(identity_id):
    identity = get_identity(identity_id)
    assert identity.lhs_path != identity.rhs_path
    assert identity.anchor
    assert 0 < identity.tolerance <= 1e-6


def test_unknown_identity():
    with pytest.raises(UnknownIdentity) as info:
        get_identity("NO_SUCH_ID")
    assert isinstance(info.value, KeyError)
    assert "NO_SUCH_ID" in str(info.value)


def test_wide_tolerance_for_several_variables():
    multilinear = get_identity("MULTILINEAR")
    assert multilinear.tolerance_for({"k": 1 + 0j}) == 1e-8
    assert multilinear.tolerance_for({"k": 3 + 0j}) == 1e-6
    assert get_identity("ASKEY_WILSON").tolerance_for({}) == 1e-8


def test_structure_cycles_with_point_index():
    qpde = get_identity("QPDE_HAHN")
    assert qpde.structure(0) == {"n": 0}
    assert qpde.structure(13) == {"n": 0}
    assert qpde.structure(5) == {"n": 5}


# -----------------------
# Hand-picked points
# -----------------------
def test_andrews_askey_at_fixed_point():
    sample = ParamSample("ANDREWS_ASKEY", 0, 0, {"b": 0.3, "c": 0.2, "u": -0.4, "v": 0.6}, 0.5)
    report = verify_identity("ANDREWS_ASKEY", sample)
    assert report.passed
    assert close(report.lhs, report.rhs, rel=1e-7)


def test_askey_wilson_at_fixed_point():
    sample = ParamSample("ASKEY_WILSON", 0, 0, {"a": 0.3, "b": -0.2, "c": 0.1j, "d": 0.25}, 0.4)
    report = verify_identity("ASKEY_WILSON", sample, QContext(q=0.4))
    assert report.passed
    assert report.reason is None


def test_qpde_hahn_at_fixed_point():
    sample = ParamSample("QPDE_HAHN", 0, 4, {"alpha": 0.3, "x": 0.4, "y": 0.5, "n": 4 + 0j}, 0.5)
    assert verify_identity("QPDE_HAHN", sample).passed


# -----------------------
# Small sweeps
# -----------------------
@pytest.mark.parametrize("identity_id", EXPECTED_IDS)
def test_identity_holds_on_sampled_points(identity_id):
    reports = sweep(identity_id, num_points=3, seed=11)
    assert len(reports) == 3
    failures = [(r.point_index, r.rel_resid, r.reason) for r in reports if not r.passed]
    assert failures == []


HEAVY = {"AW_QINT_EXCHANGE", "CURIOUS", "MULTILINEAR", "RS_MULTISUM", "SRIVASTAVA_JAIN"}


@pytest.mark.parametrize("identity_id", EXPECTED_IDS)
def test_full_sweep_at_default_radius(identity_id):
    points = 10 if identity_id in HEAVY else 25
    reports = sweep(identity_id, num_points=points, seed=0)
    assert len(reports) == points
    failures = [(r.point_index, r.rel_resid, r.reason) for r in reports if not r.passed]
    assert failures == []


@pytest.mark.parametrize("identity_id", ["QINT_DOUBLE", "CURIOUS"])
def test_wide_parameter_sets_evaluate(identity_id):
    report = sweep(identity_id, num_points=1, seed=4)[0]
    assert report.reason is None
    assert report.lhs is not None and report.rhs is not None

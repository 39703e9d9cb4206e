import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from censorlab.censors import cq_censor_channel, dephasing_channel, replacement_channel
from censorlab.channels import (
    EBClass,
    KrausChannel,
    apply,
    choi_of,
    compose,
    fixed_point_subspace,
    identity_channel,
    is_cptp,
    is_entanglement_breaking,
    is_fixed_point,
    is_idempotent,
    product_fixed_point_subspace,
    superoperator_distance,
    superoperator_of,
    tensor_channels,
    tensor_power,
    unitary_channel,
    unvec,
    vec,
)
from censorlab.errors import ChannelError
from censorlab.qmath import kron, maximally_mixed, random_density, random_unitary

seeds = st.integers(min_value=0, max_value=2**32)


def test_vec_is_column_stacking():
    a = np.arange(4).reshape(2, 2)
    assert list(vec(a)) == [0, 2, 1, 3]
    assert np.array_equal(unvec(vec(a), 2), a)


@settings(max_examples=25, deadline=None)
@given(seeds, seeds)
def test_superoperator_matches_kraus_action(cs, rs):
    u = random_unitary(3, cs)
    ch = KrausChannel((np.sqrt(0.3) * u, np.sqrt(0.7) * np.eye(3)), (3,), (3,))
    rho = random_density(3, rs)
    assert np.allclose(unvec(superoperator_of(ch) @ vec(rho.matrix), 3), apply(ch, rho).matrix, atol=1e-12)


def test_kraus_channel_rejects_non_tp():
    with pytest.raises(ChannelError):
        KrausChannel((np.eye(2) * 0.5,))
    bad = KrausChannel((np.eye(2) * 0.5,), check=False)
    report = is_cptp(bad)
    assert not report.ok and report.details["tp_error"] > 0.1


def test_is_cptp_accepts_standard_channels():
    for ch in (dephasing_channel(3), cq_censor_channel(2, 2), identity_channel((2, 2))):
        assert is_cptp(ch).ok


def test_choi_is_normalized_state():
    c = choi_of(dephasing_channel(2))
    m = getattr(c, "matrix", c)
    assert np.trace(m) == pytest.approx(1)


def test_compose_and_tensor():
    x = unitary_channel(np.array([[0, 1], [1, 0]]), (2,))
    assert superoperator_distance(compose(x, x), identity_channel((2,))) < 1e-12
    t = tensor_channels([dephasing_channel(2), identity_channel((2,))])
    rho = random_density(4, 3, (2, 2))
    out = apply(t, rho).matrix.reshape(2, 2, 2, 2)
    assert np.allclose(out[0, :, 1, :], 0)
    assert tensor_power(dephasing_channel(2), 3).in_dim == 8


def test_idempotence():
    assert is_idempotent(dephasing_channel(2))
    assert is_idempotent(replacement_channel(maximally_mixed(2)))
    amp = KrausChannel((np.array([[1, 0], [0, np.sqrt(0.5)]]), np.array([[0, np.sqrt(0.5)], [0, 0]])))
    assert not is_idempotent(amp)


@pytest.mark.parametrize("ch, want", [
    (dephasing_channel(2), EBClass.YES),
    (dephasing_channel(4), EBClass.YES),
    (replacement_channel(maximally_mixed(3)), EBClass.YES),
    (identity_channel((2,)), EBClass.NO),
    (cq_censor_channel(2, 2), EBClass.NO),
])
def test_entanglement_breaking(ch, want):
    assert is_entanglement_breaking(ch).verdict is want


def test_fixed_points_of_dephasing_are_diagonal():
    fix = fixed_point_subspace(dephasing_channel(3))
    assert fix.dimension == 3
    for b in fix.basis:
        assert np.allclose(b, np.diag(np.diag(b)))
    rho = random_density(3, 1)
    proj = fix.project(rho.matrix)
    assert np.allclose(proj, np.diag(np.diag(rho.matrix)))
    assert is_fixed_point(dephasing_channel(3), maximally_mixed(3))


def test_fixed_points_of_identity_span_everything():
    assert fixed_point_subspace(identity_channel((2,))).dimension == 4


def test_product_fixed_points_match_joint_computation():
    chs = [cq_censor_channel(2, 2), dephasing_channel(2)]
    joint = fixed_point_subspace(tensor_channels(chs))
    prod = product_fixed_point_subspace(chs)
    assert joint.dimension == prod.dimension == 16
    for b in prod.basis:
        assert joint.residual(b) < 1e-10
    with pytest.raises(ChannelError):
        product_fixed_point_subspace([KrausChannel((np.array([[1, 0], [0, np.sqrt(0.5)]]),
                                                    np.array([[0, np.sqrt(0.5)], [0, 0]])))])


def test_apply_checks_dimension():
    with pytest.raises(Exception):
        apply(dephasing_channel(2), maximally_mixed(3))


def test_unitary_channel_preserves_purity():
    u = random_unitary(2, 4)
    rho = apply(unitary_channel(u, (2,)), kron(np.array([[1, 0], [0, 0]])))
    assert np.trace(rho.matrix @ rho.matrix).real == pytest.approx(1)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from censorlab.censors import (
    PAULI,
    CqCensor,
    Dephasing,
    Replacement,
    Twirl,
    TwirlGroup,
    adversarial_states,
    authorized_generators,
    censor_kind,
    cq_censor_channel,
    dephasing_channel,
    free_oracle_for,
    random_affine_weights,
    replacement_channel,
    twirl_channel,
    verify_freeness_preserving,
    verify_resource_destroying,
)
from censorlab.channels import EBClass, apply, is_cptp, is_entanglement_breaking, is_idempotent, \
    superoperator_distance
from censorlab.errors import GroupAxiomError
from censorlab.qmath import kron_states, maximally_mixed, pure, random_density
from censorlab.resources import ClassicalQuantum, Incoherent, SeparablePPT, TwirlInvariant, incoherent_generators

seeds = st.integers(min_value=0, max_value=2**32)


@pytest.mark.parametrize("group", [TwirlGroup.z2(), TwirlGroup.pauli(), TwirlGroup.collective_z2(),
                                   TwirlGroup.collective_pauli(), TwirlGroup.cyclic_phase(3),
                                   TwirlGroup.trivial(2)])
def test_groups_are_closed_and_twirls_idempotent(group):
    ch = twirl_channel(group)
    assert is_cptp(ch).ok and is_idempotent(ch)


def test_group_axioms_enforced():
    with pytest.raises(GroupAxiomError):
        TwirlGroup((np.eye(2), PAULI["X"], PAULI["Z"]))
    with pytest.raises(GroupAxiomError):
        TwirlGroup((np.eye(2), 2 * np.eye(2)))


def test_collective_z2_is_not_entanglement_breaking():
    eb = is_entanglement_breaking(twirl_channel(TwirlGroup.collective_z2()))
    assert eb.verdict is EBClass.NO and eb.min_pt_eigenvalue == pytest.approx(-0.25)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_dephasing_output_is_diagonal(seed):
    out = apply(dephasing_channel(3), random_density(3, seed)).matrix
    assert np.allclose(out, np.diag(np.diag(out)))


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_cq_censor_output_is_classical_quantum(seed):
    out = apply(cq_censor_channel(2, 3), random_density(6, seed, (2, 3)))
    assert ClassicalQuantum(2, 3).membership(out).is_member


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_replacement_outputs_target(seed):
    target = random_density(3, seed + 1)
    out = apply(replacement_channel(target), random_density(3, seed))
    assert np.allclose(out.matrix, target.matrix, atol=1e-12)


def test_censor_kind():
    assert censor_kind(cq_censor_channel(2, 2)) == "cq"
    assert censor_kind(twirl_channel(TwirlGroup.z2())) == "dephasing"
    assert censor_kind(replacement_channel(maximally_mixed(2))) is None


def test_adversarial_states_are_deterministic_and_resourceful():
    a = adversarial_states((2, 2))
    b = adversarial_states((2, 2))
    assert [n for n, _ in a] == [n for n, _ in b]
    assert all(np.array_equal(x.matrix, y.matrix) for (_, x), (_, y) in zip(a, b))
    assert any(n.startswith("bell") or "phi" in n or "psi" in n for n, _ in a)


@pytest.mark.parametrize("ch, oracle", [
    (dephasing_channel(2), Incoherent(2)),
    (cq_censor_channel(2, 2), SeparablePPT((2, 2))),
    (cq_censor_channel(2, 2), ClassicalQuantum(2, 2)),
    (twirl_channel(TwirlGroup.pauli()), TwirlInvariant(TwirlGroup.pauli())),
])
def test_resource_destroying(ch, oracle):
    r = verify_resource_destroying(ch, oracle, samples=100)
    assert r.passed and not r.failures and r.checked >= 100


def test_identity_is_not_resource_destroying():
    from censorlab.channels import identity_channel
    r = verify_resource_destroying(identity_channel((2,)), Incoherent(2), samples=10)
    assert not r.passed and r.witness is not None


def test_freeness_preserving_and_its_failure():
    assert verify_freeness_preserving(dephasing_channel(2), incoherent_generators(2)).passed
    bad = verify_freeness_preserving(replacement_channel(maximally_mixed(2)), incoherent_generators(2))
    assert not bad.passed and bad.witness is not None


def test_random_affine_weights_sum_to_one():
    w = random_affine_weights(5, np.random.default_rng(0))
    assert w.sum() == pytest.approx(1)


@pytest.mark.parametrize("spec, oracle_type", [
    (Dephasing(2), Incoherent),
    (CqCensor(2, 2), SeparablePPT),
    (Twirl(TwirlGroup.z2()), TwirlInvariant),
    (Replacement(kron_states(pure([1, 0]), maximally_mixed(2))), SeparablePPT),
])
def test_specs_build_consistent_parts(spec, oracle_type):
    ch = spec.channel()
    assert isinstance(free_oracle_for(spec), oracle_type)
    for g in authorized_generators(spec):
        assert np.allclose(apply(ch, g).matrix, g.matrix, atol=1e-9)


def test_pauli_twirl_is_replacement():
    assert superoperator_distance(twirl_channel(TwirlGroup.pauli()), replacement_channel(maximally_mixed(2))) < 1e-12

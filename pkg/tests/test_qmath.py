import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from censorlab.errors import DimensionError, InvalidStateError, NotHermitianError
from censorlab.qmath import (
    MAX_DIM,
    DensityOperator,
    bell_state,
    density_spanning_set,
    eig_hermitian,
    hermitian_basis,
    is_density,
    kron,
    kron_states,
    max_coherent,
    max_entangled,
    maximally_mixed,
    partial_trace,
    partial_transpose,
    permute_subsystems,
    pure,
    random_density,
    random_unitary,
    trace_distance,
    werner_state,
)

seeds = st.integers(min_value=0, max_value=2**32)


def test_is_density_accepts_states_and_reports_violations():
    assert is_density(np.eye(2) / 2)
    bad = is_density(np.diag([1.5, -0.5]))
    assert not bad and bad.min_eigenvalue == pytest.approx(-0.5)
    assert not is_density(np.eye(2))
    assert not is_density(np.array([[0.5, 1], [0, 0.5]]))


def test_density_operator_rejects_invalid_input():
    with pytest.raises(InvalidStateError):
        DensityOperator(np.diag([2.0, -1.0]))
    with pytest.raises(DimensionError):
        DensityOperator(np.eye(3) / 3, (2, 2))
    with pytest.raises(DimensionError):
        DensityOperator(np.eye(MAX_DIM * 2) / (MAX_DIM * 2))


def test_density_operator_is_read_only():
    rho = maximally_mixed(2)
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_random_density_is_valid_and_reproducible(seed):
    a = random_density(4, seed, (2, 2))
    assert is_density(a.matrix)
    assert np.array_equal(a.matrix, random_density(4, seed, (2, 2)).matrix)


@settings(max_examples=30, deadline=None)
@given(seeds, seeds)
def test_partial_trace_of_product(s1, s2):
    a, b = random_density(2, s1), random_density(3, s2)
    ab = kron_states(a, b)
    assert np.allclose(partial_trace(ab, [0]).matrix, a.matrix, atol=1e-12)
    assert np.allclose(partial_trace(ab, [1]).matrix, b.matrix, atol=1e-12)


def test_partial_trace_keeps_order_ascending():
    a, b, c = (random_density(d, s) for d, s in ((2, 1), (3, 2), (2, 3)))
    abc = kron_states(a, b, c)
    assert np.allclose(partial_trace(abc, [2, 0]).matrix, kron(a.matrix, c.matrix), atol=1e-12)


def test_partial_trace_of_bell_is_maximally_mixed():
    assert np.allclose(partial_trace(bell_state("psi_minus"), [1]).matrix, np.eye(2) / 2)


def test_partial_transpose_involution_and_bell_spectrum():
    rho = random_density(6, 5, (2, 3))
    assert np.allclose(partial_transpose(partial_transpose(rho, 1), 1, (2, 3)), rho.matrix)
    full = partial_transpose(partial_transpose(rho, 0), 1, (2, 3))
    assert np.allclose(full, rho.matrix.T)
    ev = np.linalg.eigvalsh(partial_transpose(bell_state("phi_plus"), 1))
    assert np.allclose(ev, [-0.5, 0.5, 0.5, 0.5])


def test_permute_subsystems_swaps_factors():
    a, b = random_density(2, 1), random_density(3, 2)
    swapped = permute_subsystems(kron_states(a, b), [1, 0])
    assert np.allclose(np.asarray(getattr(swapped, "matrix", swapped)), kron(b.matrix, a.matrix))


def test_eig_hermitian_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        eig_hermitian(np.array([[0, 1], [0, 0]]))


def test_trace_distance_extremes():
    zero, one = pure([1, 0]), pure([0, 1])
    assert trace_distance(zero, one) == pytest.approx(1)
    assert trace_distance(zero, zero) == pytest.approx(0)


def test_named_states():
    assert np.allclose(max_coherent(2).matrix, np.full((2, 2), 0.5))
    assert np.allclose(max_entangled(2).matrix, bell_state("phi_plus").matrix)
    w = werner_state(1 / 3)
    assert min(np.linalg.eigvalsh(partial_transpose(w, 1))) == pytest.approx(0, abs=1e-12)
    with pytest.raises(ValueError):
        bell_state("nope")


def test_random_unitary_is_unitary():
    u = random_unitary(4, 9)
    assert np.allclose(u @ u.conj().T, np.eye(4))


@pytest.mark.parametrize("d", [2, 3])
def test_bases_span_operator_space(d):
    herm = hermitian_basis(d)
    assert len(herm) == d * d
    gram = np.array([[np.vdot(a, b) for b in herm] for a in herm])
    assert np.allclose(gram, np.eye(d * d))
    states = density_spanning_set(d)
    rank = np.linalg.matrix_rank(np.array([s.matrix.reshape(-1) for s in states]))
    assert rank == d * d and all(is_density(s.matrix) for s in states)

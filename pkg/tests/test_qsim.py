"""Tests for the statevector simulation core.

Covers gate closed forms, the composite coupling gate against an explicit
matrix-product oracle, Born-rule sampling, collapse, resets, Haar-random
unitary generation, stochastic depolarizing noise, and exact propagators.
"""

import numpy as np
import pytest
from scipy import stats

from fbqrc.qsim import (
    CX,
    NoiseSpec,
    RngStream,
    StateVector,
    all_strings,
    apply_depolarizing,
    apply_gate,
    apply_r_gate,
    expand_gate,
    haar_random_unitary,
    index_to_string,
    matrix_exponential_propagator,
    measure_all_z,
    measure_qubits_z,
    pauli_probabilities,
    r_gate_matrix,
    reset_all,
    reset_qubits,
    rx_gate,
    rz_gate,
    sample_measurements,
    string_to_index,
    unitarity_residual,
)

SQRT2_INV = 1 / np.sqrt(2)


def random_state(n, rng):
    z = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return StateVector(n, z / np.linalg.norm(z))


# ---------------------------------------------------------------------------
# Rotation gates
# ---------------------------------------------------------------------------

def test_rx_zero_is_identity():
    assert np.allclose(rx_gate(0.0), np.eye(2), atol=1e-15)


def test_rx_full_turn_is_minus_identity():
    """A 2*pi rotation of a spin-1/2 flips the global sign."""
    assert np.allclose(rx_gate(2 * np.pi), -np.eye(2), atol=1e-12)


def test_rx_half_pi_entry_magnitudes():
    """|entries|^2 of rx(pi/2) are all cos^2(pi/4) = sin^2(pi/4) = 0.5."""
    g = rx_gate(np.pi / 2)
    assert np.allclose(np.abs(g) ** 2, 0.5, atol=1e-12)


def test_rz_zero_is_identity():
    assert np.allclose(rz_gate(0.0), np.eye(2), atol=1e-15)


def test_rz_pi_closed_form():
    """exp(-i*pi*Z/2) = diag(-i, i)."""
    assert np.allclose(rz_gate(np.pi), np.diag([-1j, 1j]), atol=1e-12)


def test_rz_phase_invisible_on_z_eigenstate():
    state = StateVector.zero(1)
    out = apply_gate(state, rz_gate(1.234), (0,))
    assert np.allclose(out.probabilities(), state.probabilities(), atol=1e-15)


@pytest.mark.parametrize("gate", [rx_gate, rz_gate])
@pytest.mark.parametrize("theta", [np.nan, np.inf, -np.inf])
def test_rotation_rejects_nonfinite(gate, theta):
    with pytest.raises(ValueError):
        gate(theta)


def test_rotations_are_unitary():
    for theta in np.linspace(-7, 7, 29):
        assert unitarity_residual(rx_gate(theta)) < 1e-12
        assert unitarity_residual(rz_gate(theta)) < 1e-12


# ---------------------------------------------------------------------------
# Gate application kernel
# ---------------------------------------------------------------------------

def test_apply_identity_preserves_amplitudes():
    rng = np.random.default_rng(1)
    state = random_state(3, rng)
    out = apply_gate(state, np.eye(4), (0, 2))
    assert np.allclose(out.amplitudes, state.amplitudes, atol=1e-15)


def test_apply_cx_truth_table():
    """CX with control qubit 0 maps |10> to |11>."""
    state = StateVector(2, np.array([0, 0, 1, 0], dtype=complex))
    out = apply_gate(state, CX, (0, 1))
    assert np.allclose(out.amplitudes, [0, 0, 0, 1], atol=1e-15)


def test_apply_hadamard_on_first_qubit():
    """H on qubit 0 of |00> gives (1,0,1,0)/sqrt(2) in big-endian order."""
    h = np.array([[1, 1], [1, -1]], dtype=complex) * SQRT2_INV
    out = apply_gate(StateVector.zero(2), h, (0,))
    assert np.allclose(out.amplitudes, [SQRT2_INV, 0, SQRT2_INV, 0], atol=1e-12)


def test_apply_gate_reversed_targets():
    """CX on (1, 0) treats qubit 1 as control: |01> -> |11>."""
    state = StateVector(2, np.array([0, 1, 0, 0], dtype=complex))
    out = apply_gate(state, CX, (1, 0))
    assert np.allclose(out.amplitudes, [0, 0, 0, 1], atol=1e-15)


def test_apply_gate_errors():
    state = StateVector.zero(2)
    with pytest.raises(ValueError):
        apply_gate(state, CX, (0, 0))
    with pytest.raises(ValueError):
        apply_gate(state, CX, (0, 2))
    with pytest.raises(ValueError):
        apply_gate(state, CX, (0,))


def test_expand_gate_matches_apply_gate():
    rng = np.random.default_rng(2)
    gate = haar_random_unitary(4, RngStream(5))
    full = expand_gate(gate, (2, 0), 3)
    state = random_state(3, rng)
    via_apply = apply_gate(state, gate, (2, 0)).amplitudes
    assert np.allclose(full @ state.amplitudes, via_apply, atol=1e-12)


# ---------------------------------------------------------------------------
# Composite coupling gate
# ---------------------------------------------------------------------------

def _reference_r_matrix(theta):
    """Independent construction: explicit factor product via Kronecker forms."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    rx = np.array([[c, -1j * s], [-1j * s, c]])
    rz = np.array([[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]])
    cx = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    # circuit reading, first applied = rightmost matrix factor
    return np.kron(rx, rx) @ cx @ np.kron(np.eye(2), rz) @ cx


def test_r_gate_zero_angle_is_identity_on_all_basis_states():
    for n, (i, j) in [(2, (0, 1)), (3, (2, 0))]:
        for b in range(2**n):
            amps = np.zeros(2**n, dtype=complex)
            amps[b] = 1.0
            out = apply_r_gate(StateVector(n, amps), 0.0, i, j)
            assert np.allclose(out.amplitudes, amps, atol=1e-14)


def test_r_gate_pi_matches_explicit_factor_product():
    """apply_r_gate agrees with the explicit product of the five factors."""
    ref = _reference_r_matrix(np.pi) @ np.array([1, 0, 0, 0], dtype=complex)
    out = apply_r_gate(StateVector.zero(2), np.pi, 0, 1)
    assert np.allclose(out.amplitudes, ref, atol=1e-12)


def test_r_gate_matrix_matches_explicit_factor_product():
    for theta in (-2.3, 0.7, np.pi, 4.0):
        assert np.allclose(r_gate_matrix(theta), _reference_r_matrix(theta), atol=1e-12)


def test_r_gate_symmetric_in_qubit_order():
    """The ZZ-phase core and the RX layer are both i<->j symmetric."""
    rng = np.random.default_rng(3)
    state = random_state(2, rng)
    a = apply_r_gate(state, 1.3, 0, 1).amplitudes
    b = apply_r_gate(state, 1.3, 1, 0).amplitudes
    assert np.allclose(a, b, atol=1e-12)


def test_r_gate_preserves_norm_on_random_states():
    rng = np.random.default_rng(4)
    for _ in range(100):
        state = random_state(3, rng)
        theta = rng.uniform(-8, 8)
        out = apply_r_gate(state, theta, 1, 2)
        assert abs(out.norm() - 1.0) < 1e-10


def test_r_gate_rejects_equal_qubits():
    with pytest.raises(ValueError):
        apply_r_gate(StateVector.zero(2), 1.0, 1, 1)


# ---------------------------------------------------------------------------
# Measurement and collapse
# ---------------------------------------------------------------------------

def test_measure_basis_state_is_deterministic():
    rng = RngStream(11)
    for _ in range(20):
        m, post = measure_all_z(StateVector.zero(2), rng)
        assert np.array_equal(m, [1, 1])
        assert np.allclose(post.amplitudes, [1, 0, 0, 0], atol=1e-15)


def test_measure_bell_state_frequencies():
    """Born rule on (|00>+|11>)/sqrt(2): half (+1,+1), half (-1,-1), no cross terms."""
    bell = StateVector(2, np.array([SQRT2_INV, 0, 0, SQRT2_INV], dtype=complex))
    shots = 100_000
    outcomes = sample_measurements(bell, shots, RngStream(12))
    freq = np.bincount(outcomes, minlength=4) / shots
    assert abs(freq[0] - 0.5) < 5e-3
    assert abs(freq[3] - 0.5) < 5e-3
    assert freq[1] == 0.0 and freq[2] == 0.0


def test_single_shot_measurement_matches_batch_sampler():
    """measure_all_z frequencies agree with exact probabilities at 4 sigma."""
    rng = np.random.default_rng(5)
    state = random_state(2, rng)
    probs = state.probabilities()
    stream = RngStream(13)
    shots = 4000
    counts = np.zeros(4)
    for _ in range(shots):
        m, _ = measure_all_z(state, stream)
        counts[string_to_index(m)] += 1
    freq = counts / shots
    bound = 4 * np.sqrt(probs * (1 - probs) / shots)
    assert np.all(np.abs(freq - probs) <= bound + 1e-12)


def test_collapsed_state_is_computational_basis_state():
    rng = np.random.default_rng(6)
    stream = RngStream(14)
    for _ in range(25):
        state = random_state(3, rng)
        m, post = measure_all_z(state, stream)
        idx = string_to_index(m)
        mags = np.abs(post.amplitudes)
        assert abs(mags[idx] - 1.0) < 1e-12
        assert np.sum(mags > 1e-12) == 1


def test_measurement_determinism_per_stream():
    state = StateVector(2, np.array([0.5, 0.5, 0.5, 0.5], dtype=complex))
    a = [string_to_index(measure_all_z(state, RngStream(99, 1))[0]) for _ in range(1)]
    seq1 = sample_measurements(state, 50, RngStream(99, 2))
    seq2 = sample_measurements(state, 50, RngStream(99, 2))
    assert np.array_equal(seq1, seq2)
    assert a == [string_to_index(measure_all_z(state, RngStream(99, 1))[0])]


def test_measure_zero_norm_state_raises():
    state = StateVector(1, np.zeros(2, dtype=complex))
    with pytest.raises(RuntimeError):
        measure_all_z(state, RngStream(0))


def test_born_rule_chi_square_conformance():
    """Chi-square at significance 1e-3 passes for >= 98 of 100 random states."""
    rng = np.random.default_rng(7)
    shots = 10_000
    passed = 0
    for k in range(100):
        state = random_state(2, rng)
        probs = state.probabilities()
        outcomes = sample_measurements(state, shots, RngStream(1000, k))
        counts = np.bincount(outcomes, minlength=4).astype(float)
        exp = probs * shots
        keep = exp > 1e-9
        pval = stats.chisquare(counts[keep], exp[keep] * counts[keep].sum() / exp[keep].sum()).pvalue
        if pval > 1e-3:
            passed += 1
    assert passed >= 98


def test_partial_measurement_marginals_and_collapse():
    """Measuring one side of a Bell pair collapses the other consistently."""
    bell = StateVector(2, np.array([SQRT2_INV, 0, 0, SQRT2_INV], dtype=complex))
    stream = RngStream(15)
    for _ in range(50):
        bits, post = measure_qubits_z(bell, (1,), stream)
        m_full, _ = measure_all_z(post, stream)
        assert m_full[0] == bits[0]  # perfectly correlated pair
        assert abs(post.norm() - 1.0) < 1e-12


def test_partial_measurement_qubit_order():
    # |10>: qubit 0 is |1>, qubit 1 is |0>
    state = StateVector(2, np.array([0, 0, 1, 0], dtype=complex))
    bits, _ = measure_qubits_z(state, (1, 0), RngStream(16))
    assert bits[0] == 1 and bits[1] == -1


def test_reset_qubits_restores_zero():
    rng = np.random.default_rng(8)
    stream = RngStream(17)
    state = random_state(3, rng)
    out = reset_qubits(state, (0, 2), stream)
    # qubits 0 and 2 now in |0>: amplitudes with those bits set must vanish
    amps = out.amplitudes.reshape(2, 2, 2)
    assert np.allclose(amps[1], 0, atol=1e-12)
    assert np.allclose(amps[:, :, 1], 0, atol=1e-12)
    assert abs(out.norm() - 1.0) < 1e-10


# ---------------------------------------------------------------------------
# Reset
# ---------------------------------------------------------------------------

def test_reset_all_gives_zero_state():
    rng = np.random.default_rng(9)
    state = random_state(2, rng)
    out = reset_all(state)
    assert np.allclose(out.amplitudes, [1, 0, 0, 0], atol=1e-15)
    assert out.n_qubits == state.n_qubits
    again = reset_all(out)
    assert np.allclose(again.amplitudes, out.amplitudes)


# ---------------------------------------------------------------------------
# Haar-random unitaries
# ---------------------------------------------------------------------------

def test_haar_unitarity_residuals():
    stream = RngStream(20)
    for dim in (2, 4, 8, 16):
        for _ in range(5):
            assert unitarity_residual(haar_random_unitary(dim, stream)) < 1e-10


def test_haar_first_moment():
    """E|U_00|^2 = 1/dim = 0.5 for dim 2, Monte Carlo at 1e5 samples."""
    stream = RngStream(21)
    total = 0.0
    n = 100_000
    for _ in range(n):
        total += abs(haar_random_unitary(2, stream)[0, 0]) ** 2
    assert abs(total / n - 0.5) < 0.01


def test_haar_determinism():
    u1 = haar_random_unitary(4, RngStream(5, 77))
    u2 = haar_random_unitary(4, RngStream(5, 77))
    assert np.array_equal(u1, u2)


def test_haar_rejects_small_dim():
    with pytest.raises(ValueError):
        haar_random_unitary(1, RngStream(0))


# ---------------------------------------------------------------------------
# Depolarizing noise
# ---------------------------------------------------------------------------

def test_depolarizing_zero_lambda_is_identity():
    rng = np.random.default_rng(10)
    state = random_state(2, rng)
    out = apply_depolarizing(state, NoiseSpec(0.0, True), 0, RngStream(30))
    assert np.allclose(out.amplitudes, state.amplitudes)


def test_depolarizing_pauli_probabilities_at_paper_value():
    """lambda = 0.04 gives (I, X, Y, Z) probabilities (0.97, 0.01, 0.01, 0.01)."""
    assert np.allclose(pauli_probabilities(0.04), [0.97, 0.01, 0.01, 0.01], atol=1e-15)


def test_depolarizing_bloch_contraction():
    """Shot-averaged <Z> on |0> contracts to 1 - lambda (X and Y flip the sign)."""
    spec = NoiseSpec(0.04, True)
    stream = RngStream(31)
    zero = StateVector.zero(1)
    n = 200_000
    total = 0
    for _ in range(n):
        out = apply_depolarizing(zero, spec, 0, stream)
        total += 1 if abs(out.amplitudes[0]) > 0.5 else -1
    assert abs(total / n - 0.96) < 0.003


def test_depolarizing_rejects_bad_lambda():
    with pytest.raises(ValueError):
        NoiseSpec(1.0, True)
    with pytest.raises(ValueError):
        pauli_probabilities(-0.1)


def test_depolarizing_preserves_norm():
    rng = np.random.default_rng(11)
    stream = RngStream(32)
    spec = NoiseSpec(0.5, True)
    for _ in range(50):
        state = random_state(2, rng)
        out = apply_depolarizing(state, spec, 1, stream)
        assert abs(out.norm() - 1.0) < 1e-10


# ---------------------------------------------------------------------------
# Exact propagator
# ---------------------------------------------------------------------------

def test_propagator_of_zero_hamiltonian():
    assert np.allclose(matrix_exponential_propagator(np.zeros((4, 4)), 0.3), np.eye(4), atol=1e-12)


def test_propagator_pauli_z_closed_form():
    """exp(-i*pi*Z) = diag(e^{-i pi}, e^{i pi}) = -I."""
    z = np.diag([1.0, -1.0])
    assert np.allclose(matrix_exponential_propagator(z, np.pi), -np.eye(2), atol=1e-12)


def test_propagator_semigroup_property():
    rng = np.random.default_rng(12)
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    h = (a + a.conj().T) / 2
    dt = 0.01
    u = matrix_exponential_propagator(h, dt)
    uk = np.linalg.matrix_power(u, 100)
    direct = matrix_exponential_propagator(h, 100 * dt)
    assert np.max(np.abs(uk - direct)) < 1e-8


def test_propagator_unitarity():
    rng = np.random.default_rng(13)
    a = rng.normal(size=(16, 16))
    h = a + a.T
    assert unitarity_residual(matrix_exponential_propagator(h, 0.7)) < 1e-9


def test_propagator_rejects_non_hermitian():
    with pytest.raises(ValueError):
        matrix_exponential_propagator(np.array([[0.0, 1.0], [0.0, 0.0]]), 0.1)


# ---------------------------------------------------------------------------
# Rng streams and index helpers
# ---------------------------------------------------------------------------

def test_rng_stream_reproducibility_and_independence():
    a = RngStream(123, 5).random(1000)
    b = RngStream(123, 5).random(1000)
    c = RngStream(123, 6).random(1000)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert abs(np.corrcoef(a, c)[0, 1]) < 0.1


def test_rng_child_streams_are_stable_and_keyed():
    base = RngStream(9)
    assert base.child("x", 1).stream_id == RngStream(9).child("x", 1).stream_id
    assert base.child("x", 1).stream_id != base.child("x", 2).stream_id
    assert base.child("x").stream_id != base.child("y").stream_id


def test_index_string_round_trip():
    for n in (1, 2, 4):
        for idx in range(2**n):
            s = index_to_string(idx, n)
            assert set(np.unique(s)).issubset({-1, 1})
            assert string_to_index(s) == idx
    table = all_strings(3)
    assert table.shape == (8, 3)
    assert np.array_equal(table[0], [1, 1, 1])
    assert np.array_equal(table[7], [-1, -1, -1])
    # qubit 0 is the most significant bit
    assert np.array_equal(table[4], [-1, 1, 1])


def test_state_vector_validation():
    with pytest.raises(ValueError):
        StateVector(2, np.zeros(3, dtype=complex))
    with pytest.raises(ValueError):
        StateVector(0, np.zeros(1, dtype=complex))

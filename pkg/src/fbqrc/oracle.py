"""Exact reference computations for verifying the shot-based simulator.

Post-measurement resets make the outcome string a finite-state Markov
chain over {-1, +1}^N with an input-dependent transition kernel, so exact
single-cycle distributions and exact shot-limit feature series are
computable at small N. The cycle circuit is evaluated here by sequential
gate application on a statevector, independently of the matrix-product
composition used by the grouped trajectory engine.
"""

from __future__ import annotations

import numpy as np

from .qsim import StateVector, all_strings, apply_gate, apply_r_gate
from .reservoirs import FeatureSeries, ProposedModelConfig, model_unitary


def exact_cycle_distribution(
    s_k: float,
    m_prev: np.ndarray,
    config: ProposedModelConfig,
    u_haar: np.ndarray,
    initial: StateVector | None = None,
) -> np.ndarray:
    """Exact Born distribution over outcome strings for one noiseless cycle.

    Returns a length-2^N probability vector indexed by basis index of the
    outcome string. Requires noise to be disabled (pure-state exactness).
    """
    if config.noise.enabled:
        raise ValueError("exact cycle distribution is unsupported with noise enabled")
    n = config.n_qubits
    if n > 10:
        raise ValueError("exact enumeration is limited to N <= 10")
    m_prev = np.asarray(m_prev)
    if m_prev.shape != (n,):
        raise ValueError(f"feedback string has length {m_prev.shape}, expected {n}")
    if initial is None:
        if config.initial_state != "all_zero":
            raise ValueError("pass explicit initial amplitudes for a random initial state")
        state = StateVector.zero(n)
    else:
        state = StateVector(n, initial.amplitudes.copy())
    state = apply_r_gate(state, config.a_in * s_k, 0, 1)
    for j, (a, b) in enumerate(config.pairs()):
        state = apply_r_gate(state, config.a_fb * float(m_prev[j]), a, b)
    state = apply_gate(state, u_haar, tuple(range(n)))
    return state.probabilities()


def transition_kernel(
    s_k: float,
    config: ProposedModelConfig,
    u_haar: np.ndarray,
    initial: StateVector | None = None,
) -> np.ndarray:
    """Row-stochastic kernel K[m, m'] = P(outcome m' | previous string m)."""
    n = config.n_qubits
    dim = 2**n
    strings = all_strings(n)
    k = np.empty((dim, dim))
    for mi in range(dim):
        k[mi] = exact_cycle_distribution(s_k, strings[mi], config, u_haar, initial)
    return k


def exact_feature_series_markov(
    config: ProposedModelConfig,
    inputs,
    u_haar: np.ndarray | None = None,
    initial: StateVector | None = None,
) -> FeatureSeries:
    """Exact shot-limit feature series via the outcome-string Markov chain.

    Maintains the exact distribution over outcome strings: it starts
    uniform (the randomly drawn initial feedback string) and is propagated
    through the per-timestep transition kernel; row k holds the exact
    per-qubit expectation of the cycle-k outcome. Requires resets (the
    chain state space stays {-1, +1}^N) and no noise.
    """
    if not config.reset_after_measurement:
        raise ValueError("the Markov oracle requires post-measurement resets")
    if config.noise.enabled:
        raise ValueError("the Markov oracle is unsupported with noise enabled")
    if config.n_qubits > 6:
        raise ValueError("Markov oracle is limited to N <= 6")
    values = np.asarray(getattr(inputs, "values", inputs), dtype=float)
    if values.ndim != 1 or len(values) == 0:
        raise ValueError("inputs must be a non-empty 1-d sequence")
    if u_haar is None:
        u_haar = model_unitary(config)
    if initial is None and config.initial_state != "all_zero":
        raise ValueError("pass explicit initial amplitudes for a random initial state")

    n = config.n_qubits
    dim = 2**n
    z_signs = all_strings(n).astype(float)
    pi = np.full(dim, 1.0 / dim)
    zero = StateVector.zero(n)
    features = np.empty((len(values), n))
    for k, s in enumerate(values):
        # resets return the register to |0...0> after the first cycle
        start = initial if (k == 0 and initial is not None) else zero
        kernel = transition_kernel(float(s), config, u_haar, start)
        pi = pi @ kernel
        total = pi.sum()
        if not np.isclose(total, 1.0, atol=1e-9):
            raise RuntimeError(f"chain distribution lost normalization: sum={total}")
        pi = pi / total
        features[k] = pi @ z_signs
    return FeatureSeries(features)


def expectation_from_distribution(dist: np.ndarray, qubit: int) -> float:
    """Marginal <Z> of one qubit from an outcome-string distribution."""
    dist = np.asarray(dist, dtype=float)
    n = int(np.log2(len(dist)))
    if 2**n != len(dist):
        raise ValueError("distribution length must be a power of two")
    if not 0 <= qubit < n:
        raise ValueError(f"qubit {qubit} out of range for {n} qubits")
    signs = all_strings(n)[:, qubit].astype(float)
    return float(dist @ signs)

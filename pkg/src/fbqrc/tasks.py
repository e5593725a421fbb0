"""Input and target sequence generation.

Uniform random driving sequences, the Mackey-Glass delay differential
equation (forward Euler), the expectation-value series of a chaotic Ising
chain (exact propagator), and delay/forecast target alignment.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericError
from .qsim import PAULI_X, PAULI_Z, RngStream, matrix_exponential_propagator


@dataclass
class TimeSeries:
    """Scalar sequence plus provenance of the generator that built it."""

    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1:
            raise ValueError("time series values must be one-dimensional")

    def __len__(self) -> int:
        return len(self.values)

    def to_csv(self, path) -> None:
        """Dump as `t,value` rows, one value per line."""
        with open(path, "w") as fh:
            fh.write("t,value\n")
            for t, v in enumerate(self.values):
                fh.write(f"{t},{v:.17g}\n")


@dataclass(frozen=True)
class MackeyGlassParams:
    beta0: float = 0.2
    theta: float = 1.0
    n: float = 10.0
    tau: int = 17
    gamma: float = 0.1
    dt: float = 1.0
    init_value: float = 1.2
    discard: int = 500

    def __post_init__(self):
        if self.tau < 1:
            raise ValueError("delay must be >= 1 step")
        if self.dt <= 0:
            raise ValueError("time step must be positive")


@dataclass(frozen=True)
class IsingParams:
    n_spins: int = 5
    coupling: float = 1.0
    hx: float = 1.05
    hz: float = -0.5
    dt: float = 0.005
    initial_state: str | np.ndarray = "all_zero"

    def __post_init__(self):
        # an odd chain (so a middle spin exists) is checked by the series
        # generator; the Hamiltonian itself is valid for any chain length
        if self.n_spins < 2:
            raise ValueError("chain needs at least two spins")
        if self.n_spins > 12:
            raise ValueError("chain length above 12 spins is not supported (dense simulation)")
        if self.dt <= 0:
            raise ValueError("time step must be positive")


def gen_uniform(length: int, rng: RngStream) -> TimeSeries:
    """i.i.d. uniform values on [0, 1]."""
    if length < 1:
        raise ValueError("length must be >= 1")
    return TimeSeries(rng.random(length), meta={"generator": "uniform", "length": length})


def gen_mackey_glass(
    length: int, params: MackeyGlassParams = MackeyGlassParams(), normalize: bool = True
) -> TimeSeries:
    """Forward-Euler trajectory of the Mackey-Glass delay differential equation.

    The history over one full delay window is held at `init_value`, the first
    `discard` post-history samples are dropped, and the result is min-max
    normalized to [0, 1] unless `normalize` is False.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    p = params
    total = p.discard + length
    buf = np.empty(p.tau + 1 + total)
    buf[: p.tau + 1] = p.init_value
    theta_n = p.theta**p.n
    with np.errstate(over="ignore", invalid="ignore"):
        for t in range(p.tau, p.tau + total):
            delayed = buf[t - p.tau]
            drive = p.beta0 * theta_n * delayed / (theta_n + delayed**p.n)
            buf[t + 1] = buf[t] + p.dt * (drive - p.gamma * buf[t])
            if not np.isfinite(buf[t + 1]):
                raise NumericError(f"Mackey-Glass integration diverged at step {t - p.tau}")
    out = buf[p.tau + 1 + p.discard :].copy()
    if normalize:
        lo, hi = out.min(), out.max()
        if hi <= lo:
            raise NumericError("cannot normalize a constant trajectory to [0, 1]")
        out = (out - lo) / (hi - lo)
    return TimeSeries(
        out,
        meta={
            "generator": "mackey_glass",
            "beta0": p.beta0, "theta": p.theta, "n": p.n, "tau": p.tau,
            "gamma": p.gamma, "dt": p.dt, "init_value": p.init_value,
            "discard": p.discard, "normalized": normalize,
        },
    )


def build_ising_hamiltonian(params: IsingParams) -> np.ndarray:
    """Dense Ising-chain Hamiltonian J*sum(ZZ) + hx*sum(X) + hz*sum(Z), open boundaries."""
    n = params.n_spins
    dim = 2**n
    h = np.zeros((dim, dim), dtype=complex)

    def site_op(op: np.ndarray, site: int) -> np.ndarray:
        out = np.array([[1.0]], dtype=complex)
        for k in range(n):
            out = np.kron(out, op if k == site else np.eye(2))
        return out

    z_ops = [site_op(PAULI_Z, i) for i in range(n)]
    for i in range(n - 1):
        h += params.coupling * z_ops[i] @ z_ops[i + 1]
    for i in range(n):
        h += params.hx * site_op(PAULI_X, i)
        h += params.hz * z_ops[i]
    return h


def gen_ising_series(length: int, params: IsingParams = IsingParams()) -> TimeSeries:
    """<Z> of the middle spin under exact unitary evolution, rescaled to [0, 1].

    One sample per time step dt, starting from the configured initial state;
    the raw expectation in [-1, 1] is mapped through (x + 1) / 2.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    n = params.n_spins
    if n % 2 == 0:
        raise ValueError("series generation needs an odd chain so a middle spin exists")
    h = build_ising_hamiltonian(params)
    u = matrix_exponential_propagator(h, params.dt)
    mid = n // 2

    if isinstance(params.initial_state, str):
        if params.initial_state != "all_zero":
            raise ValueError(f"unknown initial state '{params.initial_state}'")
        psi = np.zeros(2**n, dtype=complex)
        psi[0] = 1.0
    else:
        psi = np.asarray(params.initial_state, dtype=complex)
        if psi.shape != (2**n,):
            raise ValueError("custom initial state has wrong dimension")
        psi = psi / np.linalg.norm(psi)

    # Z eigenvalue of the middle spin per basis index (spin 0 = MSB).
    idx = np.arange(2**n)
    z_mid = 1.0 - 2.0 * ((idx >> (n - 1 - mid)) & 1)

    out = np.empty(length)
    for t in range(length):
        out[t] = float(np.real(z_mid @ (np.abs(psi) ** 2)))
        psi = u @ psi
    return TimeSeries(
        (out + 1.0) / 2.0,
        meta={
            "generator": "ising",
            "n_spins": n, "coupling": params.coupling, "hx": params.hx,
            "hz": params.hz, "dt": params.dt,
        },
    )


def make_delay_target(series: TimeSeries, tau: int) -> tuple[TimeSeries, TimeSeries]:
    """Aligned (inputs, targets) with target_k = series_{k+tau}.

    Negative tau recalls the past (memory tasks), positive tau forecasts;
    boundary samples without a counterpart are trimmed from both series.
    """
    values = series.values
    length = len(values)
    if abs(tau) >= length:
        raise ValueError(f"|tau|={abs(tau)} must be smaller than the series length {length}")
    lead, trail = max(0, -tau), max(0, tau)
    inputs = TimeSeries(values[lead : length - trail].copy(), meta=dict(series.meta))
    targets = TimeSeries(values[trail : length - lead].copy(), meta={**series.meta, "tau": tau})
    return inputs, targets

"""Shot-based simulator and benchmark harness for feedback-driven quantum
reservoir computing with mid-circuit measurements."""

from .errors import ConfigError, NumericError
from .qsim import (
    NoiseSpec,
    RngStream,
    StateVector,
    apply_depolarizing,
    apply_gate,
    apply_r_gate,
    haar_random_unitary,
    matrix_exponential_propagator,
    measure_all_z,
    reset_all,
    rx_gate,
    rz_gate,
)
from .reservoirs import (
    EsnConfig,
    FeatureSeries,
    FeedbackDrivenConfig,
    McmBaselineConfig,
    ProposedModelConfig,
    renormalize_spectral_radius,
    run_esn,
    run_feedback_driven_baseline,
    run_mcm_baseline,
    run_proposed_cycle,
    run_proposed_model,
)
from .tasks import (
    IsingParams,
    MackeyGlassParams,
    TimeSeries,
    build_ising_hamiltonian,
    gen_ising_series,
    gen_mackey_glass,
    gen_uniform,
    make_delay_target,
)
from .readout import assemble_design_matrix, fit_readout, predict
from .metrics import esp_divergence, memory_capacity, nmse, r_squared
from .oracle import (
    exact_cycle_distribution,
    exact_feature_series_markov,
    expectation_from_distribution,
)
from .harness import (
    ExperimentConfig,
    ExperimentResult,
    MetricReport,
    run_ensemble,
    run_esp_experiment,
    run_noise_sweep,
    run_oracle_check,
    run_pipeline,
)

__version__ = "0.1.0"

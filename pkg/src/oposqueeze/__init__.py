"""Forward model, synthetic traces and parameter estimation for squeezed light
from a sub-threshold degenerate optical parametric oscillator."""

from .errors import (AboveThresholdError, DomainError, EmptyTraceError,
                     InconsistentInputsError, InvalidLossError, OPOError, ParseError,
                     UnphysicalMeasurementError)
from .units import db_to_linear, linear_to_db
from .metrics import (HOLEVO_CRITERION_DB, beats_holevo, dense_coding_capacity,
                      holevo_assessment, purity, squeezing_parameter, teleport_fidelity)
from .model import (SPEED_OF_LIGHT, CavityParams, DetectionChain, OperatingPoint,
                    Prediction, QuadraturePair, SweepRow, add_circuit_noise,
                    apply_phase_jitter, cavity_decay_rate, classical_gain,
                    effective_loss, escape_efficiency, ideal_spectra, observed_pair,
                    predict, predict_observed, pump_ratio, pump_ratio_from_gain,
                    remove_circuit_noise, sweep, threshold_power, total_efficiency,
                    unmix_phase_jitter)
from .config import ExperimentConfig, load_config, parse_config
from .traces import (Trace, ZeroSpanConfig, read_trace_csv, synth_locked_trace,
                     synth_scan_trace, write_trace_csv)
from .estimation import (BootstrapResult, FitOptions, FitResult, FitSetup,
                         MeasurementSet, bootstrap, fit, jitter_from_error_rms,
                         load_measurements, model_residuals)

__version__ = "0.1.0"

"""Finite-information quantities and single-case propensities."""
__version__ = "0.1.0"

from .fiq import (DEFAULT_MAX_LENGTH, DeterminedInterval, Fiq, FiqParseError, Propensity,
                  ResourceLimitError, actualize_digit, binary_entropy, determined_prefix,
                  fiq_interval, fiq_total_information, format_fiq, info_content, parse_fiq)
from .rng import ExactSampler, split_seed
from .measurement import (ActualizationEvent, MeasurementInduced, MeasurementOutcome,
                          NoMechanism, Spontaneous, measure, parse_mechanism,
                          spontaneous_hook)
from .dynamics import (DoublingMap, ShiftBy, Trajectory, TrajectoryRecord, ensemble_spread,
                       run_trajectory, step_map)
from .calculus import (CausalModel, DegenerateModelError, HumphreysVerdict, humphreys_check,
                       lln_experiment, marginal_effect)
from .feasibility import (Behavior, Context, FeasibilityVerdict, check_global_space,
                          parse_behavior, format_behavior, rationalize)
from .quantum import (ObservableBasis, StateVector, bipartite_behavior, born_propensities)

"""Rate analysis for the four-node Gaussian relay chain with correlated noises."""
from .chain import (ChainParams, QuantLevels, assemble_joint, db_to_power, scenario_params,
                    validate)
from .concat import ConcatResult, concat_gap, concat_rate, gap_bound, optimal_q1
from .cutset import CutsetBounds, cutset_bound
from .errors import (DegenerateCorrelation, EmptyGrid, FactorizationFailure, InvalidParameters,
                     NotPositiveDefinite, RelayChainError, SingularConditioningBlock,
                     SingularNoiseCovariance, SingularSampleCovariance,
                     UnsupportedCorrelationStructure)
from .gaussian import GaussianJoint, conditional_cov, conditional_mi, is_psd, log_det, sym_matrix
from .kernels import BACKEND
from .montecarlo import McEstimate, mc_conditional_mi, sample_joint, validate_regression
from .nnc import GapReport, NncRates, nnc_gaps, nnc_rates_closed, nnc_rates_generic
from .optimize import GridSpec, OptResult, optimize_quant, unboundedness_sweep

__version__ = "0.1.0"

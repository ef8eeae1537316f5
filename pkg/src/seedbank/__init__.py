"""Simulation and exact computation for the seed bank coalescent.

The block-counting chain ``(plants, seeds)`` coalesces plant pairs at rate
``i(i-1)/2``, turns plants into seeds at rate ``c1*i`` and seeds back into
plants at rate ``c2*j``.
"""
from .exact import (ExactPmf, ExactSummary, ExpectationTable, Functional, balance_residual,
                    balance_residuals, beta_cdf_distance, dense_expectations, exact_summary,
                    expectations, gamma_law_moments, pmf_N_gamma)
from .laws import Beta2c1, Exponential, Frechet, GammaLaw, LimitLaw, ks_distance
from .model import (STANDARD, BlockState, EventKind, ModelParams, ParameterError, Variant,
                    total_rate, transition_rates)
from .rng import RngSpec
from .sampling import (Configuration, conditioned_spectrum_law, enumerate_A, enumerate_Abar,
                       expected_old, expected_recent, hoppe_urn_sample,
                       marginal_old_probability, pgf_Z, spectrum_probability)
from .simulate import (ABSORPTION, MarkedPartition, StopCondition, TerminalReason, Trajectory,
                       sample_first_activation, sample_first_deactivation, simulate_counts,
                       simulate_partition)
from .stats import (BlockSpectrum, BranchLengths, Convention, StoppingSummary, branch_lengths,
                    simulate_summary, spectrum_at_first_activation, stopping_summary,
                    superimpose_mutations)

__version__ = "0.1.0"

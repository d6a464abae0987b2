"""
dyadim:

version: 0.1.0

Entropies & dimensions of non-homogeneous Markov measures on the dyadic cylinders of [0, 1].
A measure is given by a sequence of transition couples (p_n, q_n): after a 0 the next symbol is
0 with probability p_n, after a 1 it is 0 with probability q_n. This package computes the
cylinder entropies H_n & the lower/upper dimensions they lead to, samples paths to check the
Shannon-McMillan-Breiman behaviour, studies windowed entropy gaps, sweeps perturbations of the
weights and builds a pair of piecewise-Bernoulli measures with comparable masses but distinct
dimensions.

Globals:
    - `__version__` - The current version of this package.
    - `logger` - The run logger, which prints to `stderr` from `INFO` upwards.

Modules:
    - `colours` - ANSI styling of the logger's terminal output.

Classes:
    - `WeightSequence` - Transition couples (p_n, q_n) of a measure.
    - `DoublingBlocks` - Generator rule alternating two couples on dyadic blocks.
    - `PerturbMode` - How perturbations of a sequence are drawn.
    - `MarkovMeasure` - The non-homogeneous Markov measure of a weight sequence.
    - `CylinderAddress` - A finite binary word naming a dyadic cylinder.
    - `EntropyProfile` - Entropies H_n & their normalizations c_n.
    - `DimensionEstimate` - Lower & upper dimension of a measure.
    - `StagePlan` - Block structure of the two-measure construction.
    - `PiecewiseMeasure` - One measure of that construction.
    - `Logger` - Run logger dispatching records to its sinks.
    - `DyadimError` - Base class of every error raised by this package.

Functions:
    - `binary_entropy`, `step_entropy` - Entropy terms h(p) of single steps.
    - `entropy_profile`, `entropy_bruteforce` - Entropies by recursion and by enumeration.
    - `window_entropy`, `window_table`, `eta_bound` - Windowed conditional entropies.
    - `lemma2_scan`, `delta_recursion_check` - Numerical checks of the window gap bounds.
    - `dimension_estimate`, `exact_dimension_periodic` - Dimensions of a measure.
    - `smb_check`, `local_exponent_bounds` - Sampled local exponents.
    - `perturb`, `linf_distance`, `continuity_sweep` - Perturbations of weights.
    - `build_pair`, `find_stage_depth`, `verify_ratio_condition`, `dimension_gap_report` -
      The two-measure construction.
    - `smb_concentration`, `construction_epsilon` - Band masses & parameters of that
      construction.
    - `main` - Entry point of the `dyadim` command.

Basic Usage:
    >>> from dyadim import MarkovMeasure, WeightSequence, dimension_estimate
    >>> measure = MarkovMeasure(WeightSequence.constant(0.3, 0.7))
    >>> dimension_estimate(measure).lower  # 0.881291...

Running an experiment:
    $ dyadim entropy --config experiment.ini --output-dir out/
"""
from sys import stderr as _stderr

from . import colours
from ._cli import main
from ._config import DyadimError
from ._counterexample import (
    PiecewiseMeasure,
    StagePlan,
    build_pair,
    construction_epsilon,
    dimension_gap_report,
    find_stage_depth,
    smb_concentration,
    verify_ratio_condition,
)
from ._dimension import (
    DimensionEstimate,
    continuity_sweep,
    dimension_estimate,
    exact_dimension_periodic,
    local_exponent_bounds,
    smb_check,
)
from ._entropy import (
    EntropyProfile,
    binary_entropy,
    delta_recursion_check,
    entropy_bruteforce,
    entropy_profile,
    eta_bound,
    lemma2_scan,
    step_entropy,
    window_entropy,
    window_table,
)
from ._logger import Logger, logger
from ._measure import CylinderAddress, MarkovMeasure
from ._weights import DoublingBlocks, PerturbMode, WeightSequence, linf_distance, perturb

__version__ = "0.1.0"
__all__ = (
    "logger",
    "Logger",
    "DyadimError",
    "WeightSequence",
    "DoublingBlocks",
    "PerturbMode",
    "MarkovMeasure",
    "CylinderAddress",
    "EntropyProfile",
    "DimensionEstimate",
    "StagePlan",
    "PiecewiseMeasure",
    "binary_entropy",
    "step_entropy",
    "entropy_profile",
    "entropy_bruteforce",
    "window_entropy",
    "window_table",
    "eta_bound",
    "lemma2_scan",
    "delta_recursion_check",
    "dimension_estimate",
    "exact_dimension_periodic",
    "smb_check",
    "local_exponent_bounds",
    "perturb",
    "linf_distance",
    "continuity_sweep",
    "build_pair",
    "find_stage_depth",
    "verify_ratio_condition",
    "dimension_gap_report",
    "smb_concentration",
    "construction_epsilon",
    "main",
    "colours",
)

logger.add(_stderr, min_level="INFO")

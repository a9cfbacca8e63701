"""Recovery of k-dimensional subspaces by alternating minimisation in the dual space.

A shallow complex sigmoid network is fitted to a target function (the
characteristic function of a point cloud, or a regression function) while
its input-gradient field is pushed towards a rank-k subspace that is
re-estimated from the gradient Gram matrix after every fit.
"""

from .alternating import AlternatingRun, accuracy, run_alternating
from .baselines import pca
from .config import ConfigError, ExperimentConfig
from .model import FourierModel, evaluate, grad_x, loss_param_grad
from .objective import (
    PenaltyState,
    data_term,
    empirical_char_fn,
    gram_matrix,
    penalty_term,
    sdr_target,
    total_loss,
)
from .optimizer import DivergenceError, OptimizerConfig
from .spectral import (
    Projector,
    eckart_young_oracle,
    eigh,
    frobenius_distance,
    ky_fan_antinorm,
    top_k_projector,
)

__version__ = "0.1.0"

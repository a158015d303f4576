"""Rectified generalized Gaussian toolkit.

Distribution family (densities, sampling, moments, scale solvers), sliced
two-sample distribution matching, mixed-entropy and HSIC estimators, sparsity
diagnostics, and a toy two-view trainer.
"""

from ._kernels import BACKEND as kernel_backend
from .dependence import KernelSpec, hsic, nhsic, nhsic_offdiag_mean
from .diagnostics import SparsityReport, sparsity_metrics, vcreg_diagnostics
from .distributions import (
    MomentSummary,
    RGGParams,
    expected_l0,
    gn_cdf,
    gn_pdf,
    gn_variance,
    lp_norm_constraint_check,
    read_sample_csv,
    rgn_moments,
    rgn_pdf_mass,
    rgn_zero_mass,
    sample_gn,
    sample_rgn,
    sigma_gn,
    sigma_rgn,
    write_sample_csv,
)
from .entropy import (
    DDimEntropy,
    ddim_entropy_empirical,
    info_dim_hat,
    marginal_entropy_sum,
    mspacing_entropy,
    rgn_ddim_entropy_theoretical,
)
from .slicing import (
    LossBreakdown,
    ProjectionSet,
    eig_projections,
    mixed_projections,
    rdmreg_loss,
    sample_sphere_projections,
    sliced_stat_profile,
    sliced_w2_1d,
)
from .trainer import (
    EncoderModel,
    TrainConfig,
    TrainTrace,
    backward,
    compare_projection_policies,
    forward,
    generate_views,
    train,
)

__version__ = "0.1.0"

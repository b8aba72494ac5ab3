"""Canonical variate analysis biplots for any n and p."""

from ._core import (
    BiplotLayout,
    CalibratedAxis,
    CvaModel,
    Dataset,
    Error,
    GsvdFactors,
    InputError,
    IoError,
    NumericError,
    RankTolerance,
    SingularScatterError,
    calibrate_axis,
    cluster_quality,
    complete_orthogonal_decomposition,
    discriminant_columns,
    fit_gsvd,
    fit_standard,
    generalized_eigenvalues,
    gsvd,
    inv_sqrt_spd,
    layout,
    nice_markers,
    pseudoinverse,
    render_svg,
    run_fit,
    scores,
    svd,
    symmetric_eigen,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

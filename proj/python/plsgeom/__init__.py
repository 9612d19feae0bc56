"""PLS shrinkage factors and their geometry."""

from ._core import (
    __version__,
    caratheodory_reduce,
    cone_membership,
    corner,
    corner_weight,
    exp_correlation,
    expand_template,
    extreme_bound,
    gdof,
    hull_inverse,
    inverse_rays,
    marginal_segment,
    mc_gdof,
    shrinkage,
    sign_changes,
    signatures,
    simplex_template,
    spectrum_from_gram,
)

__all__ = [
    "__version__",
    "caratheodory_reduce",
    "cone_membership",
    "corner",
    "corner_weight",
    "exp_correlation",
    "expand_template",
    "extreme_bound",
    "gdof",
    "hull_inverse",
    "inverse_rays",
    "marginal_segment",
    "mc_gdof",
    "shrinkage",
    "sign_changes",
    "signatures",
    "simplex_template",
    "spectrum_from_gram",
]

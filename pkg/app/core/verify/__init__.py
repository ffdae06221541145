from app.core.verify.laf import VerifiedResult, extremal_points, laf_check, laf_errors
from app.core.verify.ransac import (
    FUNDAMENTAL_SOLVER,
    HOMOGRAPHY_SOLVER,
    ModelSolver,
    auto_model,
    estimate_fundamental,
    estimate_homography,
    estimate_points,
    lo_ransac,
    required_iterations,
)

__all__ = [
    "FUNDAMENTAL_SOLVER",
    "HOMOGRAPHY_SOLVER",
    "ModelSolver",
    "VerifiedResult",
    "auto_model",
    "estimate_fundamental",
    "estimate_homography",
    "estimate_points",
    "extremal_points",
    "laf_check",
    "laf_errors",
    "lo_ransac",
    "required_iterations",
]

"""Rank-one convexity criteria, constitutive inequalities and domain scans."""

from .criteria import (
    as_g,
    buliga_form,
    check_BE,
    check_buliga,
    check_dacorogna_3d,
    check_KS_2d,
    check_schur_convexity,
    check_TE,
    check_zubov_incompressible,
    dev_quadratic,
    sphere_directions,
)
from .report import BOUNDARY, FAIL, PASS, CriterionReport, Margin
from .counterexamples import run_counterexamples
from .monotonicity import (
    check_coupled_exponential_tsts,
    check_kstsm,
    check_tsts_full_exponential,
    check_tsts_quadratic_form,
    tsts_bounded_distortion_feasibility,
)
from .scalar import (
    check_scalar_logsquare_convexity,
    check_volumetric_convexity,
    h_det_rank_one_check,
    simple_shear_nonconvexity_witness,
)
from .scan import LogGrid, scan_domain

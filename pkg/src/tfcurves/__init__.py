"""Exact desk-scale toolkit for line-tangency geometry of plane curves
over small finite fields.

Submodules:

* gf          -- arithmetic contexts for GF(p^m) and their extensions
* pg2         -- points, lines, and closed points of the projective plane
* forms       -- ternary/binary forms, restriction to lines, squarefreeness
* curve_tests -- per-curve predicates: transversality, tangency, smoothness
* levi        -- incidence matrices, exact permanents, matchings, bounds
* density     -- exact censuses, Monte Carlo estimates, closed-form bounds
* synth       -- construction of smooth curves tangent to every line
* cli         -- batch command-line surface
"""

from . import cli, curve_tests, density, forms, gf, levi, pg2, synth
from .curve_tests import (is_singular_at, is_smooth, is_tangent_at,
                          is_transverse, is_transverse_free, tangency_points)
from .density import (BoundsReport, DensityEstimate, bounds_report, census,
                      inequality_suite, monte_carlo, non_transverse,
                      singular_at, smooth_transverse_free, tangency_density_limit,
                      tangent_at, transverse_free, truncated_tangency_product,
                      vanishing_at)
from .forms import BinaryForm, TernaryForm, make_form, parse_form, serialize
from .gf import CapExceeded, FieldCtx, ctx_for_q, ext_field, field_ctx
from .levi import (IncidenceMatrix, Matching, count_matchings_backtrack,
                   enumerate_matchings, incidence_matrix, permanent_ryser,
                   schrijver_bound)
from .pg2 import ProjLine, ProjPoint, enumerate_lines, enumerate_points
from .synth import (SynthFailure, TangencySystem, kernel_smooth_scan,
                    sample_transverse_free, smooth_rate_report,
                    synth_record, tangency_system)

__version__ = "0.1.0"

__all__ = [
    "BinaryForm", "BoundsReport", "CapExceeded", "DensityEstimate",
    "FieldCtx", "IncidenceMatrix", "Matching", "ProjLine", "ProjPoint",
    "SynthFailure", "TangencySystem", "TernaryForm", "bounds_report",
    "census", "cli", "count_matchings_backtrack", "ctx_for_q",
    "curve_tests", "density", "enumerate_lines", "enumerate_matchings",
    "enumerate_points", "ext_field", "field_ctx", "forms", "gf",
    "incidence_matrix", "inequality_suite", "is_singular_at", "is_smooth",
    "is_tangent_at", "is_transverse", "is_transverse_free",
    "kernel_smooth_scan", "levi", "make_form", "monte_carlo",
    "non_transverse", "parse_form", "permanent_ryser", "pg2",
    "sample_transverse_free", "schrijver_bound", "serialize",
    "singular_at", "smooth_rate_report", "smooth_transverse_free", "synth",
    "synth_record", "tangency_density_limit", "tangency_points",
    "tangency_system", "tangent_at", "transverse_free",
    "truncated_tangency_product", "vanishing_at",
]

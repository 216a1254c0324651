"""Exact rational homotopy computations: free CDGAs, Poincaré duality
algebras, minimal models, Massey products and formality audits."""

from .algebra import Element, FreeAlgebra, Generator, GradedAlgebra, bar
from .dga import (
    CohomologyReport,
    DGAMorphism,
    FreeCDGA,
    Integration,
    cohomology,
    induced_map,
    is_quasi_iso_in_range,
    validate,
)
from .errors import (
    AlgebraError,
    AlgebraMismatch,
    DegreeCapExceeded,
    DegreeError,
    InvariantViolation,
    MasseyUndefined,
    NotClosed,
    PDValidationError,
)
from .pd import (
    LefschetzCertificate,
    PDAlgebra,
    WallData,
    as_formal_dga,
    connected_sum,
    integrate,
    lefschetz_check,
    load_pd_algebra,
    product,
    validate_wall,
)
from .minimal_model import (
    HirschData,
    SFormalityReport,
    SullivanStage,
    build_minimal_model,
    check_s_formality_witness,
    hirsch_extend,
    sullivan_step,
)
from .massey import MasseyProblem, MasseyResult, massey_triple, scan_all_triples, solve_primitive, solve_uniform_vanishing
from .constructions import BundleModel, circle_bundle_model, gysin_ranks, product_with_sphere, sphere_bundle_model
from .audit import AuditReport, audit_theorem_lefschetz, audit_theorem_miller

__version__ = "0.1.0"

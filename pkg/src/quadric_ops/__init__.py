"""Orthogonal polynomials, cubature and transforms on quadric surfaces and solids of revolution."""
from .coefficients import CoefficientSet, decay_profile
from .cubature import CubatureRule, disk_cubature, solid_cubature, surface_cubature
from .disk import (
    CircularHarmonicIndex,
    DiskBasisIndex,
    circular_harmonic,
    disk_basis_table,
    disk_indices,
    disk_op_eval,
    gegenbauer_product_eval,
)
from .errors import (
    BasisIndexError,
    ConvergenceError,
    FormatError,
    GeometryError,
    InsufficientDataError,
    NumericalError,
    ParameterDomainError,
    QuadricError,
)
from .geometry import (
    GeometrySpec,
    QuadricProfile,
    SolidWeight,
    SurfaceWeight,
    jacobi_weight,
    make_geometry,
    reduced_weight_solid,
    reduced_weight_surface,
    solid_weight,
    surface_weight,
)
from .poly1d import (
    GenGegenbauerParams,
    JacobiParams,
    QuadratureRule1D,
    RecurrenceCoefficients,
    Weight1D,
    family_recurrence,
    gauss_rule,
    gen_gegenbauer_eval,
    gen_gegenbauer_recurrence,
    jacobi_eval,
    jacobi_norm,
    jacobi_recurrence,
    stieltjes_recurrence,
)
from .solid import SolidBasis, SolidIndex, solid_dim, solid_eval, solid_indices, solid_inner_product
from .surface import SurfaceBasis, SurfaceIndex, surface_dim, surface_eval, surface_indices, surface_inner_product
from .transform import (
    LoweringOperator,
    disk_function_analysis,
    disk_function_synthesis,
    lowering_operator,
    lowering_solve,
    projection_analysis,
    solid_analysis,
    solid_synthesis,
    surface_analysis,
    surface_synthesis,
)

__version__ = "0.1.0"

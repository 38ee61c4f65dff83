"""Class fields from CM points on the Hilbert modular surface for Q(sqrt 5).

Starting from a cyclic quartic CM field K = Q(sqrt(A(D + B sqrt D))), the
package builds the principally polarized abelian surface with CM by O_K,
moves its period matrix onto the Humbert surface N5, evaluates Klein's
icosahedral functions X, Y through theta constants and recognizes the
values as algebraic numbers.
"""

from .cm_field import CMFieldSpec, classify, field_invariants, integral_basis, riemann_gram, zeta_principal
from .classgroup import ClassGroupShape, galois_structure
from .pipeline import PipelineConfig, run_pipeline
from .symplectic import HilbertPoint, PeriodMatrix, Sp4Element
from .theta import canonical_point, eval_XY, klein_residual, theta_const

__version__ = "0.1.0"

__all__ = [
    "CMFieldSpec",
    "ClassGroupShape",
    "HilbertPoint",
    "PeriodMatrix",
    "PipelineConfig",
    "Sp4Element",
    "canonical_point",
    "classify",
    "eval_XY",
    "field_invariants",
    "galois_structure",
    "integral_basis",
    "klein_residual",
    "riemann_gram",
    "run_pipeline",
    "theta_const",
    "zeta_principal",
]

"""Forward semi-Lagrangian Vlasov-Poisson solver (1D x 1V).

Grid nodes are pushed forward along the characteristics with a Verlet or
Cauchy-Kovalevsky (order 2 or 3) integrator and deposited back onto the
fixed phase-space mesh with tensor B-spline weights.  Mass is conserved
exactly by construction; with linear splines and the staggered
finite-difference field solver the total momentum is conserved exactly
as well.
"""

__version__ = "0.1.0"

from .field import PoissonMethod
from .grid import PhaseGrid, build_grid
from .pushers import PusherKind
from .splines import SplineKind

__all__ = [
    "__version__",
    "PhaseGrid",
    "build_grid",
    "PoissonMethod",
    "PusherKind",
    "SplineKind",
]

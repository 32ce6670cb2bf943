from .contour import Contour, TridiagOperator, discretize
from .convergence import ConvergenceResult, convergence_study, observed_order
from .eigen import (
    Eigenvector,
    eig_complex_tridiag,
    eig_sym_tridiag,
    eigenpair_residual,
    eigenvector_inverse_iteration,
)
from .shooting import Shooter, shoot_find, shoot_residual
from .spectrum import CrossCheck, Spectrum, cross_method, solve_fd, solve_shoot

__all__ = [
    "Contour",
    "ConvergenceResult",
    "CrossCheck",
    "Eigenvector",
    "Shooter",
    "Spectrum",
    "TridiagOperator",
    "convergence_study",
    "cross_method",
    "discretize",
    "eig_complex_tridiag",
    "eig_sym_tridiag",
    "eigenpair_residual",
    "eigenvector_inverse_iteration",
    "observed_order",
    "shoot_find",
    "shoot_residual",
    "solve_fd",
    "solve_shoot",
]

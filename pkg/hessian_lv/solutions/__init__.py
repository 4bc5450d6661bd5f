"""
Radial solutions: reconstruction from orbits, closed forms and residuals.
"""
from hessian_lv.solutions.branch import (BifurcationSample, RadialSolution,
                                         SolutionSource, bifurcation_diagram,
                                         count_solutions,
                                         lambda_star_lower_bound,
                                         reconstruct_solution)
from hessian_lv.solutions.closed_form import (bliss_function, critical_orbit,
                                              critical_solutions, d_roots,
                                              singular_solution)
from hessian_lv.solutions.residuals import (integral_residual,
                                            khessian_residual)

__all__ = [
    "BifurcationSample",
    "RadialSolution",
    "SolutionSource",
    "bifurcation_diagram",
    "bliss_function",
    "count_solutions",
    "critical_orbit",
    "critical_solutions",
    "d_roots",
    "integral_residual",
    "khessian_residual",
    "lambda_star_lower_bound",
    "reconstruct_solution",
    "singular_solution",
]

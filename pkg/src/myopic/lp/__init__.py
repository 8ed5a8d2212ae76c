from .model import (
    LPConfig,
    LPModel,
    LPRow,
    LPSolution,
    ResidualReport,
    build_lp,
    residuals,
    solution_to_function,
    solve_certificate,
    solve_lp,
    submodularity_rows,
    verify_solution,
)
from .simplex import SimplexResult, simplex
from .textio import export_lp_text, parse_lp_text, read_lp, write_lp

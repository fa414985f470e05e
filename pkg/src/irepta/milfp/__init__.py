"""Mixed-integer linear fractional programming."""

from .bnb import BnbConfig, BnbNode, MilfpSolution, MilfpStatus, relaxation_bound, solve_milfp
from .check import FeasibilityReport, check_solution
from .dinkelbach import DinkelbachResult, dinkelbach_oracle, dinkelbach_solve
from .jsonio import dump_problem, load_problem, problem_from_dict, problem_to_dict
from .problem import LfpProblem, MilfpProblem, relax
from .transform import CcLpProblem, U_MIN, charnes_cooper_transform, recover_solution

__all__ = [
    "BnbConfig", "BnbNode", "CcLpProblem", "DinkelbachResult", "FeasibilityReport",
    "LfpProblem", "MilfpProblem", "MilfpSolution", "MilfpStatus", "U_MIN",
    "charnes_cooper_transform", "check_solution", "dinkelbach_oracle", "dinkelbach_solve",
    "dump_problem", "load_problem", "problem_from_dict", "problem_to_dict",
    "recover_solution", "relax", "relaxation_bound", "solve_milfp",
]

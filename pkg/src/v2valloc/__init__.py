"""Conflict-free V2V subchannel allocation: compiler, exact solver, harness."""

from .compiler import Formulation, Problem, ViolationReport, assemble, check_feasible
from .scenario import CapacityMap, Scenario, generate_capacity, load_scenario
from .solver import Limits, SolveResult, Status, random_allocation, solve_exact

__all__ = [
    "CapacityMap", "Formulation", "Limits", "Problem", "Scenario", "SolveResult",
    "Status", "ViolationReport", "assemble", "check_feasible", "generate_capacity",
    "load_scenario", "random_allocation", "solve_exact",
]

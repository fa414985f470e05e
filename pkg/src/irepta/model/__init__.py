"""Plant planning models: parameters, builders, decoding and operation simulation."""

from .builder import (CAPACITY_KEYS, SCHEDULE_KEYS, UNIT_KEYS, ModelInstance,
                      as_transient_coefficients, build_deterministic_model,
                      build_fixed_ras_milp, build_operation_model, build_revenue_milp,
                      cost_terms, pin_values, transient_factors)
from .params import (COST_UNIT, FACILITIES, CapacityBounds, FacilityParams, PlanningConfig,
                     RenewableProfile, config_hash, crf, default_facilities)
from .plan import (OperationResult, PlanResult, extract_plan, plan_diagnostics,
                   simulate_operation, solve_model, total_initial_investment)
from .profiles import synthetic_profile

__all__ = [
    "CAPACITY_KEYS", "COST_UNIT", "CapacityBounds", "FACILITIES", "FacilityParams",
    "ModelInstance", "OperationResult", "PlanResult", "PlanningConfig", "RenewableProfile",
    "SCHEDULE_KEYS", "UNIT_KEYS", "as_transient_coefficients", "build_deterministic_model",
    "build_fixed_ras_milp", "build_operation_model", "build_revenue_milp", "config_hash",
    "cost_terms", "crf", "default_facilities", "extract_plan", "pin_values",
    "plan_diagnostics", "simulate_operation", "solve_model", "synthetic_profile",
    "total_initial_investment", "transient_factors",
]

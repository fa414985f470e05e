"""Sizing of isolated renewable power-to-ammonia plants.

Subpackages
-----------
lp
    LP problem container, bundled revised simplex, HiGHS wrapper, MPS I/O.
milfp
    Mixed-integer linear fractional programs: Charnes-Cooper transform and
    branch-and-bound.
model
    The plant planning model (levelized cost of ammonia objective).
"""

__version__ = "0.1.0"

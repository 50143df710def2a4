"""Central tolerance record.

All numerical cutoffs used across the package live here so the tolerance
budget can be audited in one place.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # algebraic identities (canonical form reconstruction, oracle agreement)
    algebraic: float = 1e-10
    # comparisons between independently derived quantities
    derived: float = 1e-9
    # Gram determinant / Hadamard scale below which a frame is rank deficient
    rank: float = 1e-12
    # same, for chart differentials
    immersion: float = 1e-10
    # orthonormality of rotations and frames
    orthonormal: float = 1e-12
    # CompatibleStructure validity
    jsquare: float = 1e-10
    compatibility: float = 1e-10
    metric_symmetry: float = 1e-12
    metric_condition: float = 1e-10
    # |p| - 1 for S^6 base points
    unit: float = 1e-12
    # distance of a subspace from the structure's support
    support: float = 1e-10
    # Wirtinger bound slack: |cos alpha| <= 1 + bound
    bound: float = 1e-9
    # default classification cutoff
    classify: float = 1e-8
    # equality clause: residual <= equality_residual implies |cos| >= 1 - equality_cos
    equality_residual: float = 1e-8
    equality_cos: float = 1e-6
    # |cos alpha| >= 1 - singular marks alpha as non-smooth for gradients
    singular: float = 1e-6
    # default Nijenhuis central-difference step (chart units)
    nijenhuis_step: float = 1e-4
    # default chart Jacobian step, relative to the parameter-domain diameter
    chart_step: float = 1e-5
    # Nijenhuis step must not exceed this fraction of the chart-domain radius
    max_step_fraction: float = 0.01


TOL = Tolerances()

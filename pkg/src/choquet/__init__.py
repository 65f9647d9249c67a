"""Non-additive measure theory at desk scale.

Exact Choquet integration against arbitrary monotone set functions on
finite ground sets and dyadic grids, with constructive verification of
sublinearity, duality over dominated measures, and convergence audits.
"""

from .capacity import (
    Axiom,
    AxiomReport,
    AxiomWitness,
    Capacity,
    GeneratorKind,
    check_axiom,
    contract,
    find_strong_subadditivity_violation,
    generate_capacity,
    regularize,
    threshold_capacity,
)
from .convergence import (
    ConvergenceAudit,
    FunctionSequence,
    Verdict,
    chebyshev_audit,
    converse_dct_audit,
    countable_sublinearity_audit,
    dct_harness,
    fatou_harness,
    qu_audit,
)
from .domain import (
    GroundSet,
    StepFunction,
    SubsetMask,
    abs_,
    add,
    floor_scale,
    indicator,
    pos_part,
    scalar,
    sub,
    superlevel,
    truncate,
)
from .duality import (
    AdditiveMeasure,
    DualMethod,
    DualityReport,
    domination_inequality_audit,
    dual_value,
    greedy_measure,
    is_dominated,
    semifinite_unboundedness_demo,
)
from .errors import (
    BudgetError,
    ChoquetError,
    HypothesisError,
    InvariantViolation,
    LoaderError,
    PremiseError,
    UniverseMismatchError,
)
from .hausdorff import (
    AlgebraicValue,
    CoverSolution,
    DyadicCellSet,
    DyadicCube,
    DyadicDomain,
    content,
    cover_certificate_check,
    export_capacity,
)
from .integral import (
    EquivalenceReport,
    IntegralValue,
    check_strict_vs_weak,
    choquet,
    choquet_value,
    quasi_sublinearity_check,
    sublinearity_gap,
    truncation_tail,
    verify_sublinearity_equivalence,
)
from .nesting import NestedFamily, NestingAudit, capacity_sum_audit, lemma_step, nest
from .values import INDETERMINATE, INF, NEG_INF

__all__ = [name for name in dir() if not name.startswith("_")]

"""Law-invariant pricing functionals on finite equal-atom probability spaces.

Quantile calculus, distortion (Choquet) prices, bid-ask friction and the
collapse-to-the-mean dichotomy, capital requirements with eligible assets,
and Luxemburg gauges, all with exact sorted-vector arithmetic and randomized
structure audits.
"""

from .errors import (
    FlagError,
    LawPriceError,
    SolverError,
    SpaceMismatchError,
    ValidationError,
)
from .spaces import (
    AtomSpace,
    Partition,
    Payoff,
    condition,
    expectation,
    is_comonotone,
    load_scenario,
    random_partition,
    random_payoff,
    same_law,
    scenario_to_dict,
)
from .quantiles import (
    QuantileFn,
    comonotone_rearrangement,
    convex_order_geq,
    convex_order_oracle,
    hl_product,
    max_correlation_oracle,
    quantile,
)
from .functionals import (
    Distortion,
    FunctionalFlags,
    PricingFunctional,
    RepresentationSet,
    atom_value,
    choquet_eval,
    choquet_functional,
    conjugate_lower_bound,
    entropic,
    es_distortion,
    evaluate,
    expectation_functional,
    expected_shortfall,
    flag_audit,
    floor_gauge,
    functional_from_config,
    gate,
    identity_distortion,
    mean_abs_dev,
    power_distortion,
    recession,
    representation_eval,
    representation_functional,
    schur_convexity_report,
    table_distortion,
    worst_case,
)
from .friction import (
    CollapseReport,
    FrictionReport,
    collapse_scan,
    friction_report,
    is_frictionless,
    is_strongly_frictionless,
    spread,
    spread_landscape,
    strong_residual,
    z_additivity_check,
)
from .capital import (
    AcceptanceFlags,
    AcceptanceSet,
    Market,
    atom_indexed_acceptance,
    conditioning_closure_check,
    es_loss_acceptance,
    expectation_acceptance,
    law_invariance_witness,
    min_loss_acceptance,
    pointedness_check,
    risk_free_acceptance,
    risk_measure,
    solve_risk,
)
from .orlicz import (
    YoungFunction,
    delta2_check,
    exp_young,
    linf_young,
    luxemburg_norm,
    norm_order_check,
    power_young,
)

__version__ = "0.1.0"

"""Skew tent map dynamics: region atlas, closed-form attractors,
symbolic Cantor repellers, and numerical verification."""

from .core import (
    Canonical,
    GeneralTent,
    Landed,
    Escaped,
    MapParams,
    Orbit,
    TrappingInterval,
    Trivial,
    Undecided,
    UnitMap,
    eval_f,
    eval_g,
    iterate_f,
    iterate_g,
    landing_time,
    normalize,
    to_unit,
    trapping_interval,
)
from .errors import (
    DepthOverflow,
    Inadmissible,
    InvalidMap,
    InvalidWord,
    NoBoundedOrbit,
    NotClassified,
    NotReducible,
    OutOfDomain,
    PrecisionLoss,
    SkewTentError,
    WrongRegion,
)
from .intervals import IntervalUnion
from .regions import (
    CascadeDepth,
    Region,
    RegionTag,
    RenormState,
    WindowGeometry,
    K_threshold,
    K_wall,
    L_curve,
    N_curve,
    alpha_threshold,
    beta_threshold,
    cascade_depth,
    chi,
    classify,
    gamma_threshold,
    renorm_sequence,
    rho,
    t_poly,
    window_geometry,
    window_index,
)
from .attractors import (
    Attractor,
    AttractorKind,
    CascadeData,
    ExceptionalSet,
    PeriodicOrbit,
    WindowData,
    attractor,
    cascade_attractor,
    fixed_point_attractor,
    two_cycle,
    window_band_attractor,
    window_core,
    window_periodic_orbits,
)
from .symbolic import (
    CantorSystem,
    Exited,
    ShiftKind,
    Word,
    admissible_words,
    escape_cantor_system,
    is_admissible,
    itinerary,
    point_from_itinerary,
    window_cantor_system,
)
from .verify import (
    CoveredAt,
    FateStats,
    LyapunovEstimate,
    NotCovered,
    basin_experiment,
    check_disjoint,
    check_invariance,
    covering_test,
    lyapunov,
)

__version__ = "0.1.0"

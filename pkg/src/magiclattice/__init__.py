"""magiclattice: exact lattice shells and the quantum states they define."""

from .exact import (
    EISENSTEIN_UNITS,
    GAUSSIAN_UNITS,
    EisensteinInt,
    GaussianInt,
    OMEGA,
    THETA,
    canonical_vector,
    exact_div,
    primitive_part,
    ray_reduce,
    ring_gcd,
    unit_canonicalize,
    vector_norm,
)
from .lattices import (
    EnumerationBudgetExceeded,
    Shell,
    ShellCacheError,
    ShellVector,
    build_lattice,
    coordinate_bounds,
    default_cache_dir,
    ensure_shell,
    enumerate_shell,
    load_shell,
    naive_box_enumerate,
    save_shell,
    shell_cache_path,
    solve_eisenstein_coefficients,
    theta_check,
)
from .states import (
    PureStateExact,
    StateSet,
    dedup,
    export_csv,
    export_json,
    overlap_sq,
    real_to_complex,
    vector_to_state,
)
from .magic import (
    CensusReport,
    CensusRow,
    ExtremalBounds,
    INTERMEDIATE,
    MAX_MAGIC_MUB,
    MAX_MAGIC_SIC,
    MagicReport,
    PauliString,
    STABILISER,
    WHDisplacement,
    applicable_bounds,
    apply_operator,
    classify,
    expectation_sq,
    extremal_bounds,
    m_alpha,
    magic_label,
    mub_orbit_check,
    pauli_strings,
    sic_check,
    sre_census,
    stabiliser_count,
    wh_covariance_check,
    wh_covariance_check_all,
    wh_displacements,
    xi_alpha,
    xi_batch_gaussian,
)
from .clifford import (
    CliffordElement,
    ClosureError,
    CorrespondenceReport,
    H,
    IDENTITY,
    Orbit,
    OrbitEscapeError,
    S,
    StabiliserGroupQutrit,
    act,
    generate_clifford_qutrit,
    orbit_partition,
    stabiliser_groups_qutrit,
    stabiliser_state,
    verify_e6_correspondence,
)
from .entangle import (
    CLASS_TOL,
    ConcurrenceProfile,
    ConcurrenceRootError,
    DensityMatrixExact,
    EntanglementCensus,
    classify_entanglement,
    entanglement_census,
    f3,
    one_to_other_concurrence,
    pairwise_concurrence,
    pairwise_concurrence_2qubit,
    reduced_density,
    wootters_concurrence,
)

__version__ = "0.1.0"

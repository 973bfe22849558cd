"""Boolean-covering machinery for finite quantum observable structures."""

from .adjunction import (
    BijectionReport,
    ColimitCarrier,
    CounitMap,
    GeneratorTriple,
    IsoReport,
    adjunction_bijection_check,
    cocone_check,
    colimit,
    colimit_dump,
    counit,
    counit_is_iso,
)
from .algebra import (
    BooleanEventAlgebra,
    EventHomomorphism,
    QuantumEventAlgebra,
    as_boolean,
    compose_homs,
    enumerate_blocks,
    enumerate_homs,
    identity_hom,
    parse_lattice,
    validate_boolean_algebra,
    validate_homomorphism,
    validate_quantum_algebra,
)
from .localization import (
    CoverPullback,
    FullReport,
    PastingMap,
    PrelocalizationSystem,
    Verdict,
    boolean_representation_verdict,
    cocycle_check,
    generate_system,
    is_localization_system,
    maximal_system,
    parse_system_file,
    pasting_map,
    pullback,
    pullback_universal_check,
    validate_system,
)
from .observables import (
    BorelFrame,
    Observable,
    ObservableArrow,
    compose_arrows,
    compose_triangle,
    enumerate_observables,
    observable_from_atoms,
    parse_observable,
    validate_arrow,
    validate_observable,
)
from .presheaves import (
    ElementsCategory,
    FiniteCategory,
    Presheaf,
    category_of_elements,
    constant_presheaf,
    empty_presheaf,
    hom_functor_R,
    nat_transformations,
    parse_presheaf,
    representable,
    validate_elements_category,
    validate_presheaf,
)
from .reports import (
    BudgetExceeded,
    CheckResult,
    ConstructionError,
    IllFormedSubfunctor,
    NotAnArrow,
    NotInvertible,
    ParseError,
    StructuralError,
    ToolkitError,
    ValidationReport,
)
from .valuation import (
    BooleanPowerFiber,
    FibrationRelation,
    SpaceChart,
    StoneSpace,
    atom_matching_iso,
    build_fibration,
    charts_equivalent,
    fibration_dump,
    reconstruct,
    stone,
    stone_dump,
)

__version__ = "0.1.0"

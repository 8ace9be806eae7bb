"""Characteristic numbers of finite algebras and symmetric pencils, computed by
random slicing and Groebner-basis counting over prime fields and checked
against closed forms."""

from __future__ import annotations

__version__ = "0.1.0"

from .algebra import (
    FiniteAlgebra,
    adapted_basis,
    change_basis,
    chain,
    cw,
    direct_sum,
    family,
    from_quotient,
    from_spec,
    from_table,
    is_local_at_origin,
    maximal_ideal_filtration,
    smooth,
    socle,
    trivial,
)
from .charnum import (
    CharSequence,
    CharValue,
    EngineConfig,
    MultidegreePolynomial,
    characteristic_number,
    characteristic_sequence,
    classify_complete_intersection,
    classify_gorenstein,
    join_sequence,
    multidegree,
)
from .closedforms import (
    binomial_sequence,
    bound_report,
    cw_closed_form,
    mixed_eulerian,
    mixed_eulerian_table,
    trivial_closed_form,
)
from .fieldpoly import (
    MonomialOrder,
    PolyRing,
    Polynomial,
    PrimeField,
    parse_polynomial,
    random_combination,
    symbolic_determinant,
)
from .groebner import (
    GroebnerBasis,
    Ideal,
    buchberger,
    is_zero_dimensional,
    normal_form,
    saturate_by_element,
    solution_count,
    standard_monomials,
)
from .pencil import (
    SymmetricPencil,
    det_monomial_check,
    det_monomial_decomposable,
    generic_rank,
    minors,
    pencil_from_algebra,
    pencil_from_matrices,
)

"""Combinatorics of minimal log maps to rank-one Deligne–Faltings pairs.

Exact integer arithmetic throughout: associated monoids of marked graphs,
admissibility, minimality, specialization and enumeration.
"""

from .enumeration import (
    DualGraphInput,
    EnumerationLimits,
    EnumerationResult,
    brute_force_enumerate,
    check_input,
    degree_balance,
    distinguished_partition,
)
from .enumeration import enumerate as enumerate_marked_graphs
from .errors import *  # noqa: F401,F403
from .graph import (
    Edge,
    Leg,
    MarkedGraph,
    SpecializationSpec,
    Vertex,
    associated_monoid,
    degeneracies,
    ensure_valid,
    has_strict_cycle,
    is_admissible,
    minimality_check,
    presentation,
    specialize,
    validate,
)
from .monoid import (
    AffineMonoid,
    MonoidMorphism,
    MonoidPresentation,
    affine_image,
    contains,
    extremal_rays,
    face_quotient,
    groupify,
    hilbert_basis,
    is_isomorphism,
    multiple_in_unsaturated,
    saturate,
)

__version__ = "0.1.0"

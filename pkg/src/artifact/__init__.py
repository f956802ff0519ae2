"""Exact computations with real and complex dual pairs in spo(E, B) and the Weyl-Clifford algebra."""

__version__ = "0.1.0"

from .scalars_division import (  # noqa: E402
    ALGEBRA_NAMES,
    DElement,
    DivisionSuperalgebra,
    GaussianRational,
    Superinvolution,
    make_algebra,
    sop,
    superinvolutions,
)
from .graded_linear import BilinearSpace, DModule, LieSpan, SuperMatrix, SuperSpace, realify  # noqa: E402
from .forms_involutions import SuperhermitianForm, g_of_form, standard_form  # noqa: E402
from .realizations import FamilyTag, crosscheck, realize  # noqa: E402
from .dual_pairs import (  # noqa: E402
    DualPairInstance,
    build_type_I,
    build_type_II,
    instance_from_row,
    table_rows,
    verify_dual_pair,
)
from .weyl_clifford import FockBasis, WeylClifford, beta, fock_act  # noqa: E402
from .invariants_howe import HCPair, double_commutant_check, howe_decompose, wc_invariants  # noqa: E402

__all__ = [
    "ALGEBRA_NAMES", "DElement", "DivisionSuperalgebra", "GaussianRational", "Superinvolution",
    "make_algebra", "sop", "superinvolutions",
    "BilinearSpace", "DModule", "LieSpan", "SuperMatrix", "SuperSpace", "realify",
    "SuperhermitianForm", "g_of_form", "standard_form",
    "FamilyTag", "crosscheck", "realize",
    "DualPairInstance", "build_type_I", "build_type_II", "instance_from_row", "table_rows", "verify_dual_pair",
    "FockBasis", "WeylClifford", "beta", "fock_act",
    "HCPair", "double_commutant_check", "howe_decompose", "wc_invariants",
]

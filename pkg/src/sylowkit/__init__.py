"""sylowkit: construct Sylow-subgroup models of small classical groups and
verify them, exactly, against brute-force extraction."""

from .backends import BACKEND
from .catalog import CATALOG, get_entry, list_catalog
from .classical import ClassicalSpec, build, form_check, omega_subgroup, order_formula, standard_forms
from .errors import (
    BudgetExceeded,
    ExprError,
    Inapplicable,
    InvalidConstruction,
    SylowkitError,
)
from .expr import eval_expr, parse, print_expr
from .ff import ArithParams, FieldElement, FiniteField, arith_params, conj, ff_from_size, ff_make, v_l
from .groups import (
    Action,
    Group,
    InvariantFingerprint,
    Permutation,
    central_quotient,
    center,
    close_group,
    constrained_subgroup,
    cyclic,
    derived_subgroup,
    dihedral,
    direct_product,
    element_order,
    fingerprint,
    mu_group,
    permuting_action,
    power_group,
    quaternion,
    semidirect_product,
    sign,
    sylow_of_symmetric,
    symmetric,
)
from .sylow import SylowResult, is_sylow, p_part, sylow
from .verify import (
    Case,
    IsoResult,
    VerificationReport,
    default_suite,
    is_isomorphic,
    run_suite,
    verify_claim,
    witness_replay,
)

__version__ = "0.1.0"

"""normid: exact verification of squared-norm identities.

Decides whether an expression sum(c_A * ||x_A||^2) vanishes identically
in inner-product spaces, producing either a reduced-form proof or a
certificate with explicit counterexample vectors, and searches for
violations of valid identities under norms that are not induced by an
inner product.
"""

from .core import (
    IdentityError,
    MAX_INDICES,
    PlainIdentity,
    Rational,
    binomial,
    card,
    full_mask,
    indices_of,
    mask_of,
    subsets_of,
)
from .algebra import (
    Certificate,
    InternalError,
    ReducedForm,
    Verdict,
    Witness,
    expand_to_pairs,
    make_witness,
    singleton_sums,
    verify,
)
from .signed import (
    ResourceLimitError,
    SignedIdentity,
    SignedTerm,
    WeightedFamily,
    expand_sign_family,
    plain_as_signed,
    product_family,
    product_family_check,
    sign_family_check,
    sign_family_sums,
    signed_to_plain,
)
from .families import (
    alternating_identity,
    frechet,
    k_subset_identity,
    parallelepiped_identity,
    parallelepiped_weights,
    parallelogram,
    product_family_identity,
)
from .evaluate import (
    Counterexample,
    DegreeProbeReport,
    NormSpec,
    VectorAssignment,
    degree_probe,
    eval_exact,
    eval_float,
    find_counterexample,
    finite_difference,
    magnitude,
    parse_norm,
)
from .dsl import ParseError, parse, serialize

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "Counterexample",
    "DegreeProbeReport",
    "IdentityError",
    "InternalError",
    "MAX_INDICES",
    "NormSpec",
    "ParseError",
    "PlainIdentity",
    "Rational",
    "ReducedForm",
    "ResourceLimitError",
    "SignedIdentity",
    "SignedTerm",
    "VectorAssignment",
    "Verdict",
    "WeightedFamily",
    "Witness",
    "alternating_identity",
    "binomial",
    "card",
    "degree_probe",
    "eval_exact",
    "eval_float",
    "expand_sign_family",
    "expand_to_pairs",
    "find_counterexample",
    "finite_difference",
    "frechet",
    "full_mask",
    "indices_of",
    "k_subset_identity",
    "magnitude",
    "make_witness",
    "mask_of",
    "parallelepiped_identity",
    "parallelepiped_weights",
    "parallelogram",
    "parse",
    "parse_norm",
    "plain_as_signed",
    "product_family",
    "product_family_check",
    "product_family_identity",
    "serialize",
    "sign_family_check",
    "sign_family_sums",
    "signed_to_plain",
    "singleton_sums",
    "subsets_of",
    "verify",
]

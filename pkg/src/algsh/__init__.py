"""Finite algebras, subshifts, and cellwise algebraic structure on subshifts."""

from .algebra import (Congruence, FiniteAlgebra, Signature, check_identities, congruences,
                      direct_decomposition, quotient, shallowness)
from .errors import InternalConsistencyError, PreconditionError
from .evp import EVP, EventuallyPeriodicPoint
from .subshift import BlockMap, Subshift, contains, equal, image

__all__ = [
    "BlockMap", "Congruence", "EVP", "EventuallyPeriodicPoint", "FiniteAlgebra",
    "InternalConsistencyError", "PreconditionError", "Signature", "Subshift",
    "check_identities", "congruences", "contains", "direct_decomposition", "equal",
    "image", "quotient", "shallowness",
]

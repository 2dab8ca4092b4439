"""Exception types raised by the library.

Every error carries a short machine-readable ``code`` that the command line
front end prints on domain failures.
"""


class K3InvError(Exception):
    code = "E_DOMAIN"


class DegenerateLattice(K3InvError, ValueError):
    code = "E_DEGENERATE"


class GroupTooLarge(K3InvError):
    code = "E_GROUP_TOO_LARGE"


class UnknownName(K3InvError, KeyError):
    code = "E_UNKNOWN_NAME"

    def __str__(self):
        return Exception.__str__(self)


class InvalidLatticeFile(K3InvError, ValueError):
    code = "E_INVALID_FILE"


class DimensionMismatch(K3InvError, ValueError):
    code = "E_DIMENSION"


class IndexOutOfRange(K3InvError, ValueError):
    code = "E_INDEX"


class InvalidVariant(K3InvError, ValueError):
    code = "E_VARIANT"


class NotInvolution(K3InvError, ValueError):
    code = "E_NOT_INVOLUTION"


class NotIsometry(K3InvError, ValueError):
    code = "E_NOT_ISOMETRY"


class NotHyperbolic(K3InvError, ValueError):
    code = "E_NOT_HYPERBOLIC"


class NotTwoElementary(K3InvError, ValueError):
    code = "E_NOT_TWO_ELEMENTARY"


class ParityError(K3InvError, ValueError):
    code = "E_PARITY"


class NotNegativeDefinite(K3InvError, ValueError):
    code = "E_NOT_NEGATIVE_DEFINITE"


class ResourceLimit(K3InvError):
    code = "E_RESOURCE"


class DegenerateFunctional(K3InvError):
    code = "E_DEGENERATE_FUNCTIONAL"


class NotSimplyLaced(K3InvError, ValueError):
    code = "E_NOT_SIMPLY_LACED"


class NotADE(K3InvError, ValueError):
    code = "E_NOT_ADE"


class NotSignedPermutation(K3InvError, ValueError):
    code = "E_NOT_SIGNED_PERMUTATION"


class TypeMismatch(K3InvError, ValueError):
    code = "E_TYPE_MISMATCH"


class OrbitOverlap(K3InvError, ValueError):
    code = "E_ORBIT_OVERLAP"


class NotAdmissible(K3InvError, ValueError):
    code = "E_NOT_ADMISSIBLE"

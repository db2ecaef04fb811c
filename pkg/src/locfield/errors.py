"""Exception taxonomy.

Every certified computation either returns a result whose leading data is
provably correct at the stored precision, or raises one of these.  Silent
truncation is never allowed to masquerade as an answer.
"""


class LocfieldError(Exception):
    """Base class for all library errors."""


class InsufficientPrecision(LocfieldError):
    """A leading coefficient / valuation / rank decision could not be certified."""


class DivisionByZero(LocfieldError):
    """Division by an exact zero."""


class Inseparable(LocfieldError):
    """Operation requires a separable polynomial or extension."""


class InseparableRootSearch(LocfieldError):
    """Hensel lifting stalled on a vanishing derivative."""


class NotIrreducible(LocfieldError):
    """A polynomial required to be irreducible factored."""


class FactorizationIncomplete(LocfieldError):
    """The simplified OM recursion could not certify a factor at this precision."""


class NotSublattice(LocfieldError):
    """Index requested for a pair without the required inclusion."""


class UnstableKernel(LocfieldError):
    """Elementary divisors of a linear map are not determined at this precision."""


class CapExceeded(LocfieldError):
    """A bounded scan (k0, conductor, ...) ran past its configured window."""


class BudgetExceeded(LocfieldError):
    """An enumeration would exceed the configured size budget."""


class InconsistentMinimality(LocfieldError):
    """The two independent minimality tests disagree (library bug or precision fault)."""


class RelationViolated(LocfieldError):
    """An exact identity that must hold by theory failed (library bug signal)."""


class NormalizationFailed(LocfieldError):
    """A corestriction could not be normalized to unit image valuation."""


class NonConvergence(LocfieldError):
    """A successive-approximation loop failed to contract."""


class InputError(LocfieldError):
    """Malformed user input (parser, CLI)."""

"""Exception hierarchy shared across the package.

Every failure mode that callers are expected to handle gets its own class;
batch drivers catch ShadowlinesError and convert it into a per-field skip
record instead of aborting.
"""


class ShadowlinesError(Exception):
    """Base class for all package-specific errors."""


# ---- p-adic arithmetic ----

class BothZero(ShadowlinesError):
    """Both projective coordinates are zero; no point of P^1 is defined."""


class PrecisionExhausted(ShadowlinesError):
    """An operation lost every significant digit of its inputs."""


class InsufficientPrecision(ShadowlinesError):
    """A query asked for more digits than the value carries."""


class NotSeparable(ShadowlinesError):
    """Two slopes agree at full working precision."""


# ---- curves and reductions ----

class OffCurve(ShadowlinesError):
    """A point does not satisfy the Weierstrass equation."""


class BadReduction(ShadowlinesError):
    """The prime divides the minimal discriminant."""


class PrimeTooLarge(ShadowlinesError):
    """Point counting was asked for a prime beyond the supported range."""


# ---- local analysis ----

class NotInFormalRange(ShadowlinesError):
    """The point does not reduce to the identity, so it has no formal parameter."""


class InconclusivePrecision(ShadowlinesError):
    """A local decision survived to maximum working precision undecided."""


class SupersingularInput(ShadowlinesError):
    """The unit Frobenius eigenvalue only exists at ordinary primes."""


class PsiBarTrivial(ShadowlinesError):
    """The reduction-kernel pairing map vanishes; no natural line is defined."""


# ---- quadratic fields and heights ----

class NotFundamental(ShadowlinesError):
    """The integer is not a fundamental discriminant."""


class PSplitRequired(ShadowlinesError):
    """The pairing is trivial unless p splits in the quadratic field."""


class HeightUnavailable(ShadowlinesError):
    """No ingested value covers the requested pair and the native path is off."""


class FactorizationTimeout(ShadowlinesError):
    """Denominator-ideal factorization exceeded its wall-clock budget."""


class ParseError(ShadowlinesError):
    """A fixture or ingestion file does not match its documented format."""


class PrecisionMismatch(ShadowlinesError):
    """An ingested value carries fewer digits than the run requires."""


class DuplicateConflict(ShadowlinesError):
    """Two ingested records for the same key disagree."""


# ---- pipeline ----

class FixtureMissing(ShadowlinesError):
    """A required fixture file or record is absent."""


class ConfigInvalid(ShadowlinesError):
    """A run configuration violates its invariants."""

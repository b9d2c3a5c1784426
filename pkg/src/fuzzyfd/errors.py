"""Exception hierarchy shared across the package."""


class FuzzyFDError(Exception):
    """Base class for all errors raised by this package."""


class TableFormatError(FuzzyFDError):
    """A delimited input file could not be parsed into a table."""


class AlignmentError(FuzzyFDError):
    """An alignment spec references missing tables/columns or is malformed."""


class EmbeddingError(FuzzyFDError):
    """An embedding provider failed or was misconfigured."""


class RemoteEmbeddingError(EmbeddingError):
    """A remote embedding call failed.

    ``retriable`` distinguishes transient transport failures (the caller may
    resubmit ``failed_texts``) from fatal configuration problems such as a
    dimension mismatch.
    """

    def __init__(self, message: str, *, retriable: bool = False, failed_texts=None):
        super().__init__(message)
        self.retriable = retriable
        self.failed_texts = list(failed_texts) if failed_texts else []


class MatcherError(FuzzyFDError):
    """Internal consistency failure in the value matcher (indicates a bug)."""


class PermutationCapError(FuzzyFDError):
    """Integration set has more tables than the permutation cap allows."""


class OracleBoundError(FuzzyFDError):
    """The brute-force integration oracle was asked to exceed its size bound."""


class GoldFormatError(FuzzyFDError):
    """A gold-pairs file is malformed."""

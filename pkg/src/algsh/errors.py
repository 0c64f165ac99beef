"""Exception types shared by the analysis modules."""


class PreconditionError(ValueError):
    """Input does not satisfy the hypothesis an analysis needs.

    ``witness`` optionally carries the evidence (a word, a pair of points...).
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class InternalConsistencyError(RuntimeError):
    """Two routes that must agree did not; this indicates a bug."""

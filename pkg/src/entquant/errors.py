"""Exception types shared across the package."""


class NotHermitian(ValueError):
    """Matrix failed a Hermiticity check."""


class NonHermitianObservable(NotHermitian):
    """An observable passed to an expectation routine is not Hermitian."""


class NonUnitary(ValueError):
    """Matrix failed a unitarity check."""


class NotNormalized(ValueError):
    """State vector norm deviates from 1 beyond tolerance."""


class BadTrace(ValueError):
    """Density matrix trace deviates from 1 beyond tolerance."""


class NegativeEigenvalue(ValueError):
    """Density matrix has an eigenvalue below the allowed floor."""


class IdentityIndexNotAllowed(ValueError):
    """A covariance was requested for the identity Pauli index."""


class OutOfRange(ValueError):
    """Scalar argument outside its documented domain."""


class MissingSetting(KeyError):
    """A counts table lacks a setting required by the estimator."""

    def __str__(self) -> str:  # KeyError quotes its payload by default
        return self.args[0] if self.args else ""


class ParseError(ValueError):
    """Counts CSV is malformed; message carries the line number."""


class UnknownLabel(ParseError):
    """Analyzer basis label not in {H, V, D, A, R, L} (or +/- synonyms)."""


class DuplicateSetting(ParseError):
    """The same analyzer setting appears twice in one counts file."""

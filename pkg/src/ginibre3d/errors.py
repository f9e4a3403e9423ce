class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class SelfDualityError(ValueError):
    """Quaternion matrix is not self-dual within tolerance."""


class UnsupportedSizeError(ValueError):
    """Matrix larger than the configured maximum for the Moore expansion."""


class ExactRangeError(ValueError):
    """Degree beyond the range where exact-coefficient evaluation is used."""


class EnvelopeViolation(RuntimeError):
    """A proposed configuration broke the rejection-sampling envelope.

    ``configuration`` holds the offending points serialized as JSON.
    """

    def __init__(self, message, configuration):
        super().__init__(message)
        self.configuration = configuration

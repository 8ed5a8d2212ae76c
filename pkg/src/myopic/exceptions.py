class MyopicError(Exception):
    """Base class for errors raised by this package."""


class DomainError(MyopicError, ValueError):
    """An argument lies outside the domain of the operation."""


class QueryModelViolation(MyopicError):
    """A policy asked a query its query model does not permit."""

    def __init__(self, model, query):
        self.model = model
        self.query = query
        super().__init__(f"{model.name} does not permit {query}")


class InvalidCertificate(MyopicError):
    """An adversarial certificate failed one of its conditions."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message if witness is None else f"{message} (witness: {witness})")


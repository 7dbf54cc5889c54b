"""Service-level exception types."""


class ServiceError(Exception):
    code = "service_error"


class ValidationError(ServiceError):
    code = "validation_error"


class NotFoundError(ServiceError):
    code = "not_found"


class WrongStateError(ServiceError):
    code = "wrong_state"

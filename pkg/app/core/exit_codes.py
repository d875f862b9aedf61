import logging
from dataclasses import dataclass

from pydantic import ValidationError

from core.errors import ApplicationError, CheckFailure, InvalidInputError, NotFoundError, PreconditionViolation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExitStatus:
    """
    PURPOSE: Data structure for command exit configuration
    DESCRIPTION: Simple dataclass that encapsulates the components needed for a consistent
    command outcome: process exit code, user-friendly error message and a unique error code
    that the verification bundle records next to the failing check.
    """
    exit_code: int
    error_message: str
    error_code: str

    def json(self, detail: str | None = None) -> dict[str, str]:
        """
        PURPOSE: Convert exit configuration to JSON-serializable dictionary
        DESCRIPTION: Creates a dictionary containing the error message and error code suitable
        for the JSON summary. Excludes the exit code, which is returned to the shell.
        ARGUMENTS:
            detail: str | None - Message of the concrete exception, appended when given
        RETURNS: dict - Dictionary with 'error_message', 'error_code' and optional 'detail' keys
        """
        body = {"error_message": self.error_message, "error_code": self.error_code}
        if detail is not None:
            body["detail"] = detail
        return body


class ExitStatuses:
    """
    PURPOSE: Centralized collection of predefined command outcomes
    DESCRIPTION: Container class that defines the exit statuses used by every subcommand.
    0 is success, 1 a failed check or hypothesis, 2 a usage or validation error.
    """
    OK = ExitStatus(0, "ok", "core.0000")
    CHECK_FAILED = ExitStatus(1, "Check failed", "core.0001")
    APPLICATION_ERROR = ExitStatus(1, "Computation failed", "core.0002")
    INVALID_INPUT = ExitStatus(2, "Invalid input", "core.0003")
    NOT_FOUND = ExitStatus(2, "Resource not found", "core.0004")
    PRECONDITION = ExitStatus(2, "Precondition violated", "core.0005")
    USAGE = ExitStatus(2, "Invalid configuration", "core.0006")


_REGISTRY: list[tuple[type[Exception], ExitStatus]] = [
    (ValidationError, ExitStatuses.USAGE),
    (InvalidInputError, ExitStatuses.INVALID_INPUT),
    (NotFoundError, ExitStatuses.NOT_FOUND),
    (PreconditionViolation, ExitStatuses.PRECONDITION),
    (CheckFailure, ExitStatuses.CHECK_FAILED),
]


def register_exit_status(exc: type[Exception], status: ExitStatus):
    """
    PURPOSE: Registers an exit status for a specific exception type
    DESCRIPTION: Package-specific errors register themselves here at import time. Later
    registrations take precedence over the generic ones, so a subclass can map to a different
    status than its base.
    ARGUMENTS:
        exc: type[Exception] - The exception class type to map
        status: ExitStatus - The predefined status to use for it
    """
    _REGISTRY.insert(0, (exc, status))


def resolve_exit_status(exc: BaseException) -> ExitStatus:
    """
    PURPOSE: Map a raised exception to its command exit status
    ARGUMENTS:
        exc: BaseException - The caught exception
    RETURNS: ExitStatus - First registered status whose exception type matches; APPLICATION_ERROR
    for any other ApplicationError
    CONTRACTS:
        RAISES:
            - the exception itself when it is not an application or validation error
    """
    for exc_type, status in _REGISTRY:
        if isinstance(exc, exc_type):
            return status
    if isinstance(exc, ApplicationError):
        return ExitStatuses.APPLICATION_ERROR
    raise exc

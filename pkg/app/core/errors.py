from typing import Any, Mapping


class ApplicationError(Exception):
    """
    PURPOSE: Base exception class for all favlab errors
    DESCRIPTION: Root exception type that serves as the parent for all custom
    exceptions, enabling unified exit-code resolution in the command line layer.
    """
    pass


class InvalidInputError(ApplicationError):
    """
    PURPOSE: Exception for malformed user input
    DESCRIPTION: Raised when an argument, a generator spec or an input file violates the
    documented shape of the input. Maps to exit code 2.
    """
    def __init__(self, resource: str = "Input", detail: str = "invalid value"):
        super().__init__(f"{resource} invalid: {detail}")
        self.resource = resource
        self.detail = detail


class NotFoundError(ApplicationError):
    """
    PURPOSE: Exception for resource not found errors
    DESCRIPTION: Raised when requested resources (input files, cubes, roots) cannot be located.
    Provides contextual error messages based on the resource type.
    """
    def __init__(self, resource: str = "Resource"):
        """
        PURPOSE: Initialize not found error with resource context
        ARGUMENTS:
            resource: str - Name of the resource that was not found
        """
        super().__init__(f"{resource} not found")


class PreconditionViolation(ApplicationError):
    """
    PURPOSE: Exception for a violated precondition of a construction
    DESCRIPTION: Raised when the input of an operation lies outside the window the
    construction is defined for, e.g. the measure window of the enlargement.
    ATTRIBUTES:
        check: str - Name of the violated precondition
        detail: str - Human readable description with the offending values
    """
    def __init__(self, check: str, detail: str):
        super().__init__(f"precondition {check} violated: {detail}")
        self.check = check
        self.detail = detail


class CheckFailure(ApplicationError):
    """
    PURPOSE: Exception for a failed hard assertion
    DESCRIPTION: Raised by checkers when an inequality or set relation that must hold exactly
    fails. Always names the check and carries JSON-friendly context so the verification bundle
    can record the witness.
    ATTRIBUTES:
        check: str - Name of the violated check
        detail: str - Human readable description
        context: Mapping[str, Any] - Witness data (root ids, levels, coordinates)
    """
    def __init__(self, check: str, detail: str, context: Mapping[str, Any] | None = None):
        super().__init__(f"check {check} failed: {detail}")
        self.check = check
        self.detail = detail
        self.context = dict(context or {})

from typing import ClassVar, Type

from core import errors


class Model:
    """
    PURPOSE: Base of the domain values that validate themselves
    DESCRIPTION: Every subclass gets its own NotFoundError and InvalidError, subclasses of the
    generic errors, so a malformed input reads as "DirectionSet invalid: ..." and still maps to
    exit code 2.
    """
    NotFoundError: ClassVar[Type[errors.NotFoundError]]
    InvalidError: ClassVar[Type[errors.InvalidInputError]]

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)

        class NotFoundError(errors.NotFoundError):
            def __init__(self, what: str | None = None):
                super().__init__(cls.__name__ if what is None else f"{cls.__name__} {what}")

            __qualname__ = f"{cls.__qualname__}.NotFoundError"

        cls.NotFoundError = NotFoundError

        class InvalidError(errors.InvalidInputError):
            def __init__(self, detail: str):
                super().__init__(cls.__name__, detail)

            __qualname__ = f"{cls.__qualname__}.InvalidError"  # Fix traceback name

        cls.InvalidError = InvalidError

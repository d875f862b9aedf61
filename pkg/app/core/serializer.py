from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
from abc import ABC, abstractmethod
from dataclasses import is_dataclass
from fractions import Fraction
from typing import Any, Iterable, Protocol, Sequence, TypeVar

import numpy as np

from core.types import DTO

Model = TypeVar("Model")
ModelDTO = TypeVar("ModelDTO")
T_DTO = TypeVar("T_DTO", bound=DTO)


class Serializer(Protocol[Model, ModelDTO]):
    """
    PURPOSE: Two-way conversion between a domain value and its artifact form
    DESCRIPTION: The artifact form is a text line, a JSON document or a plain mapping. Readers
    raise the model's InvalidError on malformed input instead of returning partial values.
    """
    def serialize(self, obj: Model) -> ModelDTO:
        pass

    def deserialize(self, obj: ModelDTO) -> Model:
        pass

    @property
    def flat(self) -> Serializer[Sequence[Model], Sequence[ModelDTO]]:
        """Serializer of sequences that applies this one item by item."""
        pass


class SerializerBase(ABC, Serializer[Model, ModelDTO]):
    @abstractmethod
    def serialize(self, obj: Model) -> ModelDTO:
        pass

    @abstractmethod
    def deserialize(self, obj: ModelDTO) -> Model:
        pass

    @property
    def flat(self) -> Serializer[Sequence[Model], Sequence[ModelDTO]]:
        return FlatSerializer(self)


class FlatSerializer(SerializerBase[Sequence[Model], Sequence[ModelDTO]]):
    """Item-wise serializer of sequences, e.g. the trees of a corona or the lines of a lattice file."""
    def __init__(self, serializer: Serializer[Model, ModelDTO]):
        self.serializer = serializer

    def serialize(self, objs: Sequence[Model]) -> Sequence[ModelDTO]:
        return [self.serializer.serialize(obj) for obj in objs]

    def deserialize(self, objs: Sequence[ModelDTO]) -> Sequence[Model]:
        return [self.serializer.deserialize(obj) for obj in objs]


def to_plain(value: Any) -> Any:
    """
    PURPOSE: Flatten a value into JSON-compatible builtins
    DESCRIPTION: Dataclasses become dicts, tuples and numpy arrays become lists, numpy scalars
    become Python scalars, enums their value and Fractions their float value.
    ARGUMENTS:
        value: Any - Value to flatten
    RETURNS: Any - Nested structure of dict, list, str, int, float, bool and None
    """
    if is_dataclass(value) and not isinstance(value, type):
        return {field.name: to_plain(getattr(value, field.name)) for field in dataclasses.fields(value)}
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, Fraction):
        return float(value)
    if isinstance(value, np.ndarray):
        return [to_plain(item) for item in value.tolist()]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, dict):
        return {str(key): to_plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [to_plain(item) for item in items]
    return value


class DataclassSerializer(SerializerBase[Model, T_DTO]):
    """
    PURPOSE: Mapping form of frozen result records
    DESCRIPTION: Serialization flattens with to_plain; deserialization passes the mapping to the
    constructor; sequences come back as lists.
    CONTRACTS:
        RAISES:
            - TypeError - when model is not a dataclass, or a mapping has unknown fields
    """
    def __init__(self, model: type[Model]):
        self.model = model
        if not isinstance(model, type) or not is_dataclass(model):
            raise TypeError(f"{model!r} is not a dataclass")

    def serialize(self, obj: Model) -> DTO:
        return to_plain(obj)

    def deserialize(self, obj: DTO) -> Model:
        return self.model(**obj)


def dumps_json(obj: Any, indent: int | None = None) -> str:
    """
    PURPOSE: Deterministic JSON text of a plain or dataclass value
    DESCRIPTION: Keys are sorted and floats use repr, so identical inputs give identical bytes.
    Non-finite floats are written as the strings "inf", "-inf" and "nan".
    """
    return json.dumps(_finite(to_plain(obj)), sort_keys=True, indent=indent, allow_nan=False)


def _finite(value: Any) -> Any:
    if isinstance(value, float) and not np.isfinite(value):
        return "nan" if np.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, dict):
        return {key: _finite(item) for key, item in value.items()}
    if isinstance(value, list):
        return [_finite(item) for item in value]
    return value


def format_float(value: float) -> str:
    return "%.17g" % value


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]], echo: Sequence[str] = ()) -> str:
    """
    PURPOSE: Render a CSV table with an optional parameter echo header
    DESCRIPTION: Echo lines are written first as "# key=value" comments. Floats are written with
    17 significant digits.
    ARGUMENTS:
        header: Sequence[str] - Column names
        rows: Iterable[Sequence[Any]] - Table rows
        echo: Sequence[str] - Parameter lines to prefix
    RETURNS: str - CSV text with "\n" line endings
    """
    buffer = io.StringIO()
    for line in echo:
        buffer.write(f"# {line}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(cell) if isinstance(cell, (float, np.floating)) else cell for cell in row])
    return buffer.getvalue()

import json
from typing import Sequence

import numpy as np

from core.serializer import SerializerBase
from directions.models import DirectionSet, DyadicInterval


class DirectionSetSerializer(SerializerBase[DirectionSet, str]):
    """
    PURPOSE: Text line codec of direction sets
    DESCRIPTION: Writes "depth=D;hex=<hex>" where the hex string packs the 2^D flags big-endian,
    max(1, 2^D / 4) characters long.
    """
    def serialize(self, obj: DirectionSet) -> str:
        nchars = max(1, obj.size // 4)
        text = np.packbits(obj.bits).tobytes().hex()[:nchars]
        return f"depth={obj.depth};hex={text}"

    def deserialize(self, obj: str) -> DirectionSet:
        try:
            fields = dict(part.split("=", 1) for part in obj.strip().split(";"))
            depth = int(fields["depth"])
            text = fields["hex"]
        except (KeyError, ValueError):
            raise DirectionSet.InvalidError(f"malformed direction set line {obj!r}")
        size = 2 ** depth
        if len(text) != max(1, size // 4):
            raise DirectionSet.InvalidError(f"expected {max(1, size // 4)} hex characters, got {len(text)}")
        padded = text if len(text) % 2 == 0 else text + "0"
        try:
            raw = np.frombuffer(bytes.fromhex(padded), dtype=np.uint8)
        except ValueError:
            raise DirectionSet.InvalidError(f"invalid hex digits in {text!r}")
        return DirectionSet(depth, np.unpackbits(raw)[:size].astype(bool))


class DyadicGapsSerializer(SerializerBase[Sequence[DyadicInterval], str]):
    """JSON array of {depth, index} objects."""
    def serialize(self, obj: Sequence[DyadicInterval]) -> str:
        return json.dumps([interval.json() for interval in obj], sort_keys=True)

    def deserialize(self, obj: str) -> Sequence[DyadicInterval]:
        try:
            return [DyadicInterval(int(item["depth"]), int(item["index"])) for item in json.loads(obj)]
        except (KeyError, TypeError, ValueError):
            raise DyadicInterval.InvalidError("malformed gap list")

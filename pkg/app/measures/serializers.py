import csv
import io
import json

import numpy as np

from core.serializer import SerializerBase, csv_text, dumps_json
from measures.models import Box, DiscreteMeasure, PlanarSet, PrimitiveKind, Segment


class PlanarSetSerializer(SerializerBase[PlanarSet, str]):
    """
    PURPOSE: JSON codec of planar sets
    DESCRIPTION: {"primitives": [{"kind": "segment", "a": [x, y], "b": [x, y], "mass": m} |
    {"kind": "box", "center": [x, y], "side": s, "mass": m}]} with sorted keys.
    """
    def serialize(self, obj: PlanarSet) -> str:
        primitives = []
        for primitive in obj.primitives:
            if isinstance(primitive, Segment):
                primitives.append({"kind": PrimitiveKind.SEGMENT.value, "a": list(primitive.a),
                                   "b": list(primitive.b), "mass": primitive.mass})
            else:
                primitives.append({"kind": PrimitiveKind.BOX.value, "center": list(primitive.center),
                                   "side": primitive.side, "mass": primitive.mass})
        return dumps_json({"primitives": primitives})

    def deserialize(self, obj: str) -> PlanarSet:
        try:
            items = json.loads(obj)["primitives"]
            primitives = []
            for item in items:
                kind = PrimitiveKind(item["kind"])
                if kind is PrimitiveKind.SEGMENT:
                    primitives.append(Segment(a=tuple(item["a"]), b=tuple(item["b"]), mass=float(item["mass"])))
                else:
                    primitives.append(Box(center=tuple(item["center"]), side=float(item["side"]),
                                          mass=float(item["mass"])))
        except (KeyError, TypeError, ValueError) as e:
            raise PlanarSet.InvalidError(f"malformed planar set JSON: {e}")
        return PlanarSet(tuple(primitives))


class DiscreteMeasureSerializer(SerializerBase[DiscreteMeasure, str]):
    """
    PURPOSE: CSV codec of sampled measures
    DESCRIPTION: Header x,y,w. Written files start with a "# spacing=h" line; on read every
    "# key=value" comment is skipped and a file without the spacing line gets default_spacing.
    """
    def __init__(self, echo: tuple[str, ...] = (), default_spacing: float | None = None):
        self.echo = echo
        self.default_spacing = default_spacing

    def serialize(self, obj: DiscreteMeasure) -> str:
        rows = ((float(p[0]), float(p[1]), float(w)) for p, w in zip(obj.points, obj.weights))
        return csv_text(["x", "y", "w"], rows, (f"spacing={obj.spacing!r}", *self.echo))

    def deserialize(self, obj: str) -> DiscreteMeasure:
        spacing = self.default_spacing
        body = []
        for line in obj.splitlines():
            if line.startswith("# spacing="):
                spacing = float(line.split("=", 1)[1])
            elif not line.startswith("#"):
                body.append(line)
        try:
            rows = list(csv.DictReader(io.StringIO("\n".join(body))))
            points = np.array([[float(row["x"]), float(row["y"])] for row in rows], dtype=float)
            weights = np.array([float(row["w"]) for row in rows], dtype=float)
        except (KeyError, TypeError, ValueError) as e:
            raise DiscreteMeasure.InvalidError(f"malformed measure CSV: {e}")
        if spacing is None:
            raise DiscreteMeasure.InvalidError("measure CSV lacks the spacing header and no default spacing is set")
        return DiscreteMeasure(points, weights, spacing)

import json

import numpy as np

from core.serializer import SerializerBase, dumps_json
from lattice.models import DyadicCube


class CubeLineSerializer(SerializerBase[DyadicCube, str]):
    """
    PURPOSE: One JSON line per cube: {level, id, center, parent, children, mass}
    DESCRIPTION: Dumps carry no member lists, so a parsed line comes back as a cube with empty
    members and zero side; it is meant for inspection tools, not for rebuilding lattices.
    """
    def serialize(self, obj: DyadicCube) -> str:
        return dumps_json(obj.json())

    def deserialize(self, obj: str) -> DyadicCube:
        try:
            data = json.loads(obj)
            return DyadicCube(level=int(data["level"]), id=int(data["id"]), center=tuple(data["center"]),
                              center_index=-1, members=np.empty(0, dtype=np.intp), parent=data["parent"],
                              children=tuple(data["children"]), side=0.0, tall=0.0, mass=float(data["mass"]))
        except (KeyError, TypeError, ValueError) as e:
            raise DyadicCube.InvalidError(f"malformed cube line: {e}")

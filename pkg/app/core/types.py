from typing import Any, Mapping

import numpy as np
import numpy.typing as npt

DTO = Mapping[str, Any]

Point = tuple[float, float]
FloatArray = npt.NDArray[np.float64]
IndexArray = npt.NDArray[np.intp]
BoolArray = npt.NDArray[np.bool_]

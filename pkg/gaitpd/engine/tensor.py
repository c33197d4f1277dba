"""
Tensor mínimo: datos float64 contiguos más su buffer de gradiente
"""
from typing import Optional, Sequence

import numpy as np

from errors import NonFiniteValue


class Tensor:

    def __init__(self, data, name: Optional[str] = None, requires_grad: bool = True):
        self.data = np.ascontiguousarray(data, dtype=np.float64)
        self.grad = np.zeros_like(self.data) if requires_grad else None
        self.name = name

    @property
    def shape(self):
        return self.data.shape

    @property
    def size(self) -> int:
        return int(self.data.size)

    def zero_grad(self):
        if self.grad is not None:
            self.grad.fill(0.0)

    def __repr__(self):
        return f"Tensor(name={self.name!r}, shape={self.shape})"


def check_finite(array: np.ndarray, where: str):
    """NaN/Inf detiene el cálculo en lugar de corromper el entrenamiento"""
    if not np.isfinite(array).all():
        bad = int((~np.isfinite(array)).sum())
        raise NonFiniteValue(f"{bad} valores no finitos en {where}")


def parameter_count(params: Sequence[Tensor]) -> int:
    return sum(p.size for p in params)

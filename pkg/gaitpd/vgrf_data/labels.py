"""
Etiquetas de detección y de severidad UPDRS
"""
from dataclasses import dataclass
from enum import Enum

from errors import DataError, OutOfRange

UPDRS_MAX = 176

# Límites inferiores de las clases 2..5
SEVERITY_BOUNDS = (5, 15, 25, 35)
NUM_SEVERITY_CLASSES = 5


class Group(Enum):
    Control = 0
    Parkinson = 1

    @classmethod
    def parse(cls, value):
        """Acepta 'Parkinson'/'PD'/1 y 'Control'/'CO'/2 (códigos de gaitpdb)"""
        text = str(value).strip().lower()
        if text.endswith('.0'):
            text = text[:-2]
        if text in ('parkinson', 'pd', '1'):
            return cls.Parkinson
        if text in ('control', 'co', '2'):
            return cls.Control
        raise DataError(f"Grupo desconocido: {value!r}")


@dataclass(frozen=True, order=True)
class SeverityClass:
    level: int

    def __post_init__(self):
        if not 1 <= self.level <= NUM_SEVERITY_CLASSES:
            raise OutOfRange(f"Clase de severidad fuera de rango: {self.level}")


def map_updrs_to_class(updrs_total):
    """
    Segmenta el UPDRS total en 5 niveles:
    <5, [5,15), [15,25), [25,35), >=35
    """
    if updrs_total is None or not 0 <= updrs_total <= UPDRS_MAX:
        raise OutOfRange(f"UPDRS fuera de [0, {UPDRS_MAX}]: {updrs_total}")

    level = 1 + sum(updrs_total >= bound for bound in SEVERITY_BOUNDS)
    return SeverityClass(level)

"""
Canales VGRF: 8 sensores por pie más la fuerza total de cada pie.
"""
from enum import Enum
from typing import Dict, List, Tuple


class SensorChannel(Enum):
    L1 = 'L1'
    L2 = 'L2'
    L3 = 'L3'
    L4 = 'L4'
    L5 = 'L5'
    L6 = 'L6'
    L7 = 'L7'
    L8 = 'L8'
    R1 = 'R1'
    R2 = 'R2'
    R3 = 'R3'
    R4 = 'R4'
    R5 = 'R5'
    R6 = 'R6'
    R7 = 'R7'
    R8 = 'R8'
    LTotal = 'LTotal'
    RTotal = 'RTotal'

    @property
    def is_total(self):
        return self in (SensorChannel.LTotal, SensorChannel.RTotal)

    @property
    def description(self):
        foot = 'izquierdo' if self.value.startswith('L') else 'derecho'
        if self.is_total:
            return f"VGRF total bajo el pie {foot}"
        return f"VGRF del sensor {self.value[1:]} bajo el pie {foot}"

    @property
    def index(self):
        return CANONICAL_ORDER.index(self)


# Orden de columnas de gaitpdb (sin la columna de tiempo)
CANONICAL_ORDER: List[SensorChannel] = list(SensorChannel)
NUM_CHANNELS = len(CANONICAL_ORDER)


def pair(channel):
    """Canal simétrico del otro pie: pair(Li)=Ri, pair(LTotal)=RTotal"""
    value = channel.value
    mirrored = ('R' + value[1:]) if value.startswith('L') else ('L' + value[1:])
    return SensorChannel(mirrored)


# Pares simétricos en el orden de la tabla de ablación
SYMMETRIC_PAIRS: Dict[str, Tuple[SensorChannel, SensorChannel]] = {
    **{f"L{i}R{i}": (SensorChannel(f"L{i}"), SensorChannel(f"R{i}")) for i in range(1, 9)},
    'Total': (SensorChannel.LTotal, SensorChannel.RTotal),
}


def parse_channel_list(text):
    """'all' o lista separada por comas ('L1,R1,LTotal') en orden canónico"""
    text = (text or 'all').strip()
    if text.lower() == 'all':
        return list(CANONICAL_ORDER)
    try:
        chosen = {SensorChannel(name.strip()) for name in text.split(',') if name.strip()}
    except ValueError:
        valid = ', '.join(c.value for c in CANONICAL_ORDER)
        raise ValueError(f"Canal desconocido en '{text}'. Válidos: {valid}")
    return [c for c in CANONICAL_ORDER if c in chosen]

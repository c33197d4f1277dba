"""
Configuración del modelo: capas de cada rama, cabeza y canales activos
"""
import hashlib
import json
from dataclasses import dataclass, field, replace
from typing import Dict, List

from dotenv import dotenv_values

from config import Config
from engine import LayerSpec
from vgrf_data import CANONICAL_ORDER, SYMMETRIC_PAIRS, SensorChannel, parse_channel_list

HEADS = ('detection', 'severity')
BRANCH_OUTPUT_UNITS = 100


def branch_specs(branch_dropout: float = 0.5) -> List[LayerSpec]:
    """1D-Convnet por canal: 4 convoluciones, 2 max-pooling, flatten y FC de 100"""
    return [
        LayerSpec('Conv1D', units=8, kernel_size=3, activation='SeLU'),
        LayerSpec('Conv1D', units=16, kernel_size=3, activation='SeLU'),
        LayerSpec('MaxPool1D', pool_size=2),
        LayerSpec('Conv1D', units=16, kernel_size=3, activation='SeLU'),
        LayerSpec('Conv1D', units=16, kernel_size=3, activation='SeLU'),
        LayerSpec('MaxPool1D', pool_size=2),
        LayerSpec('Flatten'),
        LayerSpec('Dense', units=BRANCH_OUTPUT_UNITS, activation='SeLU', dropout_rate=branch_dropout),
    ]


def head_specs(head: str, head_dropout: float = 0.5) -> List[LayerSpec]:
    """FC 100 -> FC 20 -> salida; severidad solo cambia la última capa"""
    if head == 'detection':
        output = LayerSpec('Dense', units=1, activation='Sigmoid')
    elif head == 'severity':
        output = LayerSpec('Dense', units=5, activation='Softmax')
    else:
        raise ValueError(f"Cabeza desconocida: {head}")
    return [
        LayerSpec('Dense', units=100, activation='SeLU', dropout_rate=head_dropout),
        LayerSpec('Dense', units=20, activation='SeLU', dropout_rate=head_dropout),
        output,
    ]


@dataclass(frozen=True)
class ModelConfig:
    window_len: int = 100
    channels: List[SensorChannel] = field(default_factory=lambda: list(CANONICAL_ORDER))
    head: str = 'detection'
    branch_dropout: float = 0.5
    concat_dropout: float = 0.5
    head_dropout: float = 0.5

    def __post_init__(self):
        if self.head not in HEADS:
            raise ValueError(f"Cabeza desconocida: {self.head}")
        if not self.channels:
            raise ValueError("Se requiere al menos un canal activo")

    @property
    def channel_indices(self) -> List[int]:
        return [CANONICAL_ORDER.index(c) for c in self.channels]

    @property
    def concat_width(self) -> int:
        return BRANCH_OUTPUT_UNITS * len(self.channels)

    @property
    def output_units(self) -> int:
        return 1 if self.head == 'detection' else 5

    def branch_specs(self) -> List[LayerSpec]:
        return branch_specs(self.branch_dropout)

    def head_specs(self) -> List[LayerSpec]:
        return head_specs(self.head, self.head_dropout)

    def with_head(self, head: str) -> 'ModelConfig':
        return replace(self, head=head)

    def without_pair(self, pair_name: str) -> 'ModelConfig':
        """Quita un par simétrico derecho/izquierdo (ablación)"""
        if pair_name not in SYMMETRIC_PAIRS:
            raise KeyError(pair_name)
        removed = set(SYMMETRIC_PAIRS[pair_name])
        return replace(self, channels=[c for c in self.channels if c not in removed])

    def to_dict(self) -> Dict:
        return {
            'window_len': self.window_len,
            'channels': [c.value for c in self.channels],
            'head': self.head,
            'branch_dropout': self.branch_dropout,
            'concat_dropout': self.concat_dropout,
            'head_dropout': self.head_dropout,
        }

    @classmethod
    def from_dict(cls, payload: Dict) -> 'ModelConfig':
        return cls(
            window_len=int(payload['window_len']),
            channels=[SensorChannel(c) for c in payload['channels']],
            head=payload['head'],
            branch_dropout=float(payload['branch_dropout']),
            concat_dropout=float(payload['concat_dropout']),
            head_dropout=float(payload['head_dropout']),
        )

    @classmethod
    def from_file(cls, path: str = None, head: str = None) -> 'ModelConfig':
        """
        Archivo KEY=VALUE: WINDOW_LEN, CHANNELS, HEAD,
        BRANCH_DROPOUT, CONCAT_DROPOUT, HEAD_DROPOUT
        """
        values = dotenv_values(path) if path else {}
        return cls(
            window_len=int(values.get('WINDOW_LEN') or Config.WINDOW_LEN),
            channels=parse_channel_list(values.get('CHANNELS') or 'all'),
            head=head or values.get('HEAD') or 'detection',
            branch_dropout=float(values.get('BRANCH_DROPOUT') or 0.5),
            concat_dropout=float(values.get('CONCAT_DROPOUT') or 0.5),
            head_dropout=float(values.get('HEAD_DROPOUT') or 0.5),
        )

    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()

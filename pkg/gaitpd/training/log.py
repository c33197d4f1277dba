"""
Bitácora de entrenamiento: una fila por época y una por fin de ronda
"""
from dataclasses import asdict, dataclass, field
from typing import List

import pandas as pd


@dataclass
class EpochRecord:
    epoch: int
    round: int
    lr: float
    train_loss: float
    train_seg_acc: float
    val_seg_acc: float
    wallclock: float


@dataclass
class RoundRecord:
    round: int
    lr: float
    end_epoch: int
    restored_epoch: int
    best_val_seg_acc: float


@dataclass
class TrainLog:
    epochs: List[EpochRecord] = field(default_factory=list)
    rounds: List[RoundRecord] = field(default_factory=list)

    def add_epoch(self, record):
        if self.epochs and record.epoch <= self.epochs[-1].epoch:
            raise ValueError(f"Época {record.epoch} no es creciente")
        self.epochs.append(record)

    def to_frame(self):
        columns = [f for f in EpochRecord.__dataclass_fields__]
        return pd.DataFrame([asdict(r) for r in self.epochs], columns=columns)

    def rounds_frame(self):
        columns = [f for f in RoundRecord.__dataclass_fields__]
        return pd.DataFrame([asdict(r) for r in self.rounds], columns=columns)

    def to_csv(self, path):
        """CSV por época, suficiente para graficar la curva de entrenamiento"""
        self.to_frame().to_csv(path, index=False)
        return path

    @property
    def best_epoch(self):
        best = max(self.epochs, key=lambda r: (r.val_seg_acc, -r.epoch))
        return best.epoch

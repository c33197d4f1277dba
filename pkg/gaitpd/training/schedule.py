"""
Parada temprana con reducción de learning rate por rondas.

Cada ronda termina cuando la exactitud de validación no mejora durante
`patience` épocas; se vuelve a los mejores pesos, el lr se divide entre 2
y se continúa. Tras `lr_halvings` reducciones el entrenamiento termina.
"""
from dataclasses import dataclass
from typing import Optional

from config import Config

IMPROVED = 'improved'
CONTINUE = 'continue'
ROUND_END = 'round_end'
FINISHED = 'finished'


@dataclass
class TrainConfig:
    batch_size: int = 800
    initial_lr: float = 0.001
    patience: int = 10
    lr_halvings: int = 4
    max_epochs_per_round: int = 500
    seed: int = 42

    def __post_init__(self):
        if self.batch_size < 1 or self.initial_lr <= 0 or self.patience < 1 or self.max_epochs_per_round < 1:
            raise ValueError(f"Hiperparámetros inválidos: {self}")
        if self.lr_halvings < 0:
            raise ValueError(f"lr_halvings debe ser >= 0, recibido {self.lr_halvings}")

    @classmethod
    def from_config(cls, config=Config, **overrides):
        values = {
            'batch_size': config.BATCH_SIZE,
            'initial_lr': config.LEARNING_RATE,
            'patience': config.PATIENCE,
            'lr_halvings': config.LR_HALVINGS,
            'max_epochs_per_round': config.MAX_EPOCHS_PER_ROUND,
            'seed': config.SEED,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def lr_schedule(self):
        """lr de cada ronda: initial_lr / 2^r, r = 0..lr_halvings"""
        return [self.initial_lr / 2 ** r for r in range(self.lr_halvings + 1)]


class RoundScheduler:
    """Máquina de estados de la parada temprana; 'mejora' es estrictamente mayor"""

    def __init__(self, cfg):
        self.cfg = cfg
        self.round = 0
        self.lr = cfg.initial_lr
        self.best_acc = float('-inf')
        self.best_epoch: Optional[int] = None
        self.epochs_since_best = 0
        self.epochs_in_round = 0
        self.finished = False

    def update(self, epoch, val_acc):
        if self.finished:
            raise RuntimeError("El entrenamiento ya terminó")
        self.epochs_in_round += 1

        decision = CONTINUE
        if val_acc > self.best_acc:
            self.best_acc = val_acc
            self.best_epoch = epoch
            self.epochs_since_best = 0
            decision = IMPROVED
        else:
            self.epochs_since_best += 1

        if self.epochs_since_best >= self.cfg.patience or self.epochs_in_round >= self.cfg.max_epochs_per_round:
            if self.round >= self.cfg.lr_halvings:
                self.finished = True
                return FINISHED
            self.round += 1
            self.lr = self.cfg.initial_lr / 2 ** self.round
            self.epochs_since_best = 0
            self.epochs_in_round = 0
            return ROUND_END

        return decision

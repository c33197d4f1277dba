"""
Nadam: Adam con momento de Nesterov y calendario de momento (Dozat)
"""
import copy
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from errors import ShapeMismatch
from .tensor import Tensor


@dataclass
class OptimizerState:
    learning_rate: float
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    schedule_decay: float = 0.004
    step_count: int = 0
    m_schedule: float = 1.0
    first_moments: List[np.ndarray] = field(default_factory=list)
    second_moments: List[np.ndarray] = field(default_factory=list)

    @classmethod
    def fresh(cls, params: Sequence[np.ndarray], learning_rate: float, **kwargs) -> 'OptimizerState':
        return cls(learning_rate=learning_rate,
                   first_moments=[np.zeros_like(p) for p in params],
                   second_moments=[np.zeros_like(p) for p in params],
                   **kwargs)

    def snapshot(self) -> 'OptimizerState':
        return copy.deepcopy(self)


def momentum_cache(state: OptimizerState, t: int) -> float:
    return state.beta1 * (1.0 - 0.5 * (0.96 ** (t * state.schedule_decay)))


def nadam_step(params: Sequence[np.ndarray], grads: Sequence[np.ndarray], state: OptimizerState):
    """
    Actualiza params en sitio y avanza el estado un paso

    Returns:
        (params, state)
    """
    if len(params) != len(grads) or len(params) != len(state.first_moments):
        raise ShapeMismatch("nadam: número de parámetros, gradientes y momentos no coincide")

    t = state.step_count + 1
    mu_t = momentum_cache(state, t)
    mu_next = momentum_cache(state, t + 1)
    m_schedule_new = state.m_schedule * mu_t
    m_schedule_next = m_schedule_new * mu_next
    lr = state.learning_rate

    for p, g, m, v in zip(params, grads, state.first_moments, state.second_moments):
        if p.shape != g.shape or p.shape != m.shape:
            raise ShapeMismatch(f"nadam: parámetro {p.shape}, gradiente {g.shape}")
        g_prime = g / (1.0 - m_schedule_new)
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        m_prime = m / (1.0 - m_schedule_next)
        v *= state.beta2
        v += (1.0 - state.beta2) * np.square(g)
        v_prime = v / (1.0 - state.beta2 ** t)
        m_bar = (1.0 - mu_t) * g_prime + mu_next * m_prime
        p -= lr * m_bar / (np.sqrt(v_prime) + state.epsilon)

    state.m_schedule = m_schedule_new
    state.step_count = t
    return params, state


class Nadam:
    """Envoltura sobre una lista de Tensor con gradientes acumulados"""

    def __init__(self, parameters: Sequence[Tensor], learning_rate: float, **kwargs):
        self.parameters = list(parameters)
        self.state = OptimizerState.fresh([p.data for p in self.parameters], learning_rate, **kwargs)

    @property
    def learning_rate(self) -> float:
        return self.state.learning_rate

    @learning_rate.setter
    def learning_rate(self, value: float):
        self.state.learning_rate = value

    def zero_grad(self):
        for p in self.parameters:
            p.zero_grad()

    def step(self):
        nadam_step([p.data for p in self.parameters], [p.grad for p in self.parameters], self.state)

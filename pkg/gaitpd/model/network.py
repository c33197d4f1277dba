"""
Red de ramas paralelas: una 1D-Convnet independiente por señal VGRF,
concatenación y cabeza totalmente conectada
"""
import logging
from typing import Dict, List

import numpy as np

from engine import Concatenate, Dropout, Tensor, build_layers, check_finite, parameter_count
from errors import ShapeMismatch
from .config import ModelConfig

logger = logging.getLogger(__name__)

DETECTION_THRESHOLD = 0.5


class GaitNetwork:
    """
    Ramas sin pesos compartidos; cada una recibe un canal [B, L, 1].
    Los parámetros (NetworkParams) son los Tensor de ramas y cabeza en orden fijo.
    """

    def __init__(self, config: ModelConfig, rng: np.random.Generator):
        self.config = config
        self.branches = []
        branch_shape = None
        for channel in config.channels:
            layers, branch_shape = build_layers(config.branch_specs(), (config.window_len, 1), rng,
                                                prefix=f"{channel.value}.")
            self.branches.append(layers)

        self.concatenate = Concatenate()
        self.concat_dropout = Dropout(config.concat_dropout)
        self.head, output_shape = build_layers(config.head_specs(), (config.concat_width,), rng, prefix='head.')
        self.output_shape = output_shape
        self.branch_output_shape = branch_shape
        self.last_branch_outputs: List[np.ndarray] = []

    # ========================================================================
    # PARÁMETROS
    # ========================================================================

    def parameters(self) -> List[Tensor]:
        params = []
        for layers in self.branches:
            for layer in layers:
                params.extend(layer.params())
        for layer in self.head:
            params.extend(layer.params())
        return params

    def parameter_count(self) -> int:
        return parameter_count(self.parameters())

    def get_params(self) -> List[np.ndarray]:
        return [p.data.copy() for p in self.parameters()]

    def set_params(self, values: List[np.ndarray]):
        params = self.parameters()
        if len(values) != len(params):
            raise ShapeMismatch(f"Se esperaban {len(params)} tensores, recibidos {len(values)}")
        for p, value in zip(params, values):
            if p.shape != value.shape:
                raise ShapeMismatch(f"{p.name}: forma {value.shape}, esperada {p.shape}")
            p.data[...] = value

    def zero_grad(self):
        for p in self.parameters():
            p.zero_grad()

    def manifest(self) -> List[Dict]:
        """Nombre, tipo de capa y forma de cada tensor, en orden de guardado"""
        entries = []
        for layers in self.branches + [self.head]:
            for layer in layers:
                for p in layer.params():
                    entries.append({'name': p.name, 'kind': layer.name, 'shape': list(p.shape)})
        return entries

    def shape_trace(self) -> List[tuple]:
        """Formas (longitud, canales) a la salida de cada capa estructural de una rama"""
        shape = (self.config.window_len, 1)
        trace = [shape]
        for spec in self.config.branch_specs():
            if spec.kind == 'Conv1D':
                shape = (shape[0] - spec.kernel_size + 1, spec.units)
            elif spec.kind == 'MaxPool1D':
                shape = (shape[0] // spec.pool_size, shape[1])
            elif spec.kind == 'Flatten':
                shape = (shape[0] * shape[1],)
            elif spec.kind == 'Dense':
                shape = (spec.units,)
            trace.append(shape)
        return trace

    # ========================================================================
    # FORWARD / BACKWARD
    # ========================================================================

    def forward(self, windows: np.ndarray, mode: str = 'eval', rng=None) -> np.ndarray:
        """
        Args:
            windows: [B, window_len, canales activos]
            mode: 'train' activa dropout (requiere rng)

        Returns:
            detección: [B] probabilidades; severidad: [B, 5] simplex
        """
        if windows.ndim != 3 or windows.shape[1] != self.config.window_len \
                or windows.shape[2] != len(self.config.channels):
            raise ShapeMismatch(
                f"Entrada {windows.shape}, esperada [B, {self.config.window_len}, {len(self.config.channels)}]")
        training = mode == 'train'

        outputs = []
        for index, layers in enumerate(self.branches):
            x = windows[:, :, index:index + 1]
            for layer in layers:
                x = layer.forward(x, training, rng)
            outputs.append(x)
        self.last_branch_outputs = outputs

        x = self.concatenate.forward(outputs, training, rng)
        x = self.concat_dropout.forward(x, training, rng)
        for layer in self.head:
            x = layer.forward(x, training, rng)

        check_finite(x, 'salida de la red')
        return x[:, 0] if self.config.head == 'detection' else x

    def backward(self, dprediction: np.ndarray):
        """Acumula gradientes en los parámetros a partir de dL/dpredicción"""
        grad = dprediction[:, None] if self.config.head == 'detection' else dprediction
        for layer in reversed(self.head):
            grad = layer.backward(grad)
        grad = self.concat_dropout.backward(grad)
        branch_grads = self.concatenate.backward(grad)

        for layers, grad in zip(self.branches, branch_grads):
            for layer in reversed(layers):
                grad = layer.backward(grad)

        for p in self.parameters():
            check_finite(p.grad, f"gradiente de {p.name}")

    def predict(self, windows: np.ndarray, batch_size: int = 800) -> np.ndarray:
        """Predicción en modo evaluación por lotes"""
        chunks = [self.forward(windows[start:start + batch_size], mode='eval')
                  for start in range(0, len(windows), batch_size)]
        if not chunks:
            return np.zeros((0,) if self.config.head == 'detection' else (0, 5))
        return np.concatenate(chunks)


def build_network(config: ModelConfig, seed) -> GaitNetwork:
    """Inicialización LeCun normal determinista a partir de la semilla"""
    network = GaitNetwork(config, np.random.default_rng(seed))
    logger.info(f"Red con {len(config.channels)} ramas, {network.parameter_count()} parámetros")
    return network


def forward(network: GaitNetwork, windows: np.ndarray, mode: str = 'eval', rng=None) -> np.ndarray:
    return network.forward(windows, mode, rng)


def classify_window(prediction, head: str):
    """
    Detección: Parkinson (1) si p > 0.5, estricto.
    Severidad: clase 1..5 por argmax; empates hacia la clase más severa.
    """
    prediction = np.asarray(prediction, dtype=np.float64)
    if head == 'detection':
        return (prediction > DETECTION_THRESHOLD).astype(np.int64)
    reversed_argmax = np.argmax(prediction[..., ::-1], axis=-1)
    return (prediction.shape[-1] - reversed_argmax).astype(np.int64)

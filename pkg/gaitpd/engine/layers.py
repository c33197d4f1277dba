"""
Capas con forward/backward explícitos.
Cada capa guarda en caché lo que su backward necesita.
"""
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from errors import MissingForwardCache, ShapeMismatch
from . import functional as F
from .tensor import Tensor

LAYER_KINDS = ('Conv1D', 'MaxPool1D', 'Dense', 'Flatten', 'Dropout', 'Concatenate', 'Activation')
ACTIVATIONS = ('SeLU', 'Sigmoid', 'Softmax', 'Identity')


@dataclass(frozen=True)
class LayerSpec:
    """Una fila de la tabla de capas; los campos ajenos al tipo quedan en None"""
    kind: str
    units: Optional[int] = None
    kernel_size: Optional[int] = None
    pool_size: Optional[int] = None
    dropout_rate: Optional[float] = None
    activation: Optional[str] = None

    def __post_init__(self):
        if self.kind not in LAYER_KINDS:
            raise ValueError(f"Tipo de capa desconocido: {self.kind}")
        if self.activation is not None and self.activation not in ACTIVATIONS:
            raise ValueError(f"Activación desconocida: {self.activation}")
        if self.dropout_rate is not None and not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError(f"Dropout fuera de [0, 1): {self.dropout_rate}")


def lecun_normal(shape, fan_in, rng):
    """Normal con varianza 1/fan_in, la inicialización con la que SeLU se auto-normaliza"""
    return rng.standard_normal(shape) * np.sqrt(1.0 / fan_in)


class Layer:
    name = 'layer'

    def __init__(self):
        self.cache = None

    def forward(self, x, training=False, rng=None):
        raise NotImplementedError

    def backward(self, dout):
        raise NotImplementedError

    def params(self) -> List[Tensor]:
        return []

    def output_shape(self, input_shape: Tuple[int, ...]) -> Tuple[int, ...]:
        return input_shape

    def _cached(self):
        if self.cache is None:
            raise MissingForwardCache(f"{self.name}: backward sin forward previo")
        return self.cache


class Conv1D(Layer):
    name = 'Conv1D'

    def __init__(self, in_channels, filters, kernel_size, rng, prefix=''):
        super().__init__()
        fan_in = kernel_size * in_channels
        self.weight = Tensor(lecun_normal((kernel_size, in_channels, filters), fan_in, rng), f"{prefix}conv.W")
        self.bias = Tensor(np.zeros(filters), f"{prefix}conv.b")

    def forward(self, x, training=False, rng=None):
        self.cache = x
        return F.conv1d_forward(x, self.weight.data, self.bias.data)

    def backward(self, dout):
        x = self._cached()
        dx, dw, db = F.conv1d_backward(dout, x, self.weight.data)
        self.weight.grad += dw
        self.bias.grad += db
        return dx

    def params(self):
        return [self.weight, self.bias]

    def output_shape(self, input_shape):
        length, _ = input_shape
        k, _, filters = self.weight.shape
        if length < k:
            raise ShapeMismatch(f"Conv1D: longitud {length} < kernel {k}")
        return (length - k + 1, filters)


class MaxPool1D(Layer):
    name = 'MaxPool1D'

    def __init__(self, pool_size):
        super().__init__()
        self.pool_size = pool_size

    def forward(self, x, training=False, rng=None):
        out, argmax = F.maxpool1d(x, self.pool_size)
        self.cache = (x.shape, argmax)
        return out

    def backward(self, dout):
        input_shape, argmax = self._cached()
        return F.maxpool1d_backward(dout, argmax, input_shape, self.pool_size)

    def output_shape(self, input_shape):
        length, channels = input_shape
        return (length // self.pool_size, channels)


class Flatten(Layer):
    name = 'Flatten'

    def forward(self, x, training=False, rng=None):
        self.cache = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, dout):
        return dout.reshape(self._cached())

    def output_shape(self, input_shape):
        return (int(np.prod(input_shape)),)


class Dense(Layer):
    name = 'Dense'

    def __init__(self, in_features, units, rng, prefix=''):
        super().__init__()
        self.weight = Tensor(lecun_normal((in_features, units), in_features, rng), f"{prefix}dense.W")
        self.bias = Tensor(np.zeros(units), f"{prefix}dense.b")

    def forward(self, x, training=False, rng=None):
        self.cache = x
        return F.dense_forward(x, self.weight.data, self.bias.data)

    def backward(self, dout):
        x = self._cached()
        dx, dw, db = F.dense_backward(dout, x, self.weight.data)
        self.weight.grad += dw
        self.bias.grad += db
        return dx

    def params(self):
        return [self.weight, self.bias]

    def output_shape(self, input_shape):
        (features,) = input_shape
        if features != self.weight.shape[0]:
            raise ShapeMismatch(f"Dense: entrada {features}, pesos {self.weight.shape}")
        return (self.weight.shape[1],)


class Activation(Layer):

    def __init__(self, activation):
        super().__init__()
        if activation not in ACTIVATIONS:
            raise ValueError(f"Activación desconocida: {activation}")
        self.activation = activation
        self.name = activation

    def forward(self, x, training=False, rng=None):
        if self.activation == 'SeLU':
            self.cache = x
            return F.selu(x)
        if self.activation == 'Sigmoid':
            self.cache = F.sigmoid(x)
        elif self.activation == 'Softmax':
            self.cache = F.softmax(x)
        else:
            self.cache = x
            return x
        return self.cache

    def backward(self, dout):
        cached = self._cached()
        if self.activation == 'SeLU':
            return dout * F.selu_grad(cached)
        if self.activation == 'Sigmoid':
            return dout * cached * (1.0 - cached)
        if self.activation == 'Softmax':
            return F.softmax_backward(dout, cached)
        return dout


class Dropout(Layer):
    name = 'Dropout'

    def __init__(self, rate):
        super().__init__()
        if not 0.0 <= rate < 1.0:
            raise ValueError(f"Dropout fuera de [0, 1): {rate}")
        self.rate = rate

    def forward(self, x, training=False, rng=None):
        out, self.cache = F.dropout(x, self.rate, 'train' if training else 'eval', rng)
        return out

    def backward(self, dout):
        return dout * self._cached()


class Concatenate(Layer):
    """Concatena salidas de ramas sobre el eje de features"""
    name = 'Concatenate'

    def forward(self, xs, training=False, rng=None):
        self.cache = [x.shape[-1] for x in xs]
        return np.concatenate(xs, axis=-1)

    def backward(self, dout):
        widths = self._cached()
        return np.split(dout, np.cumsum(widths)[:-1], axis=-1)

    def output_shape(self, input_shapes):
        return (sum(shape[-1] for shape in input_shapes),)


def build_layers(specs: List[LayerSpec], input_shape, rng, prefix='') -> Tuple[List[Layer], tuple]:
    """
    Construye capas a partir de especificaciones propagando la forma.
    Conv1D y Dense llevan activación; dropout_rate agrega un Dropout a la salida.

    Returns:
        (capas, forma de salida sin batch)
    """
    layers: List[Layer] = []
    shape = tuple(input_shape)
    for position, spec in enumerate(specs):
        tag = f"{prefix}{position}."
        if spec.kind == 'Conv1D':
            layer = Conv1D(shape[-1], spec.units, spec.kernel_size, rng, tag)
        elif spec.kind == 'Dense':
            layer = Dense(shape[-1], spec.units, rng, tag)
        elif spec.kind == 'MaxPool1D':
            layer = MaxPool1D(spec.pool_size)
        elif spec.kind == 'Flatten':
            layer = Flatten()
        elif spec.kind == 'Dropout':
            layer = Dropout(spec.dropout_rate or 0.0)
        elif spec.kind == 'Activation':
            layer = Activation(spec.activation)
        else:
            raise ValueError(f"{spec.kind} no se construye con build_layers")

        shape = layer.output_shape(shape)
        layers.append(layer)

        if spec.kind in ('Conv1D', 'Dense') and spec.activation:
            layers.append(Activation(spec.activation))
        if spec.kind != 'Dropout' and spec.dropout_rate:
            layers.append(Dropout(spec.dropout_rate))

    return layers, shape

"""
Operaciones diferenciables con gradientes analíticos.
Convención de ejes: [batch, tiempo, canales].
"""
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from errors import ShapeMismatch

SELU_LAMBDA = 1.0507009873554805
SELU_ALPHA = 1.6732632423543772


def _batched(x):
    return (x, False) if x.ndim == 3 else (x[None], True)


# ============================================================================
# CONVOLUCIÓN 1D (valid, stride 1)
# ============================================================================

def conv1d_forward(x, filters, bias):
    """
    out[t, o] = bias[o] + sum_{j<k, c<C_in} x[t+j, c] * filters[j, c, o]

    Args:
        x: [L, C_in] o [B, L, C_in]
        filters: [k, C_in, C_out]
        bias: [C_out]
    """
    x3, squeeze = _batched(np.asarray(x, dtype=np.float64))
    k, c_in, c_out = filters.shape
    if x3.shape[2] != c_in or x3.shape[1] < k or bias.shape != (c_out,):
        raise ShapeMismatch(f"conv1d: entrada {x.shape}, filtros {filters.shape}, bias {bias.shape}")

    patches = sliding_window_view(x3, k, axis=1)  # [B, L-k+1, C_in, k]
    out = np.tensordot(patches, filters, axes=([2, 3], [1, 0])) + bias
    return out[0] if squeeze else out


def conv1d_backward(dout, x, filters):
    """Retorna (dx, dfilters, dbias)"""
    x3, squeeze = _batched(x)
    d3 = dout if dout.ndim == 3 else dout[None]
    k = filters.shape[0]
    steps = d3.shape[1]

    patches = sliding_window_view(x3, k, axis=1)
    dfilters = np.tensordot(patches, d3, axes=([0, 1], [0, 1])).transpose(1, 0, 2)
    dbias = d3.sum(axis=(0, 1))

    dx = np.zeros_like(x3)
    for j in range(k):
        dx[:, j:j + steps, :] += d3 @ filters[j].T
    return (dx[0] if squeeze else dx), dfilters, dbias


# ============================================================================
# MAX-POOLING 1D (ventanas sin traslape; el residuo final se descarta)
# ============================================================================

def maxpool1d(x, pool):
    """Retorna (out, argmax) con out: [B, floor(L/pool), C]"""
    if pool < 1:
        raise ValueError(f"pool debe ser >= 1, recibido {pool}")
    x3, squeeze = _batched(np.asarray(x, dtype=np.float64))
    batch, length, channels = x3.shape
    steps = length // pool
    grouped = x3[:, :steps * pool].reshape(batch, steps, pool, channels)
    argmax = grouped.argmax(axis=2)
    out = np.take_along_axis(grouped, argmax[:, :, None, :], axis=2)[:, :, 0, :]
    return (out[0] if squeeze else out), argmax


def maxpool1d_backward(dout, argmax, input_shape, pool):
    """El gradiente va solo a la posición del máximo de cada ventana"""
    d3 = dout if dout.ndim == 3 else dout[None]
    batch, steps, channels = d3.shape
    grouped = np.zeros((batch, steps, pool, channels))
    np.put_along_axis(grouped, argmax[:, :, None, :], d3[:, :, None, :], axis=2)

    length = input_shape[-2]
    dx = np.zeros((batch, length, channels))
    dx[:, :steps * pool] = grouped.reshape(batch, steps * pool, channels)
    return dx[0] if len(input_shape) == 2 else dx


# ============================================================================
# DENSA
# ============================================================================

def dense_forward(x, weights, bias):
    if x.shape[-1] != weights.shape[0]:
        raise ShapeMismatch(f"dense: entrada {x.shape}, pesos {weights.shape}")
    return x @ weights + bias


def dense_backward(dout, x, weights):
    """Retorna (dx, dweights, dbias)"""
    return dout @ weights.T, x.T @ dout, dout.sum(axis=0)


# ============================================================================
# ACTIVACIONES
# ============================================================================

def selu(x):
    negative = SELU_LAMBDA * SELU_ALPHA * np.expm1(np.minimum(x, 0.0))
    return np.where(x > 0, SELU_LAMBDA * x, negative)


def selu_grad(x):
    return np.where(x > 0, SELU_LAMBDA, SELU_LAMBDA * SELU_ALPHA * np.exp(np.minimum(x, 0.0)))


def sigmoid(x):
    e = np.exp(-np.abs(x))
    return np.where(x >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def softmax(v):
    """Softmax estable (log-sum-exp) sobre el último eje"""
    shifted = v - np.max(v, axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def softmax_backward(dout, y):
    return y * (dout - np.sum(dout * y, axis=-1, keepdims=True))


# ============================================================================
# DROPOUT INVERTIDO
# ============================================================================

def dropout_mask(shape, rate, rng):
    """Máscara escalada 1/(1-rate): en evaluación no hace falta reescalar"""
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"rate debe estar en [0, 1), recibido {rate}")
    keep = rng.random(shape) >= rate
    return keep / (1.0 - rate)


def dropout(x, rate, mode, rng):
    """Devuelve (salida, máscara); fuera de entrenamiento la máscara es 1"""
    if mode != 'train' or rate == 0.0:
        return x, 1.0
    mask = dropout_mask(x.shape, rate, rng)
    return x * mask, mask

"""
Pérdidas de entropía cruzada con gradiente respecto a la probabilidad
"""
import numpy as np

PROB_FLOOR = 1e-12


def binary_cross_entropy(prediction, target):
    """
    BCE = -[t ln p + (1-t) ln(1-p)], promedio sobre el batch

    Returns:
        (pérdida escalar, gradiente con la forma de prediction)
    """
    p = np.clip(prediction, PROB_FLOOR, 1.0 - PROB_FLOOR)
    t = np.asarray(target, dtype=np.float64).reshape(p.shape)
    n = p.shape[0] if p.ndim else 1
    loss = -np.mean(t * np.log(p) + (1.0 - t) * np.log(1.0 - p))
    grad = (p - t) / (p * (1.0 - p)) / n
    return float(loss), grad


def categorical_cross_entropy(prediction, target):
    """
    CCE = -ln p[target]; target son índices de clase 0..K-1
    """
    p = np.clip(prediction, PROB_FLOOR, 1.0 - PROB_FLOOR)
    p2 = p if p.ndim == 2 else p[None]
    t = np.atleast_1d(np.asarray(target, dtype=np.int64))
    rows = np.arange(p2.shape[0])
    n = p2.shape[0]
    loss = -np.mean(np.log(p2[rows, t]))
    grad = np.zeros_like(p2)
    grad[rows, t] = -1.0 / p2[rows, t] / n
    return float(loss), grad.reshape(p.shape)


def loss(prediction, target, head):
    """Entropía binaria para detección, categórica para severidad"""
    if head == 'detection':
        return binary_cross_entropy(prediction, target)
    if head == 'severity':
        return categorical_cross_entropy(prediction, target)
    raise ValueError(f"Cabeza desconocida: {head}")

"""
Matrices de confusión y métricas: Se/Sp/Acc para detección,
Precision/Recall/F1 por clase para severidad.

Las métricas con denominador cero son None (se muestran como n/a).
"""
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from sklearn.metrics import confusion_matrix

from vgrf_data import NUM_SEVERITY_CLASSES

DETECTION_LABELS = (0, 1)
SEVERITY_LABELS = tuple(range(1, NUM_SEVERITY_CLASSES + 1))


def task_labels(task):
    return DETECTION_LABELS if task == 'detection' else SEVERITY_LABELS


def _ratio(numerator, denominator):
    return None if denominator == 0 else float(numerator) / float(denominator)


class ConfusionMatrix:
    """Filas = clase real, columnas = clase predicha, en el orden de `labels`"""

    def __init__(self, counts, labels):
        counts = np.asarray(counts, dtype=np.int64)
        if counts.shape != (len(labels), len(labels)):
            raise ValueError(f"Matriz {counts.shape} no corresponde a {len(labels)} clases")
        if np.any(counts < 0):
            raise ValueError("Conteos negativos en la matriz de confusión")
        self.counts = counts
        self.labels = tuple(labels)

    @classmethod
    def from_predictions(cls, truth, predicted, task):
        labels = task_labels(task)
        return cls(confusion_matrix(np.asarray(truth), np.asarray(predicted), labels=list(labels)), labels)

    @classmethod
    def empty(cls, task):
        labels = task_labels(task)
        return cls(np.zeros((len(labels), len(labels))), labels)

    @classmethod
    def from_detection_counts(cls, tp, tn, fp, fn):
        return cls([[tn, fp], [fn, tp]], DETECTION_LABELS)

    def __add__(self, other):
        if self.labels != other.labels:
            raise ValueError("No se pueden sumar matrices de tareas distintas")
        return ConfusionMatrix(self.counts + other.counts, self.labels)

    def __eq__(self, other):
        return isinstance(other, ConfusionMatrix) and self.labels == other.labels \
            and np.array_equal(self.counts, other.counts)

    def __repr__(self):
        return f"ConfusionMatrix(labels={self.labels}, counts={self.counts.tolist()})"

    @property
    def total(self):
        return int(self.counts.sum())

    @property
    def support(self):
        return self.counts.sum(axis=1)

    # Detección: clase positiva = Parkinson (1)
    @property
    def tp(self):
        return int(self.counts[1, 1])

    @property
    def tn(self):
        return int(self.counts[0, 0])

    @property
    def fp(self):
        return int(self.counts[0, 1])

    @property
    def fn(self):
        return int(self.counts[1, 0])

    def normalized(self):
        """Porcentaje por fila (sobre el número de casos de cada clase real)"""
        support = np.maximum(self.support[:, None], 1)
        return 100.0 * self.counts / support


@dataclass
class DetectionMetrics:
    sensitivity: Optional[float]
    specificity: Optional[float]
    accuracy: Optional[float]


def detection_metrics(cm):
    """Se = TP/(TP+FN), Sp = TN/(TN+FP), Acc = (TP+TN)/total"""
    return DetectionMetrics(
        sensitivity=_ratio(cm.tp, cm.tp + cm.fn),
        specificity=_ratio(cm.tn, cm.tn + cm.fp),
        accuracy=_ratio(cm.tp + cm.tn, cm.total),
    )


@dataclass
class ClassMetrics:
    label: int
    precision: Optional[float]
    recall: Optional[float]
    f1: Optional[float]
    support: int


@dataclass
class MulticlassMetrics:
    per_class: List[ClassMetrics]
    weighted_precision: Optional[float]
    weighted_recall: Optional[float]
    weighted_f1: Optional[float]
    accuracy: Optional[float]
    total: int


def _f1(precision, recall):
    if precision is None or recall is None:
        return None
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def _weighted(values, supports, total):
    # Métricas indefinidas pesan como 0
    if total == 0:
        return None
    return float(sum((v or 0.0) * n for v, n in zip(values, supports)) / total)


def multiclass_metrics(cm):
    """Métricas por clase y promedios ponderados por el soporte n"""
    counts = cm.counts
    predicted_totals = counts.sum(axis=0)
    support = cm.support

    per_class = []
    for i, label in enumerate(cm.labels):
        precision = _ratio(counts[i, i], predicted_totals[i])
        recall = _ratio(counts[i, i], support[i])
        per_class.append(ClassMetrics(label, precision, recall, _f1(precision, recall), int(support[i])))

    total = cm.total
    supports = [c.support for c in per_class]
    return MulticlassMetrics(
        per_class=per_class,
        weighted_precision=_weighted([c.precision for c in per_class], supports, total),
        weighted_recall=_weighted([c.recall for c in per_class], supports, total),
        weighted_f1=_weighted([c.f1 for c in per_class], supports, total),
        accuracy=_ratio(np.trace(counts), total),
        total=total,
    )


def accuracy(cm):
    return _ratio(np.trace(cm.counts), cm.total)


def mean_sd(values):
    """Media y desviación estándar muestral (ddof=1) ignorando valores indefinidos"""
    defined = np.array([v for v in values if v is not None], dtype=np.float64)
    if defined.size == 0:
        return None, None
    sd = float(defined.std(ddof=1)) if defined.size > 1 else 0.0
    return float(defined.mean()), sd

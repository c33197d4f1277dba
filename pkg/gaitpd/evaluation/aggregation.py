"""
Decisión por caminata a partir de las clases de sus ventanas
"""
import numpy as np

from errors import EmptyPredictionSet
from vgrf_data import NUM_SEVERITY_CLASSES


def aggregate_subject(window_labels, task):
    """
    Detección: Parkinson (1) si las ventanas Parkinson son mayoría;
    un empate exacto cuenta como Parkinson.
    Severidad: moda de las clases 1..5, empates hacia la clase más severa.
    """
    labels = np.asarray(window_labels, dtype=np.int64)
    if labels.size == 0:
        raise EmptyPredictionSet("No hay ventanas que agregar")

    if task == 'detection':
        return int(2 * np.count_nonzero(labels == 1) >= labels.size)

    counts = np.bincount(labels, minlength=NUM_SEVERITY_CLASSES + 1)[1:]
    return int(NUM_SEVERITY_CLASSES - np.argmax(counts[::-1]))


def class_fractions(window_labels, task):
    """Fracción de ventanas por clase"""
    labels = np.asarray(window_labels, dtype=np.int64)
    if labels.size == 0:
        raise EmptyPredictionSet("No hay ventanas que agregar")
    classes = (0, 1) if task == 'detection' else tuple(range(1, NUM_SEVERITY_CLASSES + 1))
    return {c: float(np.mean(labels == c)) for c in classes}


def aggregate_walks(segments, task):
    """
    Una fila por caminata a partir de las predicciones por segmento.

    Args:
        segments: columnas walk_id, subject_id, truth, predicted (y opcionalmente fold)

    Returns:
        DataFrame walk_id, subject_id, truth, predicted, windows[, fold]
    """
    if segments.empty:
        raise EmptyPredictionSet("No hay predicciones por segmento")

    keys = ['walk_id', 'subject_id', 'truth'] + (['fold'] if 'fold' in segments.columns else [])
    grouped = segments.groupby(keys, sort=False)['predicted']
    walks = grouped.agg(lambda labels: aggregate_subject(labels.to_numpy(), task)).reset_index()
    walks['windows'] = grouped.size().to_numpy()
    return walks[['walk_id', 'subject_id', 'truth', 'predicted', 'windows'] + keys[3:]]

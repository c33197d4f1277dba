"""
Ablación de sensores: se quita cada par simétrico izquierdo/derecho y se
repite la validación cruzada con los 16 canales restantes
"""
import logging
import os

import pandas as pd

from vgrf_data import NUM_CHANNELS, SYMMETRIC_PAIRS
from .cv import run_cv
from .metrics import accuracy, detection_metrics

logger = logging.getLogger(__name__)


def resolve_pairs(pairs):
    """None o 'all' → los 9 pares; nombres desconocidos → ValueError"""
    if pairs is None or pairs == 'all':
        return list(SYMMETRIC_PAIRS)
    pairs = list(pairs)
    unknown = [p for p in pairs if p not in SYMMETRIC_PAIRS]
    if unknown:
        raise ValueError(f"Pares desconocidos {unknown}; válidos: {', '.join(SYMMETRIC_PAIRS)}")
    return pairs


def run_ablation(dataset, plan, base_config, train_config=None, pairs=None, jobs=1, out_dir=None,
                 stride=None, normalize=None):
    """
    Una validación cruzada completa por par eliminado.

    Returns:
        DataFrame con una fila por par: removed, channels, concat_width,
        specificity, sensitivity, accuracy (nivel segmento) y subject_accuracy
    """
    if len(base_config.channels) != NUM_CHANNELS:
        raise ValueError(f"La ablación parte de los {NUM_CHANNELS} canales, hay {len(base_config.channels)}")

    rows = []
    for name in resolve_pairs(pairs):
        config = base_config.without_pair(name)
        logger.info(f"Ablación sin {name}: {len(config.channels)} canales")
        run_dir = os.path.join(out_dir, f'without_{name}') if out_dir else None
        result = run_cv(dataset, plan, config, train_config, jobs=jobs, out_dir=run_dir,
                        stride=stride, normalize=normalize)

        segment_cm = result.segment.confusion
        row = {
            'removed': name,
            'channels': len(config.channels),
            'concat_width': config.concat_width,
            'specificity': None,
            'sensitivity': None,
            'accuracy': accuracy(segment_cm),
            'subject_accuracy': accuracy(result.subject.confusion),
        }
        if config.head == 'detection':
            metrics = detection_metrics(segment_cm)
            row.update({'specificity': metrics.specificity, 'sensitivity': metrics.sensitivity})
        rows.append(row)

    return pd.DataFrame(rows)

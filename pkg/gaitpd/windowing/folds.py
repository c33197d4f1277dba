"""
Validación cruzada a nivel sujeto, estratificada por grupo
"""
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import pandas as pd
from sklearn.model_selection import StratifiedKFold

from errors import TooFewSubjects, UnknownSubject
from vgrf_data import Group
from .segmentation import WindowSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FoldPlan:
    folds: Tuple[Tuple[str, ...], ...]
    seed: int

    @property
    def k(self):
        return len(self.folds)

    def fold_of(self, subject_id):
        for index, fold in enumerate(self.folds):
            if subject_id in fold:
                return index
        raise KeyError(subject_id)

    def to_frame(self):
        return pd.DataFrame(
            [(index, subject_id) for index, fold in enumerate(self.folds) for subject_id in fold],
            columns=['fold_index', 'subject_id'])

    def save(self, path):
        """Manifiesto de texto: una línea fold_index,subject_id por sujeto"""
        frame = self.to_frame()
        with open(path, 'w') as handle:
            handle.write(f"# seed={self.seed}\n")
            frame.to_csv(handle, index=False)
        return path

    @classmethod
    def load(cls, path):
        with open(path, 'r') as handle:
            header = handle.readline().strip()
            frame = pd.read_csv(handle, dtype={'subject_id': str})
        seed = int(header.split('=', 1)[1]) if header.startswith('# seed=') else 0
        k = int(frame['fold_index'].max()) + 1
        folds = tuple(tuple(frame.loc[frame['fold_index'] == i, 'subject_id']) for i in range(k))
        return cls(folds=folds, seed=seed)


def build_folds(dataset, k, seed):
    """
    Divide cada grupo (Parkinson / Control) en k partes casi iguales

    Args:
        dataset (Dataset): Dataset cargado
        k (int): Número de folds (>= 2)
        seed (int): Semilla del barajado

    Returns:
        FoldPlan: k conjuntos disjuntos de subject_id
    """
    if k < 2:
        raise ValueError(f"Se requieren al menos 2 folds, recibido {k}")

    subjects = sorted(dataset.subjects, key=lambda s: s.subject_id)
    groups = np.array([s.group.value for s in subjects])
    for group in Group:
        count = int((groups == group.value).sum())
        if count < k:
            raise TooFewSubjects(f"Grupo {group.name} tiene {count} sujetos, se requieren >= {k}")

    ids = np.array([s.subject_id for s in subjects], dtype=object)
    splitter = StratifiedKFold(n_splits=k, shuffle=True, random_state=seed)
    folds = tuple(tuple(sorted(ids[val_idx])) for _, val_idx in splitter.split(ids, groups))

    sizes = [len(f) for f in folds]
    logger.info(f"{k} folds construidos (semilla {seed}), sujetos por fold: {sizes}")
    return FoldPlan(folds=folds, seed=seed)


def fold_group_sizes(dataset, plan):
    """Sujetos de cada grupo por fold"""
    group_of = {s.subject_id: s.group.name for s in dataset.subjects}
    sizes = {g.name: [0] * plan.k for g in Group}
    for index, fold in enumerate(plan.folds):
        for subject_id in fold:
            sizes[group_of[subject_id]][index] += 1
    return sizes


def check_fold_plan(dataset, plan):
    """El plan debe cubrir exactamente a los sujetos del dataset"""
    planned = [s for fold in plan.folds for s in fold]
    known = {s.subject_id for s in dataset.subjects}
    unknown = sorted(set(planned) - known)
    missing = sorted(known - set(planned))
    if unknown or missing or len(planned) != len(set(planned)):
        raise UnknownSubject(f"El plan de folds no corresponde al dataset: desconocidos {unknown}, "
                             f"sin fold {missing}")
    return plan


def materialize_fold(dataset, fold_plan, fold_index, window_len, stride, normalize=False, channels=None):
    """
    Ventanas de entrenamiento y validación de un fold.
    La segmentación ocurre dentro del fold: ningún sujeto queda en ambos lados.
    Con `channels` (índices canónicos) solo se apilan esos canales.
    """
    if not 0 <= fold_index < fold_plan.k:
        raise ValueError(f"fold_index {fold_index} fuera de [0, {fold_plan.k})")

    val_subjects = set(fold_plan.folds[fold_index])
    val_walks = [w for w in dataset.walks if w.subject_id in val_subjects]
    train_walks = [w for w in dataset.walks if w.subject_id not in val_subjects]

    train = WindowSet.from_walks(train_walks, window_len, stride, channels)
    val = WindowSet.from_walks(val_walks, window_len, stride, channels)

    if normalize:
        # Estadísticas solo del entrenamiento
        mean, std = train.fit_normalization()
        train, val = train.normalized(mean, std), val.normalized(mean, std)

    logger.info(f"Fold {fold_index}: {len(train)} ventanas de entrenamiento, {len(val)} de validación, "
                f"{train.num_channels} canales")
    return train, val

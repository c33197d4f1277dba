"""
Validación cruzada k-fold: un modelo por fold, predicciones de validación
combinadas en una sola matriz de confusión por nivel (segmento y caminata)
"""
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import reduce
from typing import List

import numpy as np
import pandas as pd

from config import Config
from errors import GaitPDError
from model import ModelConfig, classify_window
from storage import init_run_directory
from training import TrainConfig, TrainLog, train
from windowing import materialize_fold
from .aggregation import aggregate_walks
from .metrics import ConfusionMatrix, accuracy, detection_metrics, mean_sd, multiclass_metrics

logger = logging.getLogger(__name__)

# Dataset del proceso de trabajo, cargado una vez por proceso
_worker_dataset = None


@dataclass
class FoldResult:
    fold_index: int
    segments: pd.DataFrame
    log: TrainLog


@dataclass
class EvalReport:
    """Reporte de un nivel (segment | subject) con la matriz de cada fold"""
    level: str
    task: str
    fold_confusions: List[ConfusionMatrix]

    @property
    def confusion(self):
        return reduce(lambda a, b: a + b, self.fold_confusions)

    @property
    def metrics(self):
        if self.task == 'detection':
            return detection_metrics(self.confusion)
        return multiclass_metrics(self.confusion)

    def fold_table(self):
        rows = []
        for index, cm in enumerate(self.fold_confusions):
            row = {'fold': index, 'n': cm.total, 'accuracy': accuracy(cm)}
            if self.task == 'detection':
                m = detection_metrics(cm)
                row.update({'sensitivity': m.sensitivity, 'specificity': m.specificity})
            rows.append(row)
        return pd.DataFrame(rows)

    def fold_summary(self):
        """Media ± SD entre folds de cada métrica"""
        table = self.fold_table()
        return {column: mean_sd([None if pd.isna(v) else v for v in table[column]])
                for column in table.columns if column not in ('fold', 'n')}


@dataclass
class CVResult:
    task: str
    model_config: ModelConfig
    segment: EvalReport
    subject: EvalReport
    segments: pd.DataFrame
    walks: pd.DataFrame
    logs: List[TrainLog]


def fold_seed(seed, fold_index):
    return int(np.random.SeedSequence([seed, fold_index]).generate_state(1)[0])


def run_fold(dataset, plan, fold_index, model_config, train_config, stride, normalize, out_dir=None):
    """Entrena el fold y predice cada ventana de sus sujetos de validación"""
    task = model_config.head
    try:
        train_set, val_set = materialize_fold(dataset, plan, fold_index, model_config.window_len,
                                              stride, normalize, model_config.channel_indices)
        fold_config = replace(train_config, seed=fold_seed(train_config.seed, fold_index))
        checkpoint_dir = os.path.join(out_dir, 'checkpoints', f'fold{fold_index}') if out_dir else None
        network, log = train(model_config, train_set, val_set, fold_config, checkpoint_dir)

        val = val_set.for_task(task).select_channels(model_config.channel_indices)
        predictions = network.predict(val.values, fold_config.batch_size)
    except GaitPDError as e:
        e.add_note(f"fold {fold_index}")
        logger.error(f"Fold {fold_index} falló: {str(e)}")
        raise

    segments = pd.DataFrame({
        'fold': fold_index,
        'walk_id': val.walk_ids.astype(str),
        'subject_id': val.subject_ids.astype(str),
        'start_index': val.start_indices,
        'truth': val.labels(task),
        'predicted': classify_window(predictions, task),
    })
    if task == 'detection':
        segments['p_parkinson'] = predictions
    else:
        for level in range(predictions.shape[1]):
            segments[f'p_class{level + 1}'] = predictions[:, level]

    if out_dir:
        log.to_csv(os.path.join(out_dir, 'logs', f'fold{fold_index}.csv'))
        log.rounds_frame().to_csv(os.path.join(out_dir, 'logs', f'fold{fold_index}_rounds.csv'), index=False)
    logger.info(f"Fold {fold_index}: {len(segments)} segmentos, "
                f"exactitud por segmento {float(np.mean(segments['truth'] == segments['predicted'])):.4f}")
    return FoldResult(fold_index, segments, log)


def _init_worker(dataset):
    global _worker_dataset
    _worker_dataset = dataset


def _run_fold_in_worker(plan, fold_index, *args):
    return run_fold(_worker_dataset, plan, fold_index, *args)


def build_report(task, model_config, fold_results):
    """Reduce resultados de folds (ordenados por índice) a los reportes combinados"""
    fold_results = sorted(fold_results, key=lambda r: r.fold_index)
    segments = pd.concat([r.segments for r in fold_results], ignore_index=True)
    walks = aggregate_walks(segments, task)

    segment_cms, subject_cms = [], []
    for result in fold_results:
        fold_segments = segments[segments['fold'] == result.fold_index]
        fold_walks = walks[walks['fold'] == result.fold_index]
        segment_cms.append(ConfusionMatrix.from_predictions(fold_segments['truth'], fold_segments['predicted'], task))
        subject_cms.append(ConfusionMatrix.from_predictions(fold_walks['truth'], fold_walks['predicted'], task))

    return CVResult(
        task=task,
        model_config=model_config,
        segment=EvalReport('segment', task, segment_cms),
        subject=EvalReport('subject', task, subject_cms),
        segments=segments,
        walks=walks,
        logs=[r.log for r in fold_results],
    )


def run_cv(dataset, plan, model_config, train_config=None, task=None, jobs=1, out_dir=None,
           stride=None, normalize=None):
    """
    Validación cruzada completa de una tarea.

    Args:
        task: si se indica, reemplaza la cabeza de model_config
        jobs: folds entrenados en paralelo (procesos)
        out_dir: carpeta de corrida para checkpoints y bitácoras por fold
    """
    model_config = model_config.with_head(task) if task else model_config
    train_config = train_config or TrainConfig.from_config()
    stride = stride or Config.WINDOW_STRIDE
    normalize = Config.NORMALIZE if normalize is None else normalize
    if out_dir:
        init_run_directory(out_dir)

    args = (model_config, train_config, stride, normalize, out_dir)
    logger.info(f"Validación cruzada {model_config.head}: {plan.k} folds, "
                f"{len(model_config.channels)} canales, jobs={jobs}")

    if jobs > 1 and plan.k > 1:
        executor = ProcessPoolExecutor(max_workers=min(jobs, plan.k), initializer=_init_worker,
                                       initargs=(dataset,))
        try:
            futures = [executor.submit(_run_fold_in_worker, plan, i, *args) for i in range(plan.k)]
            results = [future.result() for future in futures]
        except Exception:
            executor.shutdown(wait=True, cancel_futures=True)
            raise
        executor.shutdown()
    else:
        results = [run_fold(dataset, plan, i, *args) for i in range(plan.k)]

    result = build_report(model_config.head, model_config, results)
    logger.info(f"CV {model_config.head} terminada: exactitud por segmento "
                f"{accuracy(result.segment.confusion):.4f}, por caminata {accuracy(result.subject.confusion):.4f}")
    return result

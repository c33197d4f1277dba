"""
Entrenamiento de la red multirama con Nadam, parada temprana y
reducción del learning rate por rondas
"""
import logging
import os
import time
from dataclasses import dataclass

import numpy as np

from engine import Nadam, loss
from errors import NonFiniteLoss, NonFiniteValue, SubjectLeakage
from model import build_network, classify_window, save_params
from .log import EpochRecord, RoundRecord, TrainLog
from .schedule import FINISHED, IMPROVED, ROUND_END, RoundScheduler, TrainConfig

logger = logging.getLogger(__name__)


@dataclass
class EpochResult:
    mean_loss: float
    accuracy: float
    steps: int


def spawn_rngs(seed):
    """Semillas independientes para inicialización, barajado y dropout"""
    init_seq, shuffle_seq, dropout_seq = np.random.SeedSequence(seed).spawn(3)
    return (np.random.default_rng(init_seq), np.random.default_rng(shuffle_seq),
            np.random.default_rng(dropout_seq))


def run_epoch(network, optimizer, windows, batch_size, shuffle_rng, dropout_rng):
    """
    Una pasada sobre el entrenamiento: barajado sin reemplazo, último lote
    parcial incluido, un paso de Nadam por lote
    """
    task = network.config.head
    values = windows.values
    targets = windows.targets(task)
    labels = windows.labels(task)
    order = shuffle_rng.permutation(len(windows))

    total_loss, correct, steps = 0.0, 0, 0
    for start in range(0, len(order), batch_size):
        batch = order[start:start + batch_size]
        optimizer.zero_grad()
        try:
            prediction = network.forward(values[batch], mode='train', rng=dropout_rng)
            batch_loss, grad = loss(prediction, targets[batch], task)
            if not np.isfinite(batch_loss):
                raise NonFiniteValue(f"pérdida = {batch_loss}")
            network.backward(grad)
        except NonFiniteValue as e:
            logger.error(f"Valor no finito en el paso {optimizer.state.step_count + 1}: {str(e)}")
            raise NonFiniteLoss(f"Pérdida no finita en el paso {optimizer.state.step_count + 1}: {str(e)}",
                                snapshot=optimizer.state.snapshot()) from e
        optimizer.step()

        total_loss += batch_loss * len(batch)
        correct += int(np.sum(classify_window(prediction, task) == labels[batch]))
        steps += 1

    n = len(order)
    return EpochResult(mean_loss=total_loss / n, accuracy=correct / n, steps=steps)


def evaluate_accuracy(network, windows, batch_size=800):
    """Exactitud por segmento en modo evaluación"""
    task = network.config.head
    predicted = classify_window(network.predict(windows.values, batch_size), task)
    return float(np.mean(predicted == windows.labels(task)))


def check_no_leakage(train_set, val_set):
    shared = set(train_set.subject_ids) & set(val_set.subject_ids)
    if shared:
        raise SubjectLeakage(f"Sujetos en entrenamiento y validación: {sorted(shared)}")


def _checkpoint_extra(train_set, epoch, round_index, val_acc):
    extra = {'epoch': epoch, 'round': round_index, 'val_seg_acc': val_acc}
    if train_set.channel_mean is not None:
        extra['channel_mean'] = [float(v) for v in train_set.channel_mean]
        extra['channel_std'] = [float(v) for v in train_set.channel_std]
    return extra


def train(model_config, train_set, val_set, cfg=None, checkpoint_dir=None):
    """
    Entrena hasta agotar las rondas y devuelve la red con los mejores pesos
    de validación vistos durante todo el entrenamiento.

    Args:
        model_config: arquitectura, cabeza y canales activos
        train_set, val_set: ventanas que contienen al menos los canales del modelo
        cfg: hiperparámetros; por defecto los de Config
        checkpoint_dir: si se indica, guarda best.gpd y round<r>.gpd
    """
    cfg = cfg or TrainConfig.from_config()
    task = model_config.head
    check_no_leakage(train_set, val_set)

    channels = model_config.channel_indices
    train_set = train_set.for_task(task).select_channels(channels)
    val_set = val_set.for_task(task).select_channels(channels)
    if len(train_set) == 0 or len(val_set) == 0:
        raise ValueError(f"Conjunto vacío para {task}: {len(train_set)} entrenamiento, {len(val_set)} validación")

    init_rng, shuffle_rng, dropout_rng = spawn_rngs(cfg.seed)
    network = build_network(model_config, init_rng)
    optimizer = Nadam(network.parameters(), cfg.initial_lr)
    scheduler = RoundScheduler(cfg)
    log = TrainLog()

    best_params = network.get_params()
    best_state = optimizer.state.snapshot()
    if checkpoint_dir:
        os.makedirs(checkpoint_dir, exist_ok=True)

    logger.info(f"Entrenando {task}: {len(train_set)} ventanas, {len(val_set)} de validación, "
                f"lr={cfg.initial_lr}, lote={cfg.batch_size}")
    started = time.perf_counter()
    epoch = 0

    while not scheduler.finished:
        epoch += 1
        round_index, lr = scheduler.round, optimizer.learning_rate
        result = run_epoch(network, optimizer, train_set, cfg.batch_size, shuffle_rng, dropout_rng)
        val_acc = evaluate_accuracy(network, val_set, cfg.batch_size)
        decision = scheduler.update(epoch, val_acc)

        log.add_epoch(EpochRecord(epoch=epoch, round=round_index, lr=lr, train_loss=result.mean_loss,
                                  train_seg_acc=result.accuracy, val_seg_acc=val_acc,
                                  wallclock=time.perf_counter() - started))
        logger.debug(f"Época {epoch} (ronda {round_index}, lr={lr:g}): pérdida={result.mean_loss:.4f}, "
                     f"train={result.accuracy:.4f}, val={val_acc:.4f}")

        if decision == IMPROVED or (decision in (ROUND_END, FINISHED) and scheduler.best_epoch == epoch):
            best_params = network.get_params()
            best_state = optimizer.state.snapshot()
            if checkpoint_dir:
                save_params(network, os.path.join(checkpoint_dir, 'best.gpd'),
                            extra=_checkpoint_extra(train_set, epoch, round_index, val_acc))

        if decision in (ROUND_END, FINISHED):
            network.set_params(best_params)
            optimizer.state = best_state.snapshot()
            optimizer.learning_rate = scheduler.lr
            log.rounds.append(RoundRecord(round=round_index, lr=lr, end_epoch=epoch,
                                          restored_epoch=scheduler.best_epoch,
                                          best_val_seg_acc=scheduler.best_acc))
            logger.info(f"Fin de ronda {round_index} en la época {epoch}: se restauran los pesos de la "
                        f"época {scheduler.best_epoch} (val={scheduler.best_acc:.4f})")
            if checkpoint_dir:
                save_params(network, os.path.join(checkpoint_dir, f'round{round_index}.gpd'),
                            extra=_checkpoint_extra(train_set, scheduler.best_epoch, round_index,
                                                    scheduler.best_acc))

    logger.info(f"Entrenamiento terminado tras {epoch} épocas; mejor val={scheduler.best_acc:.4f} "
                f"en la época {scheduler.best_epoch}")
    return network, log

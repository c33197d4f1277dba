"""
Comandos de la línea de comandos: ingest, cv, ablate y predict
"""
import logging
import os
from dataclasses import asdict, dataclass, field
from typing import Dict, Optional

import click
import numpy as np

from config import Config
from errors import ChecksumMismatch, DataError, NoFullWindows
from evaluation import (ablation_frame, aggregate_subject, class_fractions, cv_frames, render_ablation,
                        render_cv, resolve_pairs, run_ablation, run_cv, write_reports)
from model import ModelConfig, classify_window, load_network, read_checkpoint
from storage import (dataset_checksum, init_run_directory, load_dataset_cache, save_dataset_cache,
                     verify_checksums, write_json)
from training import TrainConfig
from vgrf_data import NUM_CHANNELS, SYMMETRIC_PAIRS, Group, load_dataset, parse_walk_file
from windowing import FoldPlan, WindowSet, build_folds, check_fold_plan, fold_group_sizes, window_starts
from .manifest import RunManifest

logger = logging.getLogger(__name__)

DEFAULT_CACHE = os.path.join(Config.OUTPUT_DIR, 'dataset.pkl.bz2')


def _load_model_config(path, task):
    try:
        return ModelConfig.from_file(path, head=task)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="'--config'")


def _train_config(seed):
    return TrainConfig.from_config(seed=seed)


# ============================================================================
# INGEST
# ============================================================================

@click.command()
@click.option('--data-root', type=click.Path(exists=True, file_okay=False), default=Config.DATA_ROOT,
              show_default=True, help='Carpeta con los archivos de caminata de gaitpdb')
@click.option('--manifest', type=click.Path(exists=True, dir_okay=False), required=True,
              help='Archivo demográfico (subject_id, group, updrs_total)')
@click.option('--exclusions', type=click.Path(exists=True, dir_okay=False), default=Config.EXCLUSIONS_FILE,
              help='Lista de walk_id excluidos, uno por línea')
@click.option('--checksums', type=click.Path(exists=True, dir_okay=False), default=None,
              help='Lista SHA256SUMS para verificar la descarga')
@click.option('--out', 'out_path', type=click.Path(dir_okay=False), default=DEFAULT_CACHE, show_default=True,
              help='Caché del dataset validado')
def ingest(data_root, manifest, exclusions, checksums, out_path):
    """Valida el dataset y escribe su caché"""
    click.echo(f"Fuente de los datos: {Config.SOURCE_URL} (descarga manual)")
    if checksums:
        failed = verify_checksums(data_root, checksums)
        if failed:
            raise DataError(f"Checksum inválido o archivo faltante: {', '.join(failed)}", path=checksums)

    dataset = load_dataset(data_root, manifest, exclusions)
    summary = dataset.summary()

    windows = {group.name: 0 for group in Group}
    for walk in dataset.walks:
        windows[walk.group.name] += len(window_starts(walk.num_timesteps, Config.WINDOW_LEN, Config.WINDOW_STRIDE))

    os.makedirs(os.path.dirname(os.path.abspath(out_path)), exist_ok=True)
    checksum = save_dataset_cache(dataset, out_path)
    summary.update({'windows': windows, 'total_windows': sum(windows.values()),
                    'window_len': Config.WINDOW_LEN, 'stride': Config.WINDOW_STRIDE})
    write_json(summary, out_path + '.summary.json')
    RunManifest(command='ingest', dataset_checksum=checksum, seed=Config.SEED,
                options={'data_root': data_root, 'manifest': manifest, 'exclusions': exclusions}
                ).finish().save(out_path + '.manifest.json')

    subjects, walks = summary['subjects'], summary['walks']
    click.echo(f"{subjects.get('Parkinson', 0)} Parkinson / {subjects.get('Control', 0)} control subjects")
    click.echo(f"{walks.get('Parkinson', 0)} Parkinson / {walks.get('Control', 0)} control walks "
               f"({summary['dual_task_walks']} dual-task, {summary['excluded_walks']} excluidas)")
    click.echo(f"{windows['Parkinson']} Parkinson / {windows['Control']} control windows "
               f"({summary['total_windows']} total)")
    click.echo(f"Caché: {out_path} (sha256 {checksum[:12]})")


# ============================================================================
# CV / ABLATE
# ============================================================================

def _common_run_options(func):
    options = [
        click.option('--cache', type=click.Path(exists=True, dir_okay=False), default=DEFAULT_CACHE,
                     show_default=True, help='Caché escrita por ingest'),
        click.option('--folds', type=click.IntRange(min=2), default=Config.CV_FOLDS, show_default=True),
        click.option('--seed', type=int, default=Config.SEED, show_default=True),
        click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False), default=None,
                     help='Configuración del modelo KEY=VALUE'),
        click.option('--out-dir', type=click.Path(file_okay=False), default=None),
        click.option('--jobs', type=click.IntRange(min=1), default=Config.JOBS, show_default=True,
                     help='Folds en paralelo; por defecto núcleos lógicos (os.cpu_count)'),
        click.option('--normalize/--no-normalize', default=Config.NORMALIZE, show_default=True),
        click.option('--xlsx/--no-xlsx', default=True, show_default=True),
        click.option('--fold-plan', type=click.Path(exists=True, dir_okay=False), default=None,
                     help='fold_plan.csv de otra corrida; reemplaza --folds'),
        click.option('--from-manifest', type=click.Path(exists=True, dir_okay=False), default=None,
                     help='manifest.json de otra corrida: repite semilla, configuración, folds y opciones'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


@dataclass
class RunSettings:
    model_config: ModelConfig
    train_config: TrainConfig
    seed: int
    normalize: bool
    stride: int
    fold_plan: Optional[str] = None
    dataset_checksum: Optional[str] = None
    options: Dict = field(default_factory=dict)


def _load_replay(path, command):
    """Lee el manifiesto de una corrida previa del mismo comando"""
    try:
        manifest = RunManifest.load(path)
        if manifest.command != command or not manifest.model_config or not manifest.train_config:
            raise ValueError(f"se esperaba un manifiesto de '{command}', es de '{manifest.command}'")
        model_config = ModelConfig.from_dict(manifest.model_config)
        train_config = TrainConfig(**manifest.train_config)
    except (TypeError, KeyError, ValueError) as e:
        raise click.BadParameter(str(e), param_hint="'--from-manifest'")

    plan_path = manifest.fold_plan
    if plan_path and not os.path.exists(plan_path):
        # Corrida movida: el plan vive junto al manifiesto
        plan_path = os.path.join(os.path.dirname(os.path.abspath(path)), os.path.basename(plan_path))
    if not plan_path or not os.path.exists(plan_path):
        raise DataError("Plan de folds de la corrida original no encontrado", path=manifest.fold_plan or path)

    logger.info(f"Repitiendo la corrida de {path} (semilla {manifest.seed}, iniciada {manifest.started_at})")
    return RunSettings(model_config=model_config, train_config=train_config, seed=manifest.seed,
                       normalize=manifest.options.get('normalize', Config.NORMALIZE),
                       stride=manifest.options.get('stride', Config.WINDOW_STRIDE),
                       fold_plan=plan_path, dataset_checksum=manifest.dataset_checksum,
                       options=manifest.options)


def _run_settings(command, task, seed, config_path, normalize, fold_plan, from_manifest):
    if from_manifest:
        settings = _load_replay(from_manifest, command)
        if task and task != settings.model_config.head:
            raise click.BadParameter(f"la corrida original usó la tarea {settings.model_config.head}",
                                     param_hint="'--task'")
        settings.fold_plan = fold_plan or settings.fold_plan
        return settings
    return RunSettings(model_config=_load_model_config(config_path, task), train_config=_train_config(seed),
                       seed=seed, normalize=normalize, stride=Config.WINDOW_STRIDE, fold_plan=fold_plan)


def _prepare_run(cache, folds, settings, out_dir):
    dataset = load_dataset_cache(cache)
    checksum = dataset_checksum(dataset)
    if settings.dataset_checksum and checksum != settings.dataset_checksum:
        raise ChecksumMismatch(f"El dataset difiere del de la corrida original "
                               f"({checksum[:12]} != {settings.dataset_checksum[:12]})", path=cache)

    if settings.fold_plan:
        plan = check_fold_plan(dataset, FoldPlan.load(settings.fold_plan))
        logger.info(f"Plan de folds leído de {settings.fold_plan}: {plan.k} folds")
    else:
        plan = build_folds(dataset, folds, settings.seed)
    paths = init_run_directory(out_dir)
    plan_path = plan.save(os.path.join(out_dir, 'fold_plan.csv'))
    sizes = fold_group_sizes(dataset, plan)
    logger.info(f"Folds por grupo: {sizes}")
    return dataset, checksum, plan, paths, plan_path


def _run_manifest(command, settings, checksum, plan_path, options, from_manifest):
    options = dict(options, normalize=settings.normalize, stride=settings.stride)
    if from_manifest:
        options['replayed_from'] = from_manifest
    return RunManifest(command=command, dataset_checksum=checksum, seed=settings.seed,
                       config_hash=settings.model_config.config_hash(),
                       model_config=settings.model_config.to_dict(),
                       train_config=asdict(settings.train_config), fold_plan=plan_path, options=options)


@click.command()
@click.option('--task', type=click.Choice(['detection', 'severity']), default=None,
              help='Por defecto HEAD del archivo de configuración o detection')
@_common_run_options
def cv(task, cache, folds, seed, config_path, out_dir, jobs, normalize, xlsx, fold_plan, from_manifest):
    """Validación cruzada k-fold a nivel sujeto"""
    settings = _run_settings('cv', task, seed, config_path, normalize, fold_plan, from_manifest)
    model_config = settings.model_config
    out_dir = out_dir or os.path.join(Config.OUTPUT_DIR, f'cv_{model_config.head}_seed{settings.seed}')
    dataset, checksum, plan, paths, plan_path = _prepare_run(cache, folds, settings, out_dir)
    manifest = _run_manifest('cv', settings, checksum, plan_path, {'jobs': jobs}, from_manifest)

    result = run_cv(dataset, plan, model_config, settings.train_config, jobs=jobs, out_dir=out_dir,
                    stride=settings.stride, normalize=settings.normalize)
    text = render_cv(result)
    frames = cv_frames(result)
    frames['segments'] = result.segments
    write_reports(frames, text, paths['reports'], xlsx=xlsx)
    manifest.finish().save(os.path.join(out_dir, 'manifest.json'))

    click.echo(text)
    click.echo(f"\nReportes en {paths['reports']}")


@click.command()
@click.option('--pairs', default=None, help=f"'all' (por defecto) o lista separada por comas de: "
                                            f"{', '.join(SYMMETRIC_PAIRS)}")
@_common_run_options
def ablate(pairs, cache, folds, seed, config_path, out_dir, jobs, normalize, xlsx, fold_plan, from_manifest):
    """Quita cada par simétrico de sensores y repite la validación cruzada"""
    settings = _run_settings('ablate', None, seed, config_path, normalize, fold_plan, from_manifest)
    if pairs is None:
        selected = settings.options.get('pairs', 'all')
    elif pairs.strip().lower() == 'all':
        selected = 'all'
    else:
        selected = [p.strip() for p in pairs.split(',') if p.strip()]
    try:
        selected = resolve_pairs(selected)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="'--pairs'")

    model_config = settings.model_config
    if len(model_config.channels) != NUM_CHANNELS:
        raise click.BadParameter(f"La ablación requiere los {NUM_CHANNELS} canales", param_hint="'--config'")
    out_dir = out_dir or os.path.join(Config.OUTPUT_DIR, f'ablation_{model_config.head}_seed{settings.seed}')
    dataset, checksum, plan, paths, plan_path = _prepare_run(cache, folds, settings, out_dir)
    manifest = _run_manifest('ablate', settings, checksum, plan_path, {'pairs': selected, 'jobs': jobs},
                             from_manifest)

    table = run_ablation(dataset, plan, model_config, settings.train_config, pairs=selected, jobs=jobs,
                         out_dir=out_dir, stride=settings.stride, normalize=settings.normalize)
    text = render_ablation(table)
    write_reports({'ablation': table, 'ablation_table': ablation_frame(table)}, text, paths['reports'], xlsx=xlsx)
    manifest.finish().save(os.path.join(out_dir, 'manifest.json'))

    click.echo(text)


# ============================================================================
# PREDICT
# ============================================================================

@click.command()
@click.option('--checkpoint', type=click.Path(exists=True, dir_okay=False), required=True)
@click.option('--walk-file', type=click.Path(exists=True, dir_okay=False), required=True)
@click.option('--stride', type=click.IntRange(min=1), default=Config.WINDOW_STRIDE, show_default=True)
def predict(checkpoint, walk_file, stride):
    """Clasifica una caminata con un checkpoint entrenado"""
    network = load_network(checkpoint)
    header, _ = read_checkpoint(checkpoint)
    config = network.config
    task = config.head

    walk = parse_walk_file(walk_file)
    windows = WindowSet.from_walks([walk], config.window_len, min(stride, config.window_len))
    if len(windows) == 0:
        raise NoFullWindows(f"no full windows: {walk.num_timesteps} muestras, se requieren {config.window_len}",
                            path=walk_file)
    windows = windows.select_channels(config.channel_indices)

    extra = header.get('extra') or {}
    values = windows.values
    if 'channel_mean' in extra:
        values = (values - np.asarray(extra['channel_mean'])) / np.asarray(extra['channel_std'])

    probabilities = network.predict(values)
    labels = classify_window(probabilities, task)
    for start, p, label in zip(windows.start_indices, probabilities, labels):
        if task == 'detection':
            click.echo(f"  ventana {start:>6}: p(Parkinson)={p:.4f} -> {label}")
        else:
            click.echo(f"  ventana {start:>6}: " + ' '.join(f"{v:.3f}" for v in p) + f" -> clase {label}")

    decision = aggregate_subject(labels, task)
    fractions = class_fractions(labels, task)
    click.echo(f"Ventanas: {len(labels)}")
    if task == 'detection':
        name = Group(decision).name
        click.echo(f"{name} ({100 * fractions[decision]:.0f}%)")
    else:
        for level, fraction in fractions.items():
            click.echo(f"  clase {level}: {int(round(fraction * len(labels)))} ventanas ({100 * fraction:.0f}%)")
        click.echo(f"Clase UPDRS {decision} ({100 * fractions[decision]:.0f}%)")

"""
Carga del dataset completo: manifiesto demográfico, exclusiones y caminatas
"""
import glob
import logging
import os
from typing import Dict, List

import pandas as pd

from config import Config
from errors import DataError, EmptyDataset, OutOfRange
from .labels import Group, UPDRS_MAX
from .parser import parse_walk_file, split_walk_name
from .records import Dataset, Subject, SubjectRegistry

logger = logging.getLogger(__name__)

# Encabezados aceptados -> nombre canónico
COLUMN_ALIASES = {
    'subject_id': 'subject_id', 'id': 'subject_id',
    'group': 'group',
    'updrs_total': 'updrs_total', 'updrs': 'updrs_total',
    'study': 'study',
    'alias_of': 'alias_of',
}


def read_demographics(manifest):
    """
    Leer el manifiesto demográfico

    Acepta el formato documentado (subject_id, group, updrs_total) o el
    demographics.txt nativo de gaitpdb (ID, Study, Group, ..., UPDRS).

    Returns:
        SubjectRegistry: Sujetos indexados por id
    """
    try:
        frame = pd.read_csv(manifest, sep=None, engine='python', dtype=str)
    except Exception as e:
        logger.error(f"Error leyendo manifiesto demográfico {manifest}: {str(e)}")
        raise

    frame.columns = [COLUMN_ALIASES.get(str(c).strip().lower(), str(c).strip()) for c in frame.columns]
    missing = {'subject_id', 'group'} - set(frame.columns)
    if missing:
        raise DataError(f"Faltan columnas {sorted(missing)}", path=manifest)

    frame = frame.dropna(subset=['subject_id'])
    subjects: List[Subject] = []
    aliases: Dict[str, str] = {}

    for row in frame.to_dict('records'):
        subject_id = str(row['subject_id']).strip()
        alias_of = row.get('alias_of')
        if isinstance(alias_of, str) and alias_of.strip():
            aliases[subject_id] = alias_of.strip()
            continue

        updrs = row.get('updrs_total')
        updrs = None if pd.isna(updrs) or str(updrs).strip() == '' else int(float(updrs))
        if updrs is not None and not 0 <= updrs <= UPDRS_MAX:
            raise OutOfRange(f"UPDRS fuera de rango para {subject_id}: {updrs}", path=manifest)

        study = row.get('study')
        subjects.append(Subject(
            subject_id=subject_id,
            group=Group.parse(row['group']),
            updrs_total=updrs,
            study=None if pd.isna(study) else str(study).strip(),
        ))

    return SubjectRegistry(subjects, aliases)


def read_exclusions(path):
    """Un walk_id por línea, con razón opcional después de '#'"""
    if not path:
        return {}
    exclusions = {}
    with open(path, 'r') as handle:
        for line in handle:
            walk_id, _, reason = line.partition('#')
            walk_id = walk_id.strip()
            if walk_id:
                exclusions[walk_id] = reason.strip() or 'manifiesto de exclusión'
    return exclusions


def list_walk_files(root):
    """Archivos de caminata de gaitpdb (excluye demographics y formatos auxiliares)"""
    paths = sorted(glob.glob(os.path.join(root, '*.txt')))
    return [p for p in paths if '_' in os.path.basename(p)]


def load_dataset(root, manifest, exclusions=None, min_length=None):
    """
    Cargar y validar el dataset

    Args:
        root (str): Carpeta con los archivos de caminata
        manifest (str): Manifiesto demográfico
        exclusions (str): Manifiesto de exclusión opcional
        min_length (int): Caminatas más cortas se excluyen (default: una ventana)

    Returns:
        Dataset: Caminatas validadas y sus sujetos
    """
    min_length = Config.WINDOW_LEN if min_length is None else min_length
    registry = read_demographics(manifest)
    excluded = read_exclusions(exclusions)

    paths = list_walk_files(root)
    if not paths:
        raise EmptyDataset(f"No hay archivos de caminata en {root}")

    walks, dropped = [], []
    for path in paths:
        walk_id = split_walk_name(path)[0]
        if walk_id in excluded:
            dropped.append((walk_id, excluded[walk_id]))
            logger.info(f"Caminata {walk_id} excluida: {excluded[walk_id]}")
            continue

        walk = parse_walk_file(path, registry)
        if walk.num_timesteps < min_length:
            reason = f"más corta que una ventana ({walk.num_timesteps} < {min_length})"
            dropped.append((walk_id, reason))
            logger.warning(f"Caminata {walk_id} excluida: {reason}")
            continue
        walks.append(walk)

    if not walks:
        raise EmptyDataset(f"Ninguna caminata válida en {root}")

    used = {w.subject_id for w in walks}
    subjects = [s for s in registry.subjects.values() if s.subject_id in used]
    for s in subjects:
        if s.group is Group.Parkinson and s.updrs_total is None:
            logger.warning(f"Sujeto {s.subject_id} sin UPDRS: excluido de severidad")

    dataset = Dataset(walks=walks, subjects=subjects, exclusions=dropped)
    summary = dataset.summary()
    logger.info(f"Dataset cargado: sujetos por grupo {summary['subjects']}, "
                f"caminatas por grupo {summary['walks']}, {len(dropped)} excluidas")
    return dataset

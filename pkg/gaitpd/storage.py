"""
Funciones de persistencia de artefactos: carpetas de corrida, caché del dataset,
CSV, JSON y verificación de checksums.
"""
import bz2
import hashlib
import json
import logging
import os
import pickle

import numpy as np
import pandas as pd

from config import Config

logger = logging.getLogger(__name__)

RUN_SUBDIRS = ('checkpoints', 'logs', 'reports')


def init_run_directory(out_dir):
    """
    Crear la estructura de una carpeta de corrida

    Args:
        out_dir (str): Carpeta raíz de la corrida

    Returns:
        dict: Rutas de cada subcarpeta, más 'root'
    """
    try:
        Config.init_app(out_dir)
        paths = {'root': out_dir}
        for name in RUN_SUBDIRS:
            paths[name] = os.path.join(out_dir, name)
            os.makedirs(paths[name], exist_ok=True)
        return paths

    except OSError as e:
        logger.error(f"Error creando carpeta de corrida {out_dir}: {str(e)}")
        raise


def dataset_checksum(dataset):
    """SHA-256 sobre walk_id y bytes de muestras, en orden canónico"""
    digest = hashlib.sha256()
    for walk in sorted(dataset.walks, key=lambda w: w.walk_id):
        digest.update(walk.walk_id.encode('utf-8'))
        digest.update(np.ascontiguousarray(walk.samples, dtype='<f8').tobytes())
    return digest.hexdigest()


def save_dataset_cache(dataset, path):
    """
    Guardar el dataset validado (pickle comprimido con bz2)

    Returns:
        str: Checksum del dataset guardado
    """
    try:
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with bz2.BZ2File(path, 'wb') as handle:
            pickle.dump(dataset, handle)
        checksum = dataset_checksum(dataset)
        logger.info(f"Caché del dataset guardado en {path} ({checksum[:12]})")
        return checksum

    except OSError as e:
        logger.error(f"Error guardando caché {path}: {str(e)}")
        raise


def load_dataset_cache(path):
    """Cargar un dataset previamente validado por `ingest`"""
    try:
        with bz2.BZ2File(path, 'rb') as handle:
            return pickle.load(handle)

    except OSError as e:
        logger.error(f"Error leyendo caché {path}: {str(e)}")
        raise


def write_json(payload, path):
    """Escribir un diccionario como JSON legible"""
    with open(path, 'w', encoding='utf-8') as handle:
        json.dump(payload, handle, indent=2, sort_keys=True, default=str)
    return path


def read_json(path):
    with open(path, 'r', encoding='utf-8') as handle:
        return json.load(handle)


def file_sha256(path, chunk_size=1 << 20):
    digest = hashlib.sha256()
    with open(path, 'rb') as handle:
        for chunk in iter(lambda: handle.read(chunk_size), b''):
            digest.update(chunk)
    return digest.hexdigest()


def verify_checksums(root, sums_file):
    """
    Verificar archivos descargados contra una lista estilo SHA256SUMS

    Args:
        root (str): Carpeta de los archivos
        sums_file (str): Líneas "<sha256>  <nombre>"

    Returns:
        list: Nombres de archivo cuyo checksum no coincide o que faltan
    """
    sums = pd.read_csv(sums_file, sep=r'\s+', header=None, names=['sha256', 'name'],
                       comment='#', dtype=str)
    failed = []
    for row in sums.itertuples(index=False):
        name = row.name.lstrip('*')
        path = os.path.join(root, name)
        if not os.path.exists(path) or file_sha256(path) != row.sha256.lower():
            failed.append(name)

    if failed:
        logger.warning(f"{len(failed)} archivos no pasan la verificación de checksum")
    else:
        logger.info(f"{len(sums)} archivos verificados")
    return failed

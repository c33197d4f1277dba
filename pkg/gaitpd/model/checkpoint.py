"""
Formato binario de checkpoint

    8 bytes   magic b'GAITPDNN'
    uint16    versión del formato (little-endian)
    uint32    longitud N del encabezado
    N bytes   encabezado JSON utf-8: {"config": ModelConfig, "layers": [{name, kind, shape}, ...]}
    resto     float64 little-endian de cada tensor en el orden de "layers"
"""
import json
import logging
import struct

import numpy as np

from errors import CorruptFile, ManifestMismatch, VersionMismatch
from .config import ModelConfig
from .network import GaitNetwork

logger = logging.getLogger(__name__)

MAGIC = b'GAITPDNN'
FORMAT_VERSION = 1
PREFIX = struct.Struct('<8sHI')
DTYPE = np.dtype('<f8')


def save_params(network: GaitNetwork, path: str, extra: dict = None) -> str:
    """Guarda config, manifiesto de capas y parámetros"""
    header = {'config': network.config.to_dict(), 'layers': network.manifest()}
    if extra:
        header['extra'] = extra
    encoded = json.dumps(header, sort_keys=True).encode('utf-8')

    with open(path, 'wb') as handle:
        handle.write(PREFIX.pack(MAGIC, FORMAT_VERSION, len(encoded)))
        handle.write(encoded)
        for p in network.parameters():
            handle.write(np.ascontiguousarray(p.data, dtype=DTYPE).tobytes())
    return path


def read_checkpoint(path: str):
    """
    Lee y valida la estructura del archivo

    Returns:
        (encabezado dict, lista de arreglos float64)
    """
    with open(path, 'rb') as handle:
        raw = handle.read()

    if len(raw) < PREFIX.size:
        raise CorruptFile(f"{path}: archivo truncado")
    magic, version, header_len = PREFIX.unpack_from(raw)
    if magic != MAGIC:
        raise CorruptFile(f"{path}: no es un checkpoint de gaitpd")
    if version != FORMAT_VERSION:
        raise VersionMismatch(f"{path}: versión {version}, se esperaba {FORMAT_VERSION}")

    start = PREFIX.size + header_len
    if len(raw) < start:
        raise CorruptFile(f"{path}: encabezado truncado")
    try:
        header = json.loads(raw[PREFIX.size:start].decode('utf-8'))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CorruptFile(f"{path}: encabezado ilegible ({e})")

    sizes = [int(np.prod(entry['shape'])) for entry in header['layers']]
    expected = start + sum(sizes) * DTYPE.itemsize
    if len(raw) != expected:
        raise CorruptFile(f"{path}: {len(raw)} bytes, se esperaban {expected}")

    arrays, offset = [], start
    for entry, size in zip(header['layers'], sizes):
        arrays.append(np.frombuffer(raw, dtype=DTYPE, count=size, offset=offset)
                      .reshape(entry['shape']).astype(np.float64))
        offset += size * DTYPE.itemsize
    return header, arrays


def load_params(path: str, network: GaitNetwork) -> GaitNetwork:
    """Carga parámetros validando el manifiesto contra la red activa"""
    header, arrays = read_checkpoint(path)
    if header['config'] != network.config.to_dict() or header['layers'] != network.manifest():
        raise ManifestMismatch(
            f"{path}: el checkpoint ({header['config']['head']}, {len(header['config']['channels'])} canales) "
            f"no coincide con la configuración activa ({network.config.head}, {len(network.config.channels)} canales)")
    network.set_params(arrays)
    return network


def load_network(path: str, expected_head: str = None) -> GaitNetwork:
    """Reconstruye la red desde la config embebida en el checkpoint"""
    header, _ = read_checkpoint(path)
    config = ModelConfig.from_dict(header['config'])
    if expected_head is not None and config.head != expected_head:
        raise ManifestMismatch(f"{path}: checkpoint de {config.head}, se esperaba {expected_head}")
    network = GaitNetwork(config, np.random.default_rng(0))
    return load_params(path, network)

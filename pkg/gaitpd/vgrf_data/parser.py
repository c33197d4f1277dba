"""
Procesador de archivos de caminata de gaitpdb
Columnas separadas por espacios: tiempo, L1..L8, R1..R8, LTotal, RTotal
"""
import logging
import os
from typing import List, Optional

import numpy as np

from config import Config
from errors import MalformedRow, NegativeForce, NonMonotoneTime
from .channels import NUM_CHANNELS
from .records import Walk

logger = logging.getLogger(__name__)

NUM_COLUMNS = NUM_CHANNELS + 1


def split_walk_name(path):
    """'GaPt03_10.txt' -> ('GaPt03_10', 'GaPt03', 'Ga', '10')"""
    walk_id = os.path.splitext(os.path.basename(path))[0]
    prefix, _, trial = walk_id.partition('_')
    study = prefix[:2] if len(prefix) >= 2 else None
    return walk_id, prefix, study, (trial or None)


class WalkFileProcessor:
    """
    Procesa un archivo de caminata.
    Valida estructura, tiempo y fuerzas antes de construir el Walk.
    """

    def __init__(self, filepath, sample_rate_hz=None, tolerance_s=None):
        """Inicializa el procesador con la ruta del archivo"""
        self.filepath = filepath
        self.sample_rate_hz = sample_rate_hz or Config.SAMPLE_RATE_HZ
        self.tolerance_s = Config.TIME_TOLERANCE_S if tolerance_s is None else tolerance_s
        self.rows: List[List[str]] = []
        self.line_numbers: List[int] = []
        self.matrix: Optional[np.ndarray] = None

    def load_file(self):
        """Lee las filas no vacías conservando su número de línea"""
        with open(self.filepath, 'r') as handle:
            for number, line in enumerate(handle, start=1):
                fields = line.split()
                if fields:
                    self.rows.append(fields)
                    self.line_numbers.append(number)

    def validate_structure(self):
        """Cada fila debe tener exactamente 19 columnas numéricas y finitas"""
        for fields, number in zip(self.rows, self.line_numbers):
            if len(fields) != NUM_COLUMNS:
                raise MalformedRow(
                    f"Columnas incorrectas: esperadas {NUM_COLUMNS}, encontradas {len(fields)}",
                    path=self.filepath, line=number)

        try:
            matrix = np.array(self.rows, dtype=np.float64).reshape(-1, NUM_COLUMNS)
        except ValueError:
            # Ubicar la primera fila no numérica para el mensaje
            for fields, number in zip(self.rows, self.line_numbers):
                try:
                    [float(value) for value in fields]
                except ValueError:
                    raise MalformedRow(f"Valor no numérico en {fields!r}", path=self.filepath, line=number)
            raise

        bad = ~np.isfinite(matrix).all(axis=1)
        if bad.any():
            number = self.line_numbers[int(np.argmax(bad))]
            raise MalformedRow("Valor no finito", path=self.filepath, line=number)

        self.matrix = matrix

    def validate_time(self):
        """El tiempo debe avanzar en pasos de 1/fs (tolerancia 1e-6 s)"""
        time = self.matrix[:, 0]
        if len(time) < 2:
            return
        step = 1.0 / self.sample_rate_hz
        deviation = np.abs(np.diff(time) - step)
        bad = deviation > self.tolerance_s
        if bad.any():
            idx = int(np.argmax(bad)) + 1
            raise NonMonotoneTime(
                f"Paso de tiempo {time[idx] - time[idx - 1]:.6f} s, esperado {step:.6f} s",
                path=self.filepath, line=self.line_numbers[idx])

    def validate_forces(self):
        """Los sensores de fuerza reportan valores >= 0"""
        forces = self.matrix[:, 1:]
        negative = (forces < 0).any(axis=1)
        if negative.any():
            idx = int(np.argmax(negative))
            raise NegativeForce(f"Fuerza negativa: {forces[idx].min()}",
                                path=self.filepath, line=self.line_numbers[idx])

    def extract_samples(self):
        """Descarta la columna de tiempo; el resto ya está en orden canónico"""
        samples = np.ascontiguousarray(self.matrix[:, 1:])
        samples.setflags(write=False)
        return samples

    def process_all(self, registry=None):
        """
        Procesa el archivo completo y retorna el Walk.
        Sin registro demográfico el Walk queda sin etiquetas (predicción).
        """
        self.load_file()
        self.validate_structure()
        self.validate_time()
        self.validate_forces()

        walk_id, prefix, study, trial = split_walk_name(self.filepath)
        group, updrs, subject_id = None, None, prefix
        if registry is not None:
            subject = registry.resolve(prefix, path=self.filepath)
            group, updrs, subject_id = subject.group, subject.updrs_total, subject.subject_id

        return Walk(
            walk_id=walk_id,
            subject_id=subject_id,
            group=group,
            updrs_total=updrs,
            samples=self.extract_samples(),
            sample_rate_hz=self.sample_rate_hz,
            study=study,
            trial=trial,
        )


def parse_walk_file(path, registry=None):
    """Parsea un archivo de caminata de gaitpdb"""
    try:
        return WalkFileProcessor(path).process_all(registry)
    except Exception as e:
        logger.error(f"Error procesando caminata {path}: {str(e)}")
        raise


def serialize_walk(walk, path, start_time=0.0):
    """
    Escribe el Walk en el formato canónico de 19 columnas.
    repr() de cada float garantiza que el re-parseo sea idéntico bit a bit.
    """
    step = 1.0 / walk.sample_rate_hz
    with open(path, 'w') as handle:
        for i, row in enumerate(walk.samples):
            time = round(start_time + i * step, 6)
            handle.write('\t'.join([repr(time)] + [repr(float(v)) for v in row]) + '\n')
    return path

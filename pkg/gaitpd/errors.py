"""
Jerarquía de errores del pipeline.
Cada familia lleva el código de salida que usa la CLI.
"""


class GaitPDError(Exception):
    """Error base de gaitpd"""
    exit_code = 1


# ============================================================================
# DATOS (exit 3)
# ============================================================================

class DataError(GaitPDError):
    exit_code = 3

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        location = ''
        if path is not None:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(f"{location}{message}")


class MalformedRow(DataError):
    pass


class NonMonotoneTime(DataError):
    pass


class NegativeForce(DataError):
    pass


class UnknownSubject(DataError):
    pass


class OutOfRange(DataError):
    pass


class EmptyDataset(DataError):
    pass


class TooFewSubjects(DataError):
    pass


class EmptyPredictionSet(DataError):
    pass


class NoFullWindows(DataError):
    pass


class ChecksumMismatch(DataError):
    pass


# ============================================================================
# CHECKPOINTS (exit 3)
# ============================================================================

class CheckpointError(GaitPDError):
    exit_code = 3


class VersionMismatch(CheckpointError):
    pass


class ManifestMismatch(CheckpointError):
    pass


class CorruptFile(CheckpointError):
    pass


# ============================================================================
# MODELO Y ENTRENAMIENTO (exit 4)
# ============================================================================

class ModelError(GaitPDError):
    exit_code = 4


class ShapeMismatch(ModelError):
    pass


class MissingForwardCache(ModelError):
    pass


class TrainingError(GaitPDError):
    exit_code = 4


class NonFiniteValue(TrainingError):
    pass


class NonFiniteLoss(TrainingError):
    """Pérdida NaN/Inf; `snapshot` guarda el contexto del fallo"""

    def __init__(self, message, snapshot=None):
        self.snapshot = snapshot or {}
        super().__init__(message)


class SubjectLeakage(TrainingError):
    pass

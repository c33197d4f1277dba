"""
Segmentación de caminatas en ventanas etiquetadas de longitud fija
"""
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from vgrf_data import NUM_CHANNELS, SeverityClass

logger = logging.getLogger(__name__)

NO_SEVERITY = 0


@dataclass(frozen=True)
class Window:
    walk_id: str
    subject_id: str
    start_index: int
    values: np.ndarray = field(repr=False)
    detection_label: Optional[int]
    severity_label: Optional[SeverityClass]


def window_starts(num_timesteps, window_len, stride):
    """floor((T - L)/stride) + 1 inicios cuando T >= L, si no ninguno"""
    if window_len < 1 or not 1 <= stride <= window_len:
        raise ValueError(f"Parámetros inválidos: window_len={window_len}, stride={stride}")
    if num_timesteps < window_len:
        return np.zeros(0, dtype=np.int64)
    return np.arange(0, num_timesteps - window_len + 1, stride, dtype=np.int64)


def segment_walk(walk, window_len, stride):
    """Ventanas completas de la caminata, ordenadas por start_index"""
    severity = walk.severity
    return [
        Window(
            walk_id=walk.walk_id,
            subject_id=walk.subject_id,
            start_index=int(start),
            values=walk.samples[start:start + window_len],
            detection_label=walk.detection_label,
            severity_label=severity,
        )
        for start in window_starts(walk.num_timesteps, window_len, stride)
    ]


class WindowSet:
    """
    Conjunto de ventanas almacenado como arreglos contiguos.
    values: [N, window_len, canales]; etiquetas y ids alineados por índice.
    channels: índice canónico (0..17) de cada canal presente en values.
    """

    def __init__(self, values, detection_labels, severity_labels, walk_ids, subject_ids,
                 start_indices, window_len, stride, channel_mean=None, channel_std=None, channels=None):
        self.values = np.asarray(values, dtype=np.float64)
        self.detection_labels = np.asarray(detection_labels, dtype=np.int64)
        self.severity_labels = np.asarray(severity_labels, dtype=np.int64)
        self.walk_ids = np.asarray(walk_ids, dtype=object)
        self.subject_ids = np.asarray(subject_ids, dtype=object)
        self.start_indices = np.asarray(start_indices, dtype=np.int64)
        self.window_len = window_len
        self.stride = stride
        self.channel_mean = channel_mean
        self.channel_std = channel_std
        self.channels = list(range(self.values.shape[2])) if channels is None else list(channels)

    @classmethod
    def from_walks(cls, walks, window_len, stride, channels=None):
        """
        Apila las ventanas completas de cada caminata.
        Con `channels` solo se copian esos canales (índices canónicos).
        """
        channels = list(range(NUM_CHANNELS)) if channels is None else list(channels)
        values, det, sev, walk_ids, subject_ids, starts = [], [], [], [], [], []
        for walk in walks:
            idx = window_starts(walk.num_timesteps, window_len, stride)
            if len(idx) == 0:
                logger.warning(f"Caminata {walk.walk_id} sin ventanas completas")
                continue
            severity = walk.severity
            # [n, window_len, canales] sin copiar la caminata completa
            values.append(walk.samples[:, channels][idx[:, None] + np.arange(window_len)[None, :]])
            det.append(np.full(len(idx), -1 if walk.detection_label is None else walk.detection_label))
            sev.append(np.full(len(idx), NO_SEVERITY if severity is None else severity.level))
            walk_ids.extend([walk.walk_id] * len(idx))
            subject_ids.extend([walk.subject_id] * len(idx))
            starts.append(idx)

        if not values:
            return cls(np.zeros((0, window_len, len(channels))), [], [], [], [], [], window_len, stride,
                       channels=channels)
        return cls(np.concatenate(values), np.concatenate(det), np.concatenate(sev),
                   walk_ids, subject_ids, np.concatenate(starts), window_len, stride, channels=channels)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        level = int(self.severity_labels[i])
        detection = int(self.detection_labels[i])
        return Window(
            walk_id=self.walk_ids[i],
            subject_id=self.subject_ids[i],
            start_index=int(self.start_indices[i]),
            values=self.values[i],
            detection_label=None if detection < 0 else detection,
            severity_label=SeverityClass(level) if level != NO_SEVERITY else None,
        )

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @property
    def windows(self):
        return list(self)

    @property
    def num_channels(self):
        return self.values.shape[2]

    def _replace(self, values, mask=None, channel_mean=None, channel_std=None, channels=None):
        def pick(array):
            return array if mask is None else array[mask]
        return WindowSet(values, pick(self.detection_labels), pick(self.severity_labels),
                         pick(self.walk_ids), pick(self.subject_ids), pick(self.start_indices),
                         self.window_len, self.stride, channel_mean, channel_std,
                         self.channels if channels is None else channels)

    def subset(self, mask):
        mask = np.asarray(mask)
        if mask.dtype == bool and mask.all():
            return self
        return self._replace(self.values[mask], mask, self.channel_mean, self.channel_std)

    def for_task(self, task):
        """La tarea de severidad descarta ventanas sin clase UPDRS"""
        if task == 'severity':
            return self.subset(self.severity_labels != NO_SEVERITY)
        return self.subset(self.detection_labels >= 0)

    def labels(self, task):
        """Detección: 0/1; severidad: clase 1..5"""
        if task == 'severity':
            return self.severity_labels
        return self.detection_labels

    def targets(self, task):
        """Objetivos de la pérdida: 0/1 o índice de clase 0..4"""
        if task == 'severity':
            return self.severity_labels - 1
        return self.detection_labels

    def select_channels(self, channel_indices):
        """Canales por índice canónico, en el orden pedido"""
        channel_indices = [int(c) for c in channel_indices]
        if channel_indices == self.channels:
            return self
        missing = [c for c in channel_indices if c not in self.channels]
        if missing:
            raise KeyError(f"Canales {missing} no presentes en el conjunto ({self.channels})")
        positions = [self.channels.index(c) for c in channel_indices]
        mean = None if self.channel_mean is None else self.channel_mean[positions]
        std = None if self.channel_std is None else self.channel_std[positions]
        return self._replace(self.values[:, :, positions], channel_mean=mean, channel_std=std,
                             channels=channel_indices)

    def fit_normalization(self):
        """Media y desviación por canal sobre todas las muestras de las ventanas"""
        flat = self.values.reshape(-1, self.values.shape[2])
        mean = flat.mean(axis=0)
        std = flat.std(axis=0)
        # Canales constantes no se escalan
        std[std == 0] = 1.0
        return mean, std

    def normalized(self, mean, std):
        return self._replace((self.values - mean) / std, channel_mean=mean, channel_std=std)

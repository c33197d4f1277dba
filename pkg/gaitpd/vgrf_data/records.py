"""
Tipos en memoria del dataset: sujetos, caminatas y el dataset validado
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from errors import UnknownSubject
from .channels import NUM_CHANNELS
from .labels import Group, SeverityClass, map_updrs_to_class


@dataclass(frozen=True)
class Subject:
    subject_id: str
    group: Group
    updrs_total: Optional[int] = None
    study: Optional[str] = None

    @property
    def severity(self):
        """Control sin UPDRS -> clase 1; Parkinson sin UPDRS -> sin etiqueta"""
        if self.updrs_total is None:
            return SeverityClass(1) if self.group is Group.Control else None
        return map_updrs_to_class(self.updrs_total)


class SubjectRegistry:
    """Metadatos demográficos indexados por subject_id, con alias opcionales"""

    def __init__(self, subjects, aliases=None):
        self.subjects: Dict[str, Subject] = {s.subject_id: s for s in subjects}
        self.aliases: Dict[str, str] = dict(aliases or {})

    def __contains__(self, subject_id):
        return self.aliases.get(subject_id, subject_id) in self.subjects

    def __len__(self):
        return len(self.subjects)

    def resolve(self, walk_prefix, path=None):
        subject_id = self.aliases.get(walk_prefix, walk_prefix)
        if subject_id not in self.subjects:
            raise UnknownSubject(f"Sujeto {walk_prefix!r} no está en el manifiesto demográfico", path=path)
        return self.subjects[subject_id]


@dataclass(frozen=True)
class Walk:
    walk_id: str
    subject_id: str
    group: Optional[Group]
    updrs_total: Optional[int]
    samples: np.ndarray = field(repr=False)
    sample_rate_hz: int = 100
    study: Optional[str] = None
    trial: Optional[str] = None

    @property
    def num_timesteps(self):
        return self.samples.shape[0]

    @property
    def is_dual_task(self):
        # En gaitpdb las caminatas _10 son de doble tarea
        return self.trial == '10'

    @property
    def detection_label(self):
        return None if self.group is None else self.group.value

    @property
    def severity(self):
        if self.group is None:
            return None
        return Subject(self.subject_id, self.group, self.updrs_total).severity


@dataclass
class Dataset:
    walks: List[Walk]
    subjects: List[Subject]
    exclusions: List[Tuple[str, str]] = field(default_factory=list)

    def __post_init__(self):
        ids = [w.walk_id for w in self.walks]
        if len(ids) != len(set(ids)):
            raise ValueError("walk_id duplicado en el dataset")
        known = {s.subject_id for s in self.subjects}
        missing = {w.subject_id for w in self.walks} - known
        if missing:
            raise UnknownSubject(f"Caminatas sin sujeto registrado: {sorted(missing)}")
        for walk in self.walks:
            if walk.samples.shape[1] != NUM_CHANNELS:
                raise ValueError(f"{walk.walk_id}: se esperaban {NUM_CHANNELS} canales")

    def subject(self, subject_id):
        for s in self.subjects:
            if s.subject_id == subject_id:
                return s
        raise UnknownSubject(f"Sujeto {subject_id!r} no está en el dataset")

    def walks_of(self, subject_ids):
        wanted = set(subject_ids)
        return [w for w in self.walks if w.subject_id in wanted]

    def subjects_frame(self):
        """Un renglón por sujeto con su número de caminatas"""
        counts = pd.Series([w.subject_id for w in self.walks]).value_counts()
        return pd.DataFrame([
            {
                'subject_id': s.subject_id,
                'group': s.group.name,
                'updrs_total': s.updrs_total,
                'severity': s.severity.level if s.severity else None,
                'study': s.study,
                'walks': int(counts.get(s.subject_id, 0)),
            }
            for s in self.subjects
        ])

    def summary(self):
        frame = self.subjects_frame()
        by_group = frame.groupby('group').agg(subjects=('subject_id', 'count'), walks=('walks', 'sum'))
        return {
            'subjects': {g: int(n) for g, n in by_group['subjects'].items()},
            'walks': {g: int(n) for g, n in by_group['walks'].items()},
            'total_walks': len(self.walks),
            'dual_task_walks': sum(w.is_dual_task for w in self.walks),
            'excluded_walks': len(self.exclusions),
        }

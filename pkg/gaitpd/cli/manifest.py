"""
Manifiesto de corrida: lo necesario para repetir una corrida bit a bit
"""
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Dict, Optional

from config import Config
from storage import read_json, write_json


def utc_now():
    return datetime.now(timezone.utc).isoformat(timespec='seconds')


@dataclass
class RunManifest:
    command: str
    dataset_checksum: str
    seed: int
    config_hash: Optional[str] = None
    model_config: Optional[Dict] = None
    train_config: Optional[Dict] = None
    fold_plan: Optional[str] = None
    options: Dict = field(default_factory=dict)
    tool_version: str = Config.APP_VERSION
    started_at: str = field(default_factory=utc_now)
    finished_at: Optional[str] = None

    def finish(self):
        self.finished_at = utc_now()
        return self

    def save(self, path):
        return write_json(asdict(self), path)

    @classmethod
    def load(cls, path):
        return cls(**read_json(path))

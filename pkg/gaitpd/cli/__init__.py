from .commands import ablate, cv, ingest, predict
from .manifest import RunManifest

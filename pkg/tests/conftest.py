import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'gaitpd'))

from vgrf_data import NUM_CHANNELS, Group, Walk  # noqa: E402


def synthetic_samples(num_timesteps, parkinson, rng, offset=1.0, noise=0.1):
    """Señal tipo paso (seno rectificado) con corrimiento según el grupo"""
    t = np.arange(num_timesteps) / 100.0
    phase = rng.uniform(0, 2 * np.pi, NUM_CHANNELS)
    base = 1.0 + 0.5 * np.abs(np.sin(2 * np.pi * 0.9 * t[:, None] + phase[None, :]))
    samples = base + noise * rng.standard_normal((num_timesteps, NUM_CHANNELS))
    if parkinson:
        samples = samples + offset
    return np.clip(samples, 0.0, None)


def write_walk_file(path, samples, start_time=0.0):
    with open(path, 'w') as handle:
        for i, row in enumerate(samples):
            values = [f"{start_time + i * 0.01:.2f}"] + [f"{v:.6f}" for v in row]
            handle.write('\t'.join(values) + '\n')
    return str(path)


def make_walk(walk_id, subject_id, group, updrs=None, num_timesteps=300, seed=0, study='Ga', trial='01'):
    rng = np.random.default_rng(seed)
    return Walk(walk_id=walk_id, subject_id=subject_id, group=group, updrs_total=updrs,
                samples=synthetic_samples(num_timesteps, group is Group.Parkinson, rng),
                study=study, trial=trial)


@pytest.fixture
def gait_tree(tmp_path):
    """
    Árbol estilo gaitpdb con 10 Parkinson y 10 control, una caminata de 300
    muestras cada uno; UPDRS de los Parkinson repartido en las clases 2..5.
    """
    def build(n_pd=10, n_co=10, num_timesteps=300, seed=0):
        root = tmp_path / 'gaitpdb'
        root.mkdir(exist_ok=True)
        rng = np.random.default_rng(seed)
        lines = ['subject_id\tgroup\tupdrs_total']
        for i in range(1, n_pd + 1):
            subject = f"GaPt{i:02d}"
            updrs = (8, 18, 28, 40)[i % 4]
            lines.append(f"{subject}\tParkinson\t{updrs}")
            write_walk_file(root / f"{subject}_01.txt", synthetic_samples(num_timesteps, True, rng))
        for i in range(1, n_co + 1):
            subject = f"GaCo{i:02d}"
            lines.append(f"{subject}\tControl\t")
            write_walk_file(root / f"{subject}_01.txt", synthetic_samples(num_timesteps, False, rng))
        manifest = root / 'demographics.txt'
        manifest.write_text('\n'.join(lines) + '\n')
        return str(root), str(manifest)

    return build

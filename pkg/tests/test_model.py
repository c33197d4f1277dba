import struct

import numpy as np
import pytest

from engine import loss
from errors import CorruptFile, ManifestMismatch, ShapeMismatch, VersionMismatch
from model import (ModelConfig, build_network, classify_window, load_network, load_params, read_checkpoint,
                   save_params)
from vgrf_data import SensorChannel


@pytest.fixture(scope='module')
def detection_network():
    return build_network(ModelConfig(head='detection'), seed=0)


def test_branch_shape_trace(detection_network):
    assert detection_network.shape_trace() == [
        (100, 1), (98, 8), (96, 16), (48, 16), (46, 16), (44, 16), (22, 16), (352,), (100,),
    ]
    assert detection_network.branch_output_shape == (100,)
    assert ModelConfig().concat_width == 1800


@pytest.mark.parametrize('config,count', [
    (ModelConfig(head='detection'), 853541),
    (ModelConfig(head='severity'), 853625),
    (ModelConfig(head='detection').without_pair('L3R3'), 758941),
])
def test_parameter_count(config, count):
    assert build_network(config, seed=0).parameter_count() == count


def test_forward_shapes(detection_network):
    x = np.random.default_rng(1).uniform(0, 2, size=(4, 100, 18))
    p = detection_network.forward(x)
    assert p.shape == (4,)
    assert np.all((p > 0) & (p < 1))
    assert len(detection_network.last_branch_outputs) == 18
    assert all(out.shape == (4, 100) for out in detection_network.last_branch_outputs)

    severity = build_network(ModelConfig(head='severity'), seed=0)
    probs = severity.forward(x)
    assert probs.shape == (4, 5)
    assert np.allclose(probs.sum(axis=1), 1.0)


def test_forward_rejects_wrong_shape(detection_network):
    with pytest.raises(ShapeMismatch):
        detection_network.forward(np.zeros((2, 100, 16)))
    with pytest.raises(ShapeMismatch):
        detection_network.forward(np.zeros((2, 90, 18)))


def test_branches_do_not_share_weights(detection_network):
    rng = np.random.default_rng(2)
    x = rng.uniform(0, 2, size=(2, 100, 18))
    detection_network.forward(x)
    before = [out.copy() for out in detection_network.last_branch_outputs]

    x[:, :, 5] += 1.0
    detection_network.forward(x)
    after = detection_network.last_branch_outputs
    for index in range(18):
        changed = not np.allclose(before[index], after[index])
        assert changed == (index == 5)


def test_eval_is_deterministic_and_train_uses_dropout(detection_network):
    x = np.random.default_rng(3).uniform(0, 2, size=(3, 100, 18))
    assert np.array_equal(detection_network.forward(x), detection_network.forward(x))
    rng = np.random.default_rng(0)
    assert not np.array_equal(detection_network.forward(x, mode='train', rng=rng), detection_network.forward(x))


def test_network_gradient_spot_check():
    config = ModelConfig(channels=[SensorChannel.L1, SensorChannel.RTotal], head='severity',
                         branch_dropout=0.0, concat_dropout=0.0, head_dropout=0.0)
    network = build_network(config, seed=4)
    rng = np.random.default_rng(4)
    x = rng.uniform(0, 2, size=(3, 100, 2))
    target = np.array([0, 3, 4])

    network.zero_grad()
    _, grad = loss(network.forward(x), target, 'severity')
    network.backward(grad)

    eps = 1e-6
    for p in network.parameters()[::3]:
        idx = tuple(rng.integers(0, s) for s in p.shape)
        original = p.data[idx]
        p.data[idx] = original + eps
        plus = loss(network.forward(x), target, 'severity')[0]
        p.data[idx] = original - eps
        minus = loss(network.forward(x), target, 'severity')[0]
        p.data[idx] = original
        numeric = (plus - minus) / (2 * eps)
        assert p.grad[idx] == pytest.approx(numeric, rel=1e-4, abs=1e-8), p.name


def test_classify_window_rules():
    assert list(classify_window(np.array([0.2, 0.5, 0.5000001, 0.9]), 'detection')) == [0, 0, 1, 1]
    probs = np.array([
        [0.1, 0.6, 0.1, 0.1, 0.1],
        [0.0, 0.0, 0.5, 0.5, 0.0],
        [0.2, 0.2, 0.2, 0.2, 0.2],
    ])
    assert list(classify_window(probs, 'severity')) == [2, 4, 5]


# ============================================================================
# CONFIGURACIÓN
# ============================================================================

def test_without_pair():
    config = ModelConfig().without_pair('Total')
    assert len(config.channels) == 16
    assert SensorChannel.LTotal not in config.channels
    assert config.concat_width == 1600
    with pytest.raises(KeyError):
        ModelConfig().without_pair('L9R9')


def test_model_config_from_file(tmp_path):
    path = tmp_path / 'model.env'
    path.write_text("CHANNELS=L1,R1,LTotal\nHEAD=severity\nHEAD_DROPOUT=0.25\n")
    config = ModelConfig.from_file(str(path))
    assert config.channels == [SensorChannel.L1, SensorChannel.R1, SensorChannel.LTotal]
    assert config.head == 'severity'
    assert config.head_dropout == 0.25
    assert ModelConfig.from_file(str(path), head='detection').head == 'detection'


def test_config_hash():
    assert ModelConfig().config_hash() == ModelConfig().config_hash()
    assert ModelConfig().config_hash() != ModelConfig(head='severity').config_hash()
    assert ModelConfig.from_dict(ModelConfig().to_dict()) == ModelConfig()


# ============================================================================
# CHECKPOINTS
# ============================================================================

def test_checkpoint_round_trip(tmp_path, detection_network):
    path = save_params(detection_network, str(tmp_path / 'net.gpd'), extra={'epoch': 3})
    restored = load_network(path)
    x = np.random.default_rng(5).uniform(0, 2, size=(2, 100, 18))

    assert np.array_equal(restored.forward(x), detection_network.forward(x))
    header, arrays = read_checkpoint(path)
    assert header['extra'] == {'epoch': 3}
    assert len(arrays) == len(detection_network.parameters())


def test_checkpoint_manifest_mismatch(tmp_path):
    small = build_network(ModelConfig().without_pair('L1R1'), seed=0)
    path = save_params(small, str(tmp_path / 'small.gpd'))
    with pytest.raises(ManifestMismatch):
        load_params(path, build_network(ModelConfig(), seed=0))
    with pytest.raises(ManifestMismatch):
        load_network(path, expected_head='severity')


def test_checkpoint_corruption(tmp_path, detection_network):
    path = save_params(detection_network, str(tmp_path / 'net.gpd'))
    raw = open(path, 'rb').read()

    truncated = tmp_path / 'truncated.gpd'
    truncated.write_bytes(raw[:-8])
    with pytest.raises(CorruptFile):
        read_checkpoint(str(truncated))

    foreign = tmp_path / 'foreign.gpd'
    foreign.write_bytes(b'NOTAGAIT' + raw[8:])
    with pytest.raises(CorruptFile):
        read_checkpoint(str(foreign))

    future = tmp_path / 'future.gpd'
    future.write_bytes(raw[:8] + struct.pack('<H', 99) + raw[10:])
    with pytest.raises(VersionMismatch):
        read_checkpoint(str(future))

import numpy as np
import pytest

from engine import (Activation, Conv1D, Dense, Dropout, MaxPool1D, Nadam, OptimizerState, Tensor,
                    binary_cross_entropy, categorical_cross_entropy, check_finite, functional as F, nadam_step)
from errors import MissingForwardCache, NonFiniteValue, ShapeMismatch

SEEDS = range(100)
TOLERANCE = 1e-4


def numerical_grad(f, x, eps=1e-6):
    """Diferencias centrales de f() respecto a cada elemento de x (modificado en sitio)"""
    grad = np.zeros_like(x)
    it = np.nditer(x, flags=['multi_index'])
    for _ in it:
        idx = it.multi_index
        original = x[idx]
        x[idx] = original + eps
        plus = f()
        x[idx] = original - eps
        minus = f()
        x[idx] = original
        grad[idx] = (plus - minus) / (2 * eps)
    return grad


def rel_error(analytic, numeric):
    denom = max(np.linalg.norm(analytic) + np.linalg.norm(numeric), 1e-12)
    return np.linalg.norm(analytic - numeric) / denom


def check_layer(layer, x, rng, params=()):
    """Gradiente de sum(proj * layer(x)) respecto a x y a cada parámetro"""
    out = layer.forward(x)
    proj = rng.standard_normal(out.shape)

    def scalar():
        return float(np.sum(proj * layer.forward(x)))

    for p in params:
        p.zero_grad()
    layer.forward(x)
    dx = layer.backward(proj)

    assert rel_error(dx, numerical_grad(scalar, x)) < TOLERANCE
    for p in params:
        assert rel_error(p.grad, numerical_grad(scalar, p.data)) < TOLERANCE, p.name


# ============================================================================
# GRADIENTES
# ============================================================================

def test_conv1d_gradients():
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        layer = Conv1D(in_channels=2, filters=3, kernel_size=3, rng=rng)
        layer.bias.data[...] = rng.standard_normal(3)
        check_layer(layer, rng.standard_normal((2, 7, 2)), rng, layer.params())


def test_dense_gradients():
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        layer = Dense(in_features=5, units=4, rng=rng)
        layer.bias.data[...] = rng.standard_normal(4)
        check_layer(layer, rng.standard_normal((3, 5)), rng, layer.params())


def test_maxpool_gradients():
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        check_layer(MaxPool1D(2), rng.standard_normal((2, 9, 3)), rng)


@pytest.mark.parametrize('activation', ['SeLU', 'Sigmoid', 'Softmax'])
def test_activation_gradients(activation):
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        check_layer(Activation(activation), rng.standard_normal((4, 5)) * 2.0, rng)


def test_softmax_cce_gradient():
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        logits = rng.standard_normal((4, 5)) * 2.0
        target = rng.integers(0, 5, size=4)
        softmax = Activation('Softmax')

        def scalar():
            return categorical_cross_entropy(softmax.forward(logits), target)[0]

        _, dprob = categorical_cross_entropy(softmax.forward(logits), target)
        dlogits = softmax.backward(dprob)
        assert rel_error(dlogits, numerical_grad(scalar, logits)) < TOLERANCE


def test_sigmoid_bce_gradient():
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        logits = rng.standard_normal(6) * 2.0
        target = rng.integers(0, 2, size=6)
        sigmoid = Activation('Sigmoid')

        def scalar():
            return binary_cross_entropy(sigmoid.forward(logits), target)[0]

        _, dprob = binary_cross_entropy(sigmoid.forward(logits), target)
        dlogits = sigmoid.backward(dprob)
        assert rel_error(dlogits, numerical_grad(scalar, logits)) < TOLERANCE
        # Con sigmoide el gradiente compuesto es (p - t) / n
        p = F.sigmoid(logits)
        assert np.allclose(dlogits, (p - target) / len(target))


def test_bce_gradient_wrt_probability():
    for seed in SEEDS:
        rng = np.random.default_rng(seed)
        p = rng.uniform(0.05, 0.95, size=5)
        target = rng.integers(0, 2, size=5)
        _, grad = binary_cross_entropy(p, target)
        assert rel_error(grad, numerical_grad(lambda: binary_cross_entropy(p, target)[0], p)) < TOLERANCE


# ============================================================================
# FUNCIONES
# ============================================================================

def test_conv1d_reference_values():
    x = np.arange(5, dtype=float)[:, None]
    filters = np.array([1.0, 0.0, -1.0])[:, None, None]
    out = F.conv1d_forward(x, filters, np.array([0.5]))
    assert out.shape == (3, 1)
    assert np.allclose(out[:, 0], [-1.5, -1.5, -1.5])


def test_conv1d_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        F.conv1d_forward(np.zeros((2, 10, 3)), np.zeros((3, 2, 4)), np.zeros(4))
    with pytest.raises(ShapeMismatch):
        F.conv1d_forward(np.zeros((2, 2, 1)), np.zeros((3, 1, 4)), np.zeros(4))


def test_maxpool_drops_remainder():
    out, _ = F.maxpool1d(np.array([[1.0], [3.0], [2.0], [0.0], [9.0]]), 2)
    assert np.array_equal(out[:, 0], [3.0, 2.0])


def test_selu_constants():
    assert F.selu(np.array([1.0]))[0] == pytest.approx(1.0507009873554805)
    assert F.selu(np.array([-50.0]))[0] == pytest.approx(-1.0507009873554805 * 1.6732632423543772)


def test_sigmoid_and_softmax_are_stable():
    assert np.all(np.isfinite(F.sigmoid(np.array([-1000.0, 0.0, 1000.0]))))
    probs = F.softmax(np.array([[1000.0, 0.0, -1000.0], [1.0, 2.0, 3.0]]))
    assert np.all(np.isfinite(probs))
    assert np.allclose(probs.sum(axis=1), 1.0)


def test_softmax_sums_to_one_over_wide_logits():
    logits = np.random.default_rng(5).uniform(-500.0, 500.0, size=(2000, 5))
    logits[0] = [500.0, -500.0, 0.0, 500.0, -500.0]
    probs = F.softmax(logits)
    assert np.all(probs >= 0.0)
    assert np.max(np.abs(probs.sum(axis=1) - 1.0)) <= 1e-12



def test_losses_are_finite_at_extremes():
    loss_value, grad = binary_cross_entropy(np.array([0.0, 1.0]), np.array([1, 0]))
    assert np.isfinite(loss_value) and np.all(np.isfinite(grad))
    loss_value, grad = categorical_cross_entropy(np.array([[1.0, 0.0]]), np.array([1]))
    assert np.isfinite(loss_value) and np.all(np.isfinite(grad))


def test_dropout_modes():
    rng = np.random.default_rng(0)
    x = np.ones((200, 50))
    layer = Dropout(0.5)
    assert np.array_equal(layer.forward(x, training=False), x)
    dropped = layer.forward(x, training=True, rng=rng)
    assert set(np.unique(dropped)) <= {0.0, 2.0}
    assert dropped.mean() == pytest.approx(1.0, abs=0.05)
    assert np.array_equal(layer.backward(np.ones_like(x)), dropped)


def test_dropout_keep_rate_and_scale():
    rng = np.random.default_rng(1)
    x = np.full((10000, 50), 3.0)
    out, mask = F.dropout(x, 0.3, 'train', rng)
    assert set(np.unique(mask)) <= {0.0, 1.0 / 0.7}
    assert np.mean(mask > 0) == pytest.approx(0.7, abs=0.005)
    assert out.mean() == pytest.approx(3.0, abs=0.02)
    np.testing.assert_array_equal(out, x * mask)


def test_dropout_identity_outside_training_or_at_zero_rate():
    rng = np.random.default_rng(2)
    x = np.random.default_rng(3).normal(size=(4, 6))
    for rate, mode in ((0.5, 'eval'), (0.0, 'train')):
        out, mask = F.dropout(x, rate, mode, rng)
        assert out is x
        assert mask == 1.0
    layer = Dropout(0.0)
    np.testing.assert_array_equal(layer.forward(x, training=True, rng=rng), x)
    np.testing.assert_array_equal(layer.backward(x), x)



def test_backward_without_forward():
    layer = Dense(3, 2, np.random.default_rng(0))
    with pytest.raises(MissingForwardCache):
        layer.backward(np.zeros((1, 2)))


def test_check_finite():
    check_finite(np.zeros(3), 'ok')
    with pytest.raises(NonFiniteValue):
        check_finite(np.array([0.0, np.nan]), 'prueba')


# ============================================================================
# NADAM
# ============================================================================

def test_nadam_first_step_matches_closed_form():
    lr, beta1, beta2, eps = 0.001, 0.9, 0.999, 1e-8
    w = np.zeros(1)
    state = OptimizerState.fresh([w], lr)
    nadam_step([w], [np.ones(1)], state)

    mu1 = beta1 * (1 - 0.5 * 0.96 ** (1 * 0.004))
    mu2 = beta1 * (1 - 0.5 * 0.96 ** (2 * 0.004))
    g_prime = 1.0 / (1 - mu1)
    m_prime = (1 - beta1) / (1 - mu1 * mu2)
    v_prime = (1 - beta2) / (1 - beta2)
    expected = -lr * ((1 - mu1) * g_prime + mu2 * m_prime) / (np.sqrt(v_prime) + eps)

    assert w[0] == pytest.approx(expected, rel=1e-12)
    assert w[0] == pytest.approx(-0.00105645, abs=1e-8)
    assert state.step_count == 1


def test_nadam_converges_on_quadratic_bowl():
    for w0 in (1.0, -1.0, 0.5, -0.1):
        w = Tensor(np.array([w0]), 'w')
        optimizer = Nadam([w], learning_rate=0.01)
        for _ in range(500):
            optimizer.zero_grad()
            w.grad += 2 * w.data
            optimizer.step()
        assert abs(w.data[0]) < 1e-3, w0


def test_nadam_shifted_bowl():
    target = np.array([3.0, -2.0, 0.5])
    w = Tensor(np.zeros(3), 'w')
    optimizer = Nadam([w], learning_rate=0.05)
    for _ in range(500):
        optimizer.zero_grad()
        w.grad += 2 * (w.data - target)
        optimizer.step()
    assert np.allclose(w.data, target, atol=1e-2)


def test_nadam_zero_gradient_keeps_parameters():
    start = np.array([0.3, -1.2, 4.0])
    w = Tensor(start.copy(), 'w')
    optimizer = Nadam([w], learning_rate=0.01)
    for _ in range(20):
        optimizer.zero_grad()
        optimizer.step()
    np.testing.assert_array_equal(w.data, start)
    assert optimizer.state.step_count == 20



def test_optimizer_snapshot_is_independent():
    w = Tensor(np.zeros(2), 'w')
    optimizer = Nadam([w], learning_rate=0.01)
    w.grad += 1.0
    optimizer.step()
    snapshot = optimizer.state.snapshot()
    optimizer.step()
    assert snapshot.step_count == 1
    assert not np.array_equal(snapshot.first_moments[0], optimizer.state.first_moments[0])

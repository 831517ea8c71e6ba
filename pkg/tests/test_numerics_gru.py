import numpy as np
import pytest

from osmolearn.core.core_exceptions import ContractException, ShapeException
from osmolearn.numerics.numerics_gradcheck import finite_difference_grad, pack_blocks, relative_error, unpack_blocks
from osmolearn.numerics.numerics_gru import gru_backward, gru_forward, sigmoid
from osmolearn.numerics.numerics_random import RngStream
from osmolearn.numerics.numerics_types import GruParams


@pytest.mark.parametrize('n_features', [1, 2, 3])
def test_param_count_matches_architecture(n_features):
    params = GruParams.zeros(n_features, 20)
    assert params.param_count() == 60 * n_features + 1320


def test_zero_params_give_half_decay():
    # r = z = 0.5, n = 0: h_t = 0.5 * h_{t-1}
    params = GruParams.zeros(2, 3)
    states, _ = gru_forward(np.ones((4, 2)), np.ones(3), params)
    np.testing.assert_allclose(states[-1], np.full(3, 0.5 ** 4), rtol=0, atol=1e-15)


def test_sigmoid_is_stable_for_large_inputs():
    values = sigmoid(np.array([-1000.0, 0.0, 1000.0]))
    np.testing.assert_allclose(values, [0.0, 0.5, 1.0])


def test_batched_forward_equals_per_sequence(rng):
    params = GruParams.initialize(2, 4, rng.spawn('params'))
    inputs = rng.normal(0.0, 1.0, (3, 5, 2))
    batched, _ = gru_forward(inputs, None, params)
    for b in range(3):
        single, _ = gru_forward(inputs[b], None, params)
        np.testing.assert_allclose(batched[b], single, rtol=0, atol=1e-14)


def test_identical_sequences_in_one_batch_give_identical_states(rng):
    params = GruParams.initialize(2, 4, rng.spawn('params'))
    window = rng.normal(0.0, 1.0, (5, 2))
    inputs = np.stack([window, rng.normal(0.0, 1.0, (5, 2)), window])
    states, _ = gru_forward(inputs, None, params)
    np.testing.assert_allclose(states[0], states[2], rtol=0, atol=1e-14)


def test_width_mismatch_is_shape_error(rng):
    params = GruParams.initialize(2, 4, rng)
    with pytest.raises(ShapeException, match='inputs'):
        gru_forward(np.zeros((5, 3)), None, params)


def test_consumed_cache_is_rejected(rng):
    params = GruParams.initialize(2, 4, rng)
    _, cache = gru_forward(np.zeros((5, 2)), None, params)
    gru_backward(cache, np.ones(4))
    with pytest.raises(ContractException):
        gru_backward(cache, np.ones(4))


def test_gradient_shape_mismatch_is_contract_error(rng):
    params = GruParams.initialize(2, 4, rng)
    _, cache = gru_forward(np.zeros((2, 5, 2)), None, params)
    with pytest.raises(ContractException):
        gru_backward(cache, np.ones((3, 4)))


@pytest.mark.parametrize('seed', range(100))
def test_backward_matches_finite_differences(seed):
    rng = RngStream(seed)
    params = GruParams.initialize(2, 3, rng.spawn('params'))
    inputs = rng.normal(0.0, 1.0, (2, 4, 2))
    weights = rng.normal(0.0, 1.0, (2, 3))

    states, cache = gru_forward(inputs, None, params)
    d_params, d_inputs = gru_backward(cache, weights)

    vector, layout = pack_blocks(params.blocks())

    def loss_of_params(v):
        out, _ = gru_forward(inputs, None, GruParams.from_blocks(unpack_blocks(v, layout)))
        return float(np.sum(weights * out[:, -1]))

    def loss_of_inputs(x):
        out, _ = gru_forward(x, None, params)
        return float(np.sum(weights * out[:, -1]))

    analytic, _ = pack_blocks(d_params.blocks())
    assert relative_error(analytic, finite_difference_grad(loss_of_params, vector)) < 1e-4
    assert relative_error(d_inputs, finite_difference_grad(loss_of_inputs, inputs)) < 1e-4


@pytest.mark.parametrize('length', [1, 10])
@pytest.mark.parametrize('seed', range(5))
def test_backward_matches_finite_differences_at_window_length(seed, length):
    rng = RngStream(seed).spawn('length', length)
    params = GruParams.initialize(1, 20, rng.spawn('params'))
    inputs = rng.normal(0.0, 1.0, (3, length, 1))
    weights = rng.normal(0.0, 1.0, (3, 20))

    _, cache = gru_forward(inputs, None, params)
    d_params, d_inputs = gru_backward(cache, weights)
    vector, layout = pack_blocks(params.blocks())

    def loss_of_params(v):
        out, _ = gru_forward(inputs, None, GruParams.from_blocks(unpack_blocks(v, layout)))
        return float(np.sum(weights * out[:, -1]))

    def loss_of_inputs(x):
        out, _ = gru_forward(x, None, params)
        return float(np.sum(weights * out[:, -1]))

    analytic, _ = pack_blocks(d_params.blocks())
    assert relative_error(analytic, finite_difference_grad(loss_of_params, vector)) < 1e-4
    assert relative_error(d_inputs, finite_difference_grad(loss_of_inputs, inputs)) < 1e-4

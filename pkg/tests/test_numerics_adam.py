import numpy as np
import pytest

from osmolearn.core.core_exceptions import NumericException, PreconditionException, ShapeException
from osmolearn.numerics.numerics_adam import adam_step
from osmolearn.numerics.numerics_types import AdamState


def test_first_step_moves_by_lr_times_sign():
    params = {'w': np.array([1.0, -1.0])}
    grads = {'w': np.array([2.0, -0.5])}
    new_params, state = adam_step(params, grads, AdamState.zeros_like(params), lr=0.1)

    expected = params['w'] - 0.1 * grads['w'] / (np.abs(grads['w']) + 1e-8)
    np.testing.assert_allclose(new_params['w'], expected, rtol=0, atol=1e-15)
    assert state.t == 1
    np.testing.assert_allclose(state.m['w'], 0.1 * grads['w'])
    np.testing.assert_allclose(state.v['w'], 0.001 * grads['w'] ** 2)


def test_inputs_are_not_mutated():
    params = {'w': np.array([1.0])}
    state = AdamState.zeros_like(params)
    adam_step(params, {'w': np.array([1.0])}, state, lr=0.01)
    assert params['w'][0] == 1.0
    assert state.t == 0 and state.m['w'][0] == 0.0


def test_second_step_uses_bias_correction():
    params = {'w': np.array([0.0])}
    grads = {'w': np.array([1.0])}
    params, state = adam_step(params, grads, AdamState.zeros_like(params), lr=1.0, eps=1e-12)
    params, state = adam_step(params, grads, state, lr=1.0, eps=1e-12)
    # постоянный градиент: m_hat = v_hat = 1 на каждом шаге
    np.testing.assert_allclose(params['w'], [-2.0], atol=1e-10)
    assert state.t == 2


def test_non_finite_gradient_names_block():
    params = {'gru.w_ir': np.zeros(2)}
    with pytest.raises(NumericException, match='gru.w_ir'):
        adam_step(params, {'gru.w_ir': np.array([np.nan, 0.0])}, AdamState.zeros_like(params), lr=0.1)


def test_block_mismatch():
    with pytest.raises(ShapeException):
        adam_step({'a': np.zeros(2)}, {'b': np.zeros(2)}, AdamState(), lr=0.1)
    with pytest.raises(ShapeException):
        adam_step({'a': np.zeros(2)}, {'a': np.zeros(3)}, AdamState(), lr=0.1)


def test_invalid_hyperparameters():
    params = {'a': np.zeros(1)}
    with pytest.raises(PreconditionException):
        adam_step(params, params, AdamState(), lr=0.1, beta1=1.0)
    with pytest.raises(PreconditionException):
        adam_step(params, params, AdamState(), lr=0.1, eps=0.0)

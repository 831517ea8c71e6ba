import numpy as np

from osmolearn.numerics.numerics_gradcheck import finite_difference_grad, pack_blocks, relative_error, unpack_blocks


def test_finite_difference_of_quadratic():
    x = np.array([[1.0, -2.0], [0.5, 3.0]])
    grad = finite_difference_grad(lambda v: float(np.sum(v ** 2)), x)
    np.testing.assert_allclose(grad, 2.0 * x, atol=1e-8)


def test_finite_difference_leaves_input_untouched():
    x = np.array([1.0, 2.0])
    finite_difference_grad(lambda v: float(v.sum()), x)
    np.testing.assert_array_equal(x, [1.0, 2.0])


def test_relative_error_floor():
    assert relative_error(np.zeros(3), np.zeros(3)) == 0.0
    assert relative_error(np.ones(2), np.ones(2)) == 0.0


def test_pack_unpack_layout():
    blocks = {'a': np.arange(6.0).reshape(2, 3), 'b': np.array([7.0])}
    vector, layout = pack_blocks(blocks)
    assert vector.shape == (7,)
    restored = unpack_blocks(vector, layout)
    assert list(restored) == ['a', 'b']
    np.testing.assert_array_equal(restored['a'], blocks['a'])

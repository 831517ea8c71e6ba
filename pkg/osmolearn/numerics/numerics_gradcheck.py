"""
Проверка градиентов конечными разностями.
"""
from typing import Callable, Dict, List, Tuple

import numpy as np

BlockLayout = List[Tuple[str, Tuple[int, ...]]]


def finite_difference_grad(f: Callable[[np.ndarray], float], x: np.ndarray, eps: float = 1e-5) -> np.ndarray:
    """Центральная разность (f(x + eps*e_k) - f(x - eps*e_k)) / 2eps по каждой координате"""
    x = np.array(x, dtype=np.float64, copy=True)
    grad = np.zeros_like(x)
    flat = x.reshape(-1)
    flat_grad = grad.reshape(-1)
    for k in range(flat.size):
        orig = flat[k]
        flat[k] = orig + eps
        f_plus = float(f(x))
        flat[k] = orig - eps
        f_minus = float(f(x))
        flat[k] = orig
        flat_grad[k] = (f_plus - f_minus) / (2.0 * eps)
    return grad


def relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-8) -> float:
    """||a - n|| / max(||a|| + ||n||, floor)"""
    analytic = np.asarray(analytic, dtype=np.float64).reshape(-1)
    numeric = np.asarray(numeric, dtype=np.float64).reshape(-1)
    scale = max(np.linalg.norm(analytic) + np.linalg.norm(numeric), floor)
    return float(np.linalg.norm(analytic - numeric) / scale)


def pack_blocks(blocks: Dict[str, np.ndarray]) -> Tuple[np.ndarray, BlockLayout]:
    """Склейка именованных блоков в один вектор (порядок ключей сохраняется)"""
    layout = [(name, np.shape(arr)) for name, arr in blocks.items()]
    if not layout:
        return np.zeros(0), layout
    vector = np.concatenate([np.asarray(arr, dtype=np.float64).reshape(-1) for arr in blocks.values()])
    return vector, layout


def unpack_blocks(vector: np.ndarray, layout: BlockLayout) -> Dict[str, np.ndarray]:
    """Обратная операция к pack_blocks"""
    blocks, offset = {}, 0
    for name, shape in layout:
        size = int(np.prod(shape, dtype=np.int64))
        blocks[name] = np.array(vector[offset:offset + size], dtype=np.float64).reshape(shape)
        offset += size
    return blocks

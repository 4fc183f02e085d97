"""NumPy fallback for the compiled kernels in ``_kernels.pyx``.

Kept bitwise-equivalent to the compiled code: the gather accumulates
support atoms in the same sequential order (IEEE multiply then add per
element, never fused), and the walk reduction is exact integer math.
"""

from __future__ import annotations

import numpy as np

_EPS_DELTA = np.array([[1, 0], [-1, 0], [0, 1], [0, -1]], dtype=np.int64)


def gather_mix(p: np.ndarray, idx: np.ndarray, w: np.ndarray, out: np.ndarray) -> None:
    """out[g] = sum_s w[s] * p[idx[s, g]], accumulated in row order."""
    np.multiply(p[idx[0]], w[0], out=out)
    for s in range(1, idx.shape[0]):
        out += w[s] * p[idx[s]]


def walk_endpoints(steps: np.ndarray, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> None:
    """Reduce generator-code sequences to unreduced endpoint coordinates."""
    eps = _EPS_DELTA[steps, 0]
    delta = _EPS_DELTA[steps, 1]
    np.sum(eps, axis=1, out=x)
    np.sum(delta, axis=1, out=y)
    # z = sum_i eps_i * (delta_1 + ... + delta_{i-1}); cumulative sums stay
    # well inside int64 for any feasible k.
    csum = np.cumsum(delta[:, :-1], axis=1)
    np.einsum("ti,ti->t", eps[:, 1:], csum, out=z)

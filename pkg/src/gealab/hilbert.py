"""Desk-scale models of the two Hilbert spaces used by the form engine.

The *sequence* model truncates the standard orthonormal basis e_1, e_2, ...
to the first N coordinates; vectors are complex arrays of length N and the
inner product is the plain coordinate product, linear in the first slot and
antilinear in the second.

The *grid* model samples functions on [0, 1] at M interior nodes plus both
endpoints (x_k = k*h with h = 1/(M+1)); the inner product is trapezoidal
quadrature and the derivative energy is the sum of squared first differences
divided by h.  Both rules are exact on the piecewise-linear interpolants, so
the algebraic identities between the shipped forms hold at every fixed mesh
rather than only in the mesh limit.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch

SEQUENCE = "sequence"
GRID = "grid"
MODELS = (SEQUENCE, GRID)

# default levels used by probes and order checks
DEFAULT_LEVELS = {SEQUENCE: (8, 16, 32), GRID: (9, 49, 199)}


def dim_of(model: str, level: int) -> int:
    """Coordinate dimension of the model at a level (sequence N, grid M)."""
    if model == SEQUENCE:
        return level
    if model == GRID:
        return level + 2
    raise ValueError(f"unknown model {model!r}")


def level_of(model: str, vector_length: int) -> int:
    """Inverse of :func:`dim_of`."""
    if model == SEQUENCE:
        return vector_length
    if model == GRID:
        return vector_length - 2
    raise ValueError(f"unknown model {model!r}")


def grid_step(mesh: int) -> float:
    return 1.0 / (mesh + 1)


def grid_nodes(mesh: int) -> np.ndarray:
    """All node coordinates 0 = x_0 < x_1 < ... < x_{M+1} = 1."""
    return np.linspace(0.0, 1.0, mesh + 2)


def gram_weights(model: str, level: int) -> np.ndarray:
    """Diagonal of the Gram matrix of the model inner product.

    Sequence: all ones.  Grid: trapezoid weights h*(1/2, 1, ..., 1, 1/2).
    """
    if model == SEQUENCE:
        return np.ones(level)
    if model == GRID:
        h = grid_step(level)
        w = np.full(level + 2, h)
        w[0] *= 0.5
        w[-1] *= 0.5
        return w
    raise ValueError(f"unknown model {model!r}")


def _pair(model: str, x, y) -> tuple[np.ndarray, np.ndarray, int]:
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionMismatch(f"vector shapes {x.shape} and {y.shape} do not match")
    return x, y, level_of(model, x.shape[0])


def inner(model: str, x, y) -> complex:
    """Model inner product (x, y): linear in x, antilinear in y."""
    x, y, level = _pair(model, x, y)
    w = gram_weights(model, level)
    return complex(np.sum(w * x * np.conj(y)))


def norm(model: str, x) -> float:
    x = np.asarray(x, dtype=complex)
    w = gram_weights(model, level_of(model, x.shape[0]))
    return float(np.sqrt(np.sum(w * np.abs(x) ** 2).real))


def dirichlet_energy(u) -> float:
    """Sum of |u_{k+1} - u_k|^2 / h over all mesh intervals.

    Exact for piecewise-linear interpolants; the linear ramp u(x) = x has
    energy 1 at every mesh.
    """
    u = np.asarray(u, dtype=complex)
    if u.ndim != 1 or u.shape[0] < 2:
        raise DimensionMismatch("grid vector needs at least two nodes")
    h = 1.0 / (u.shape[0] - 1)
    return float(np.sum(np.abs(np.diff(u)) ** 2) / h)


def energy_stiffness(mesh: int) -> np.ndarray:
    """Matrix K with u* K u = dirichlet_energy(u) on the (M+2)-node grid."""
    n = mesh + 2
    d = np.zeros((n - 1, n))
    idx = np.arange(n - 1)
    d[idx, idx] = -1.0
    d[idx, idx + 1] = 1.0
    return (d.T @ d) / grid_step(mesh)


def polarize(q, x, y) -> complex:
    """Recover the sesquilinear value t(x, y) from the quadratic map q.

    Uses t(x, y) = (1/4) * sum_k i^k q(x + i^k y), which inverts any
    quadratic map of a form that is linear in its first argument and
    antilinear in its second.
    """
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    total = 0.0 + 0.0j
    for k, power in enumerate((1.0, 1.0j, -1.0, -1.0j)):
        total += power * q(x + power * y)
    return complex(total / 4.0)


def smooth_grid_samples(mesh: int) -> list[tuple[str, np.ndarray]]:
    """Named smooth test functions sampled at the grid nodes."""
    xs = grid_nodes(mesh)
    hat = 1.0 - 2.0 * np.abs(xs - 0.5)
    return [
        ("one", np.ones_like(xs, dtype=complex)),
        ("linear", xs.astype(complex)),
        ("square", (xs**2).astype(complex)),
        ("sine", np.sin(np.pi * xs).astype(complex)),
        ("hat", hat.astype(complex)),
    ]


class VectorSampler:
    """Seeded stream of complex test vectors; the same seed replays the
    same stream.  Coordinates are standard complex normal (real and
    imaginary parts N(0, 1/2) each)."""

    def __init__(self, model: str, level: int, seed: int):
        if model not in MODELS:
            raise ValueError(f"unknown model {model!r}")
        self.model = model
        self.level = level
        self.seed = seed
        self._rng = np.random.default_rng(seed)

    def draw(self, unit: bool = False) -> np.ndarray:
        n = dim_of(self.model, self.level)
        z = (self._rng.standard_normal(n) + 1j * self._rng.standard_normal(n)) / np.sqrt(2.0)
        if unit:
            z = z / norm(self.model, z)
        return z

    def batch(self, count: int, unit: bool = False) -> list[np.ndarray]:
        return [self.draw(unit=unit) for _ in range(count)]

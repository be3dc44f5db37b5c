"""Seeded random period matrices, points and characteristics used by checks and reports."""

from __future__ import annotations

import numpy as np

from .theta import Characteristic, PeriodMatrix


def random_tau(g: int, rng: np.random.Generator, imag_floor: float = 0.8) -> PeriodMatrix:
    """A reasonably reduced period matrix: |Re| <= 1/2, Im = floor * I + a small PSD perturbation."""
    re = rng.uniform(-0.5, 0.5, (g, g))
    a = rng.uniform(-0.3, 0.3, (g, g))
    im = imag_floor * np.eye(g) + a @ a.T
    t = np.triu(re + 1j * im)
    return PeriodMatrix(t + np.triu(t, 1).T)


def random_point(g: int, rng: np.random.Generator, imag_scale: float = 0.4) -> np.ndarray:
    return rng.uniform(-0.5, 0.5, g) + 1j * rng.uniform(-imag_scale, imag_scale, g)


def random_characteristic(g: int, rng: np.random.Generator) -> Characteristic:
    bits = rng.integers(0, 2, 2 * g)
    return Characteristic(tuple(bits[:g]), tuple(bits[g:]))


# Starting matrices whose theta-null Newton paths are known to converge
G2_THETANULL_START = [[1j, 0.3], [0.3, 1.2j]]
G2_THETANULL_CHAR = "11|11"
G2_THETANULL_ENTRY = (0, 1)

G3_THETANULL_START = [[1j, 0.15, 0.1], [0.15, 1.1j, 0.25 + 0.1j], [0.1, 0.25 + 0.1j, 1.3j]]
G3_THETANULL_CHAR = "111|101"
G3_THETANULL_ENTRY = (0, 2)

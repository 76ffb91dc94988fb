"""Finite-difference stencils on periodic-in-x padded grid functions.

Arrays are (nx, ncols) with x periodic (axis 0) and ncols = physical rows
plus ghost rows (axis 1).  y-operators are valid only where the stencil
fits; callers slice accordingly.
"""

from __future__ import annotations

import numpy as np


def d0x(q, dx):
    return (np.roll(q, -1, axis=0) - np.roll(q, 1, axis=0)) / (2.0 * dx)


def dxx(q, dx):
    return (np.roll(q, -1, axis=0) - 2.0 * q + np.roll(q, 1, axis=0)) / (dx * dx)


def d0y(q, dy):
    out = np.zeros_like(q)
    out[:, 1:-1] = (q[:, 2:] - q[:, :-2]) / (2.0 * dy)
    return out


def dyy(q, dy):
    out = np.zeros_like(q)
    out[:, 1:-1] = (q[:, 2:] - 2.0 * q[:, 1:-1] + q[:, :-2]) / (dy * dy)
    return out


def lap(q, dx, dy):
    return dxx(q, dx) + dyy(q, dy)


def d4x(q):
    """Undivided fourth difference in x (periodic)."""
    return (np.roll(q, -2, axis=0) + np.roll(q, 2, axis=0)
            - 4.0 * (np.roll(q, -1, axis=0) + np.roll(q, 1, axis=0)) + 6.0 * q)


def d4y(q):
    """Undivided fourth difference in y; valid on columns 2..-3."""
    out = np.zeros_like(q)
    out[:, 2:-2] = (q[:, 4:] + q[:, :-4]
                    - 4.0 * (q[:, 3:-1] + q[:, 1:-3]) + 6.0 * q[:, 2:-2])
    return out


def extrapolate_ghosts(q, col, side, n_ghost=2):
    """Cubic extrapolation of ghost columns beyond `col`.

    side = -1 fills col-1, ..., col-n_ghost from the data at and above col;
    side = +1 fills col+1, ..., col+n_ghost from the data at and below col.
    """
    for m in range(1, n_ghost + 1):
        g = col + side * m
        q[:, g] = (4.0 * q[:, g - side] - 6.0 * q[:, g - 2 * side]
                   + 4.0 * q[:, g - 3 * side] - q[:, g - 4 * side])

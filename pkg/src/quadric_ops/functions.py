"""Built-in test functions for the approximation experiments."""
from __future__ import annotations

import numpy as np


def f_entire(x, y, t):
    """``exp(x cos(20 y - t))``: entire, so coefficients decay super-exponentially eventually."""
    return np.exp(x * np.cos(20.0 * y - t))


def g_pole_near_apex(x, y, t):
    """``1 / (x^2 + y^2 + (t - 0.02)^2)``: pole at ``(0, 0, 0.02)``, off the surface but inside the solid cone."""
    return 1.0 / (x * x + y * y + (t - 0.02) ** 2)


def h_oscillatory(x, y, t):
    """``cos(100 x (y - 1)) / (1 + 50 t)``."""
    return np.cos(100.0 * x * (y - 1.0)) / (1.0 + 50.0 * t)


def r_pole_below(x, y, t):
    """``1 / (x^2 + y^2 + (t + 0.02)^2)``: pole at ``(0, 0, -0.02)``, just outside the cone."""
    return 1.0 / (x * x + y * y + (t + 0.02) ** 2)


def poly_degree7(x, y, t):
    """A fixed polynomial of total degree 7."""
    return (
        1.0
        + 0.5 * x
        - 0.25 * y * t
        + 0.3 * x * x * y
        - 0.7 * t**3
        + 0.2 * x * y * y * t
        + 0.1 * x**3 * y * t
        - 0.4 * y**5
        + 0.6 * x * y * t**4
        - 0.3 * x**2 * y**3 * t**2
    )


BUILTINS = {
    "f": f_entire,
    "g": g_pole_near_apex,
    "h": h_oscillatory,
    "r": r_pole_below,
    "poly": poly_degree7,
}

"""Shared brute-force oracles kept independent of the code paths they check."""
import numpy as np


def brute_force_low_dissipation(a, b, drive, rounds=8, n=41):
    """Grid-refined maximum of P = (A - a/tH - b/tC)/(tH + tC).

    Returns (t_hot, t_cold, power).  Pure grid search with iterative zoom;
    never consults the closed-form stationarity conditions.
    """
    lo_h, hi_h = 0.5 * a / drive, 100.0 * (a + b) / drive
    lo_c, hi_c = 0.5 * b / drive, 100.0 * (a + b) / drive
    best = (np.nan, np.nan, -np.inf)
    for _ in range(rounds):
        th = np.geomspace(lo_h, hi_h, n)
        tc = np.geomspace(lo_c, hi_c, n)
        grid_h, grid_c = np.meshgrid(th, tc, indexing="ij")
        power = (drive - a / grid_h - b / grid_c) / (grid_h + grid_c)
        i, j = np.unravel_index(np.argmax(power), power.shape)
        best = (float(grid_h[i, j]), float(grid_c[i, j]), float(power[i, j]))
        lo_h, hi_h = th[max(i - 1, 0)], th[min(i + 1, n - 1)]
        lo_c, hi_c = tc[max(j - 1, 0)], tc[min(j + 1, n - 1)]
    return best


def fourth_order_derivative(y, h):
    """Five-point interior first derivative on a uniform grid (one-sided ends dropped)."""
    y = np.asarray(y, dtype=float)
    return (-y[4:] + 8.0 * y[3:-1] - 8.0 * y[1:-3] + y[:-4]) / (12.0 * h)

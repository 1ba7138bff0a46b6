"""Core Bezier curve mathematics.

A curve of degree n is stored as its n+1 control points. All evaluation
is done in double precision on (x, y) coordinate pairs; the image
convention (y grows downward) is irrelevant at this layer.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

MAX_DEGREE = 20

# Exact integer binomial rows for every supported degree.
_BINOM = {n: np.array([comb(n, i) for i in range(n + 1)], dtype=float)
          for n in range(1, MAX_DEGREE + 1)}


@dataclass
class BezierSegment:
    """One Bezier curve given by an (n+1, 2) array of control points."""

    control_points: np.ndarray

    def __post_init__(self):
        cp = np.asarray(self.control_points, dtype=float)
        if cp.ndim != 2 or cp.shape[1] != 2 or cp.shape[0] < 2:
            raise ValueError("control_points must be an (n+1, 2) array with n >= 1")
        if not np.all(np.isfinite(cp)):
            raise ValueError("control points must be finite")
        self.control_points = cp

    @property
    def degree(self) -> int:
        return self.control_points.shape[0] - 1


def _check_degree(degree: int):
    if degree < 1:
        raise ValueError(f"degree must be >= 1, got {degree}")
    if degree > MAX_DEGREE:
        raise ValueError(f"degree must be <= {MAX_DEGREE}, got {degree}")


def _check_t(t: float):
    if not (0.0 <= t <= 1.0):
        raise ValueError(f"parameter t must lie in [0, 1], got {t}")


def bernstein_basis(degree: int, t: float) -> np.ndarray:
    """All degree-n Bernstein basis values at t, as an (n+1,) array.

    b_{n,i}(t) = binom(n, i) (1-t)^(n-i) t^i. Non-negative, sums to 1.
    """
    _check_degree(degree)
    _check_t(t)
    return _basis_row(degree, float(t))


def _basis_row(degree, t):
    # Two power ladders: t^i ascending and (1-t)^(n-i) descending.
    # Keeps every factor a plain product, stable at t near 0 or 1.
    s = 1.0 - t
    tp = np.empty(degree + 1)
    sp = np.empty(degree + 1)
    tp[0] = 1.0
    sp[degree] = 1.0
    for i in range(1, degree + 1):
        tp[i] = tp[i - 1] * t
        sp[degree - i] = sp[degree - i + 1] * s
    return _BINOM[degree] * sp * tp


def basis_matrix(degree: int, ts: np.ndarray) -> np.ndarray:
    """Stacked Bernstein basis rows: shape (len(ts), degree+1)."""
    _check_degree(degree)
    ts = np.asarray(ts, dtype=float)
    if ts.size and (ts.min() < 0.0 or ts.max() > 1.0):
        raise ValueError("all parameters must lie in [0, 1]")
    s = 1.0 - ts
    tp = np.ones((ts.size, degree + 1))
    sp = np.ones((ts.size, degree + 1))
    for i in range(1, degree + 1):
        tp[:, i] = tp[:, i - 1] * ts
        sp[:, degree - i] = sp[:, degree - i + 1] * s
    return _BINOM[degree] * sp * tp


def eval_bernstein(segment: BezierSegment, t: float) -> np.ndarray:
    """Evaluate B(t) = sum_i b_{n,i}(t) P_i. Returns an (x, y) pair."""
    b = bernstein_basis(segment.degree, t)
    return b @ segment.control_points


def eval_de_casteljau(segment: BezierSegment, t: float) -> np.ndarray:
    """Evaluate B(t) by repeated t:(1-t) linear interpolation.

    Numerically stable construction; agrees with eval_bernstein to
    roundoff.
    """
    _check_t(t)
    pts = segment.control_points.copy()
    while len(pts) > 1:
        pts = (1.0 - t) * pts[:-1] + t * pts[1:]
    return pts[0]


def sample_segment(segment: BezierSegment, ts) -> np.ndarray:
    """Evaluate the segment at each parameter; returns (len(ts), 2)."""
    ts = np.asarray(ts, dtype=float)
    if ts.size == 0:
        return np.empty((0, 2))
    return basis_matrix(segment.degree, ts) @ segment.control_points


def elevate_degree(segment: BezierSegment) -> BezierSegment:
    """Rewrite the segment as degree n+1 with the identical trace."""
    cp = segment.control_points
    n = segment.degree
    _check_degree(n + 1)
    out = np.empty((n + 2, 2))
    out[0] = cp[0]
    out[n + 1] = cp[n]
    i = np.arange(1, n + 1)[:, None]
    r = i / (n + 1.0)
    out[1:n + 1] = r * cp[:-1][i[:, 0] - 1] + (1.0 - r) * cp[1:][i[:, 0] - 1]
    return BezierSegment(out)

"""Differentiable decoding of piecewise contours and the training loss.

Sampled boundary points are linear in the control points, so the
Jacobian is exact and cheap: row j holds the degree-5 Bernstein basis
of t_j in the columns of its segment's control points, with junction
columns shared between adjacent segments.

Both loss terms use smooth L1 on coordinates normalized by the frame
size (x / width, y / height) with beta = 1, and are averaged over
elements so the two terms are balanced at weight 1 each.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bezier import basis_matrix
from .fitting import PiecewiseContour, flatten

DEFAULT_NUM_SAMPLES = 72


@dataclass
class SampleSet:
    ts: np.ndarray           # (n,) parameters in [0, 1]
    segment_ids: np.ndarray  # (n,) ints in {0..3}


@dataclass
class LossValue:
    total: float
    l_ce: float        # control/extreme point regression term
    l_matching: float  # decoded point matching term
    gradient: np.ndarray  # d total / d flatten(pred), pixel units, (40,)


def sample_parameters(n: int, seed: int) -> SampleSet:
    """n uniform ts, each paired with a uniform segment id. Deterministic per seed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    ts = rng.uniform(0.0, 1.0, n)
    ids = rng.integers(0, 4, n)
    return SampleSet(ts, ids)


# column indices of segment k's six control points in the flatten layout
def _segment_columns(k: int) -> np.ndarray:
    cols = np.empty(6, dtype=int)
    cols[0] = k                 # extreme k
    cols[1:5] = 4 + 4 * k + np.arange(4)
    cols[5] = (k + 1) % 4       # extreme k+1
    return cols


def decode_points(contour: PiecewiseContour, samples: SampleSet) -> np.ndarray:
    """Evaluate each sampled (segment, t) pair; returns (n, 2) points."""
    if contour.degree != 5:
        raise ValueError("decoder requires a degree-5 contour")
    out = np.empty((len(samples.ts), 2))
    for k in range(4):
        sel = samples.segment_ids == k
        if sel.any():
            B = basis_matrix(5, samples.ts[sel])
            out[sel] = B @ contour.segments[k].control_points
    return out


def decode_jacobian(contour: PiecewiseContour, samples: SampleSet) -> np.ndarray:
    """Exact Jacobian of decode_points wrt flatten(contour), shape (2n, 40).

    Output row 2j is x_j, row 2j+1 is y_j. The x rows only touch x
    columns (even flatten indices) and likewise for y.
    """
    n = len(samples.ts)
    J = np.zeros((2 * n, 40))
    B = basis_matrix(5, samples.ts)
    for j in range(n):
        cols = _segment_columns(int(samples.segment_ids[j]))
        J[2 * j, 2 * cols] += B[j]          # accumulates on shared junctions
        J[2 * j + 1, 2 * cols + 1] += B[j]
    return J


def smooth_l1(pred: np.ndarray, target: np.ndarray, beta: float = 1.0):
    """Mean smooth L1 over elements: 0.5 d^2/beta inside |d| < beta, |d| - beta/2 outside.

    Returns (loss, gradient wrt pred).
    """
    pred = np.asarray(pred, dtype=float)
    target = np.asarray(target, dtype=float)
    if pred.shape != target.shape:
        raise ValueError(f"shape mismatch: {pred.shape} vs {target.shape}")
    if beta <= 0:
        raise ValueError("beta must be > 0")
    d = pred - target
    quad = np.abs(d) < beta
    loss = np.where(quad, 0.5 * d * d / beta, np.abs(d) - 0.5 * beta)
    grad = np.where(quad, d / beta, np.sign(d))
    return float(loss.mean()), grad / d.size


def contour_loss(pred: PiecewiseContour, gt: PiecewiseContour,
                 n: int = DEFAULT_NUM_SAMPLES, seed: int = 0,
                 beta: float = 1.0,
                 weight_ce: float = 1.0, weight_matching: float = 1.0) -> LossValue:
    """Combined regression + point-matching loss with its analytic gradient.

    The same sampled (segment, t) set is applied to both contours, so
    the matching term compares corresponding points.
    """
    if pred.degree != 5 or gt.degree != 5:
        raise ValueError("loss requires degree-5 contours")
    if (pred.width, pred.height) != (gt.width, gt.height):
        raise ValueError("contours must share one frame")

    w, h = pred.width, pred.height
    scale40 = np.tile([1.0 / w, 1.0 / h], 20)

    fp, fg = flatten(pred), flatten(gt)
    l_ce, g_ce_norm = smooth_l1(fp * scale40, fg * scale40, beta)
    g_ce = g_ce_norm * scale40

    samples = sample_parameters(n, seed)
    scale2n = np.tile([1.0 / w, 1.0 / h], n)
    pp = decode_points(pred, samples).ravel()
    pg = decode_points(gt, samples).ravel()
    l_match, g_match_norm = smooth_l1(pp * scale2n, pg * scale2n, beta)
    J = decode_jacobian(pred, samples)
    g_match = J.T @ (g_match_norm * scale2n)

    total = weight_ce * l_ce + weight_matching * l_match
    grad = weight_ce * g_ce + weight_matching * g_match
    return LossValue(float(total), float(l_ce), float(l_match), grad)

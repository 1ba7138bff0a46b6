import numpy as np
import pytest

from beziermask import experiments


@pytest.fixture(scope="session")
def blob_masks():
    """Small reusable blob corpus (256x256)."""
    return experiments.blob_corpus(8, seed=11)


@pytest.fixture(scope="session")
def disc_mask():
    """64x64 filled disc of radius 20."""
    yy, xx = np.mgrid[0:64, 0:64]
    return (xx + 0.5 - 32) ** 2 + (yy + 0.5 - 32) ** 2 <= 20 ** 2


def random_segment(rng, degree=5, lo=0.0, hi=100.0):
    from beziermask import BezierSegment
    return BezierSegment(rng.uniform(lo, hi, (degree + 1, 2)))

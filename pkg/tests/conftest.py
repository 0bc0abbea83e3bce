import numpy as np
import pytest

from bitewatch import BiteLabel, MotionTrace


def uniform_trace(values, rate_hz=15.0, gyro_axis=0):
    """Trace with the given roll values on a uniform clock, other channels zero."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    t = np.arange(n) / rate_hz
    gyro = np.zeros((n, 3))
    gyro[:, gyro_axis] = values
    return MotionTrace(t, gyro, np.zeros((n, 3)), rate_hz)


def make_label(t, food="cheese pizza", hand="right", utensil="fork", container="plate", rater="a"):
    return BiteLabel(t=t, food_id=food, hand=hand, utensil=utensil, container=container, rater_id=rater)


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)

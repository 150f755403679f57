"""Statistics shared by all entrainment measures
"""
import enum

from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from pyentrain.errors import DegenerateError


@dataclass(frozen=True)
class StatResult(object):
    """A test statistic, its two-sided p-value and degrees of freedom
    """
    statistic: float
    p: float
    df: int


def _two_sided_p(t_value, df):
    """Two-sided p-value of a t statistic
    """
    if np.isinf(t_value):
        return 0.0
    return float(min(1.0, 2.0 * sps.t.sf(abs(t_value), df)))


def paired_ttest(a, b):
    """Paired t-test of a against b (positive t: a larger)
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("Paired samples differ in length")
    n = len(a)
    if n < 2:
        raise DegenerateError("Need at least two pairs, got %d" % n)
    differences = a - b
    deviation = np.std(differences, ddof=1)
    if not deviation > 0:
        raise DegenerateError("degenerate pairs: differences are constant")
    t_value = np.mean(differences) / (deviation / np.sqrt(n))
    return StatResult(float(t_value), _two_sided_p(t_value, n - 1), n - 1)


def limit_ttest(a, b):
    """`paired_ttest`, taking constant nonzero differences to t = +-inf

    Constant zero differences still raise `DegenerateError`.
    """
    try:
        return paired_ttest(a, b)
    except DegenerateError:
        differences = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
        if len(differences) < 2 or differences[0] == 0:
            raise
        return StatResult(float(np.copysign(np.inf, differences[0])), 0.0,
                          len(differences) - 1)


def pearson(x, y):
    """Pearson's r with the p-value of the two-sided t-test

    Returns (r, p, n).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("Samples differ in length")
    n = len(x)
    if n < 3:
        raise DegenerateError("Need at least three points, got %d" % n)
    dx = x - x.mean()
    dy = y - y.mean()
    norm = np.sqrt(np.dot(dx, dx) * np.dot(dy, dy))
    if not norm > 0:
        raise DegenerateError("Zero variance in correlated samples")
    r = float(np.clip(np.dot(dx, dy) / norm, -1.0, 1.0))
    if abs(r) == 1.0:
        return r, 0.0, n
    t_value = r * np.sqrt((n - 2) / (1.0 - r * r))
    return r, _two_sided_p(t_value, n - 2), n


class Strength(enum.Enum):
    STRONG = 'strong'
    MODERATE = 'moderate'
    WEAK = 'weak'
    NOT_SIGNIFICANT = 'not significant'


class Direction(enum.Enum):
    POSITIVE = 'positive'
    NEGATIVE = 'negative'


@dataclass(frozen=True)
class Label(object):
    """Strength and direction of a correlation
    """
    strength: Strength
    direction: Direction = None

    def __str__(self):
        if self.direction is None:
            return self.strength.value
        return "%s %s" % (self.strength.value, self.direction.value)


def strength_label(r):
    """Label of a correlation coefficient by its magnitude and sign
    """
    magnitude = abs(r)
    if magnitude == 0:
        return Label(Strength.NOT_SIGNIFICANT)
    direction = Direction.POSITIVE if r > 0 else Direction.NEGATIVE
    if magnitude >= 0.7:
        return Label(Strength.STRONG, direction)
    if magnitude >= 0.5:
        return Label(Strength.MODERATE, direction)
    return Label(Strength.WEAK, direction)

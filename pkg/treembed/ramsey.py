# treembed, probabilistic tree embeddings and distance oracles
# Copyright (C) 2026  treembed authors

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.

# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

"""
Monte-Carlo checks of Ramsey padding over the partition hierarchy of
random FRT draws, and simulators for the two selection lemmas behind it.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import ArgumentError, ContractViolation
from .frt import beta_value, choose_delta, sample_beta
from .graph import INF, _rng, exact_distances_many

log = logging.getLogger(__name__)

_CHUNK = 8192


class MetricView(object):
    """
    Finite metric given by a symmetric integer distance matrix.
    """

    def __init__(self, matrix, validate=True):
        self.matrix = np.asarray(matrix, dtype=np.int64)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise ArgumentError('distance matrix must be square')
        if validate:
            self.validate()

    @classmethod
    def from_graph(cls, g):
        exact = exact_distances_many(g, range(g.n))
        rows = [exact[s].d for s in range(g.n)]
        if any(INF in row for row in rows):
            raise ArgumentError('metric views need a connected graph')
        return cls(rows, validate=False)

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def diameter(self):
        return int(self.matrix.max()) if self.n else 0

    def validate(self):
        d = self.matrix
        if np.any(np.diag(d) != 0):
            raise ContractViolation('metric has a nonzero diagonal')
        if not np.array_equal(d, d.T):
            raise ContractViolation('metric is not symmetric')
        off = d[~np.eye(self.n, dtype=bool)]
        if off.size and off.min() < 1:
            raise ContractViolation('distinct points must be at distance >= 1')
        for k in range(self.n):
            if np.any(d > d[:, k, None] + d[None, k, :]):
                raise ContractViolation('triangle inequality fails through point {0}'.format(k))


def padding_alpha(a):
    """
    ``1 - 2**(-1 / (2a))``
    """
    return 1.0 - 2.0 ** (-1.0 / (2 * a))


def padding_bound(n, a):
    return 0.5 * n ** (-2.0 / a)


def default_eps(a):
    return Fraction(1, 2) if a % 2 == 0 else Fraction(a - 1, 2 * a)


def lemma_bound(n, a, eps):
    eps = float(eps)
    return eps * n ** (-1.0 / (a * (1.0 - eps)))


def _check_eps(a, eps):
    eps = Fraction(eps).limit_denominator(10 ** 6)
    if (eps * a).denominator != 1 or not 0 < eps < 1:
        raise ArgumentError('eps must be i/{0} with 0 < i < {0}, got {1}'.format(a, eps))
    return eps


@dataclass
class PaddingEstimate:
    a: int
    trials: int
    frequency: np.ndarray
    stderr: np.ndarray
    bound: float
    alpha: float

    @property
    def minimum(self):
        return float(self.frequency.min())

    def rows(self):
        """
        :return: (vertex, success_freq, stderr, bound) per vertex
        """
        for v, (f, s) in enumerate(zip(self.frequency, self.stderr)):
            yield v, float(f), float(s), self.bound

    def holds(self, sigmas=3.0):
        return bool(np.all(self.frequency + sigmas * self.stderr >= self.bound))


def trial_partitions(mv, rng):
    """
    One draw of (permutation, beta) over the metric.

    :return: (sigma, beta, delta) where ``sigma[i, x]`` is the label of ``x``
        at level ``i``
    """
    n = mv.n
    ranks = rng.permutation(n)
    beta = beta_value(sample_beta(rng))
    delta = choose_delta(mv.diameter)
    sigma = np.empty((delta + 1, n), dtype=np.int64)
    for i in range(delta):
        inside = mv.matrix <= beta * 2.0 ** (delta - i)
        sigma[i] = np.argmin(np.where(inside, ranks[None, :], n), axis=1)
    sigma[delta] = np.arange(n)
    return sigma, beta, delta


def clusters(sigma, i):
    """
    :return: boolean matrix, ``[x, y]`` true iff ``y`` is in ``x``'s level-``i`` cluster
    """
    agree = np.ones((sigma.shape[1], sigma.shape[1]), dtype=bool)
    for j in range(i + 1):
        agree &= sigma[j][:, None] == sigma[j][None, :]
    return agree


def estimate_padding(mv, a, trials, seed, statement_radius=False):
    """
    Per-vertex frequency of being padded at every level: the ball of radius
    ``alpha * beta * 2**(delta - i)`` around ``x`` stays inside ``x``'s
    level-``i`` cluster.

    :param statement_radius: drop ``beta`` from the radius
    """
    if a < 2:
        raise ArgumentError('a must be >= 2, got {0}'.format(a))
    _check_trials(trials)
    n = mv.n
    alpha = padding_alpha(a)
    hits = np.zeros(n, dtype=np.int64)
    for trial in range(trials):
        sigma, beta, delta = trial_partitions(mv, _rng(seed, trial))
        scale = 1.0 if statement_radius else beta
        agree = np.ones((n, n), dtype=bool)
        padded = np.ones(n, dtype=bool)
        for i in range(delta + 1):
            agree &= sigma[i][:, None] == sigma[i][None, :]
            ball = mv.matrix <= alpha * scale * 2.0 ** (delta - i)
            padded &= np.all(agree | ~ball, axis=1)
        hits += padded
    frequency = hits / trials
    stderr = np.sqrt(frequency * (1 - frequency) / trials)
    estimate = PaddingEstimate(a, trials, frequency, stderr, padding_bound(n, a), alpha)
    log.info('padding a=%d over %d trials: min frequency %.5f, bound %.5f', a, trials, estimate.minimum,
             estimate.bound)
    return estimate


@dataclass
class LemmaEstimate:
    probability: float
    stderr: float
    bound: float
    trials: int

    def holds(self, sigmas=3.0):
        return self.probability + sigmas * self.stderr >= self.bound


def _selection_probs(count, probs):
    if probs is None:
        return np.array([1.0 / (i + 1) for i in range(1, count + 1)])
    probs = np.asarray(probs, dtype=float)
    limits = 1.0 / (np.arange(1, count + 1) + 1)
    if probs.shape != (count,) or np.any(probs < 0) or np.any(probs > limits + 1e-12):
        raise ArgumentError('selection probability p_i must lie in [0, 1/(i+1)]')
    return probs


def _check_trials(trials):
    if trials < 1:
        raise ArgumentError('trials must be >= 1, got {0}'.format(trials))


def _estimate(successes, trials, n, a, eps):
    p = successes / trials
    return LemmaEstimate(p, math.sqrt(p * (1 - p) / trials), lemma_bound(n, a, eps), trials)


def simulate_bucket_lemma(values, a, trials, seed, probs=None, eps=None):
    """
    Probability that a uniformly chosen bucket of ``1..a`` holds no selected
    value, value ``i`` being selected independently with probability ``p_i``.
    """
    if a < 2:
        raise ArgumentError('a must be >= 2')
    _check_trials(trials)
    values = np.asarray(values, dtype=np.int64)
    if values.size and (values.min() < 1 or values.max() > a):
        raise ArgumentError('values must lie in 1..{0}'.format(a))
    eps = _check_eps(a, default_eps(a) if eps is None else eps)
    probs = _selection_probs(values.size, probs)
    rng = _rng(seed)
    successes = 0
    for start in range(0, trials, _CHUNK):
        size = min(_CHUNK, trials - start)
        bucket = rng.integers(1, a + 1, size=size)
        if not values.size:
            successes += size
            continue
        selected = rng.random((size, values.size)) < probs[None, :]
        successes += int(np.count_nonzero(~np.any(selected & (values[None, :] == bucket[:, None]), axis=1)))
    return _estimate(successes, trials, values.size + 1, a, eps)


def simulate_range_lemma(points, a, eps, trials, seed, probs=None):
    """
    Probability that no selected point falls in the window
    ``[b - 1/2a, b + 1/2a) mod 1`` for a uniform ``b``.
    """
    if a < 2:
        raise ArgumentError('a must be >= 2')
    _check_trials(trials)
    eps = _check_eps(a, eps)
    points = np.asarray(points, dtype=float)
    if points.size and (points.min() < 0 or points.max() >= 1):
        raise ArgumentError('points must lie in [0, 1)')
    probs = _selection_probs(points.size, probs)
    rng = _rng(seed)
    half = 1.0 / (2 * a)
    successes = 0
    for start in range(0, trials, _CHUNK):
        size = min(_CHUNK, trials - start)
        b = rng.random(size)
        if not points.size:
            successes += size
            continue
        selected = rng.random((size, points.size)) < probs[None, :]
        inside = np.mod(points[None, :] - b[:, None] + half, 1.0) < 2 * half
        successes += int(np.count_nonzero(~np.any(selected & inside, axis=1)))
    return _estimate(successes, trials, points.size + 1, a, eps)

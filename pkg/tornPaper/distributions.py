#
# Copyright 2024 The tornPaper Authors
#
# Licensed under the Apache License, Version 2.0 (the "Apache License")
# with the following modification; you may not use this file except in
# compliance with the Apache License and the following modification to it:
# Section 6. Trademarks. is deleted and replaced with:
#
# 6. Trademarks. This License does not grant permission to use the trade
#    names, trademarks, service marks, or product names of the Licensor
#    and its affiliates, except as required to comply with Section 4(c) of
#    the License and to reproduce the content of the NOTICE file.
#
# You may obtain a copy of the Apache License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the Apache License with the above modification is
# distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
# KIND, either express or implied. See the Apache License for the specific
# language governing permissions and limitations under the Apache License.
#

"""
Fragment length distributions and fragment deletion policies.

Both are described at a finite block length ``n`` (sampling, probability mass,
deletion probability) and in the asymptotic regime where lengths are measured
in multiples ``beta`` of ``log2(n)`` (the density ``h(beta)`` and the limiting
deletion probability ``d_hat(beta)``).

All logarithms are base 2.
"""
from __future__ import absolute_import

import json
import logging
import math
from collections import namedtuple

import numpy as np

from .errors import DensityUndefinedError, NumericError, ParameterError

if False:
    from typing import *

_logger = logging.getLogger(__name__)

GEOMETRIC = 'geometric'
UNIFORM = 'uniform'
FIXED = 'fixed'
MODEL_KINDS = (GEOMETRIC, UNIFORM, FIXED)

ZERO = 'zero'
CONSTANT = 'constant'
EXP_LENGTH = 'exp'
POLICY_KINDS = (ZERO, CONSTANT, EXP_LENGTH)

# Probability mass left out when a support is truncated for summation.
PMF_TAIL = 1e-12
_MAX_SUPPORT = 10 ** 8

# Slack applied before taking ceilings of real-valued length cutoffs, so that
# e.g. 1.0 * log2(1024) does not round up to 11.
_CUTOFF_SLACK = 1e-9


def Log2(n):
    # type: (int) -> float
    if n < 2:
        raise ParameterError('Block length must be at least 2, got '
                             '{0!r}'.format(n))
    return math.log2(n)


def MinKeptLength(n, theta):
    # type: (int, float) -> int
    """Return the shortest fragment length kept by a discard threshold of
    ``theta * log2(n)`` bits, i.e. ``ceil(theta * log2(n))``.

    Parameters
    ----------
    n : int
    theta : float

    Returns
    -------
    int
    """
    if theta < 0:
        raise ParameterError('Threshold must be nonnegative, got '
                             '{0!r}'.format(theta))
    return max(0, int(math.ceil(theta * Log2(n) - _CUTOFF_SLACK)))


class FragmentLengthModel(namedtuple('FragmentLengthModel',
                                     ['kind', 'meanLen', 'gamma'])):
    """Distribution of the fragment lengths ``N_i``.

    ``meanLen`` is the mean length in bits for the Geometric and Fixed kinds.
    It may be omitted when the model is only used asymptotically (capacity
    formulas take ``alpha`` directly). ``gamma`` is the Uniform support width
    as a multiple of ``log2(n)``.
    """
    __slots__ = ()

    def __new__(cls, kind, meanLen=None, gamma=None):
        if kind not in MODEL_KINDS:
            raise ParameterError('Unknown fragment model {0!r}'.format(kind))
        if kind == UNIFORM:
            if gamma is None or not gamma > 0:
                raise ParameterError('Uniform model needs gamma > 0, got '
                                     '{0!r}'.format(gamma))
            gamma = float(gamma)
            meanLen = None
        else:
            if meanLen is not None:
                if not meanLen > 0:
                    raise ParameterError('Mean fragment length must be '
                                         'positive, got {0!r}'.format(meanLen))
                if kind == GEOMETRIC and meanLen < 1:
                    raise ParameterError('Geometric lengths start at 1, so the '
                                         'mean must be at least 1, got '
                                         '{0!r}'.format(meanLen))
                if kind == FIXED and int(round(meanLen)) < 1:
                    raise ParameterError('Fixed fragment length rounds to '
                                         'zero: {0!r}'.format(meanLen))
                meanLen = float(meanLen)
            gamma = None
        return super(FragmentLengthModel, cls).__new__(cls, kind, meanLen,
                                                       gamma)

    @classmethod
    def Geometric(cls, meanLen=None):
        return cls(GEOMETRIC, meanLen=meanLen)

    @classmethod
    def Uniform(cls, gamma):
        return cls(UNIFORM, gamma=gamma)

    @classmethod
    def Fixed(cls, meanLen=None):
        return cls(FIXED, meanLen=meanLen)

    @property
    def hasDensity(self):
        """Whether ``h(beta)`` exists for this model."""
        return self.kind != FIXED

    def _RequireMeanLen(self):
        if self.meanLen is None:
            raise ParameterError('{0} model has no mean length; build it with '
                                 'meanLen or WithAlpha(alpha, n)'.format(
                                     self.kind))
        return self.meanLen

    def FixedLength(self):
        # type: () -> int
        return int(round(self._RequireMeanLen()))

    def MaxLength(self, n):
        # type: (int) -> Optional[int]
        """Largest length in the support at block length ``n``, or None for an
        unbounded support.
        """
        if self.kind == UNIFORM:
            return int(math.ceil(self.gamma * Log2(n) - _CUTOFF_SLACK))
        if self.kind == FIXED:
            return self.FixedLength()
        return None

    def Mean(self, n):
        # type: (int) -> float
        """Expected fragment length ``l_n`` at block length ``n``."""
        if self.kind == UNIFORM:
            return self.MaxLength(n) / 2.0
        if self.kind == FIXED:
            return float(self.FixedLength())
        return self._RequireMeanLen()

    def WithAlpha(self, alpha, n=None):
        # type: (float, Optional[int]) -> FragmentLengthModel
        """Return a model of the same kind whose alpha is ``alpha``.

        Geometric and Fixed models get ``meanLen = log2(n) / alpha`` (or no
        mean length when ``n`` is None); Uniform models get ``gamma = 2 /
        alpha`` since their mean is half the support width.
        """
        if not alpha > 0:
            raise ParameterError('alpha must be positive, got '
                                 '{0!r}'.format(alpha))
        if self.kind == UNIFORM:
            return FragmentLengthModel.Uniform(2.0 / alpha)
        meanLen = None if n is None else Log2(n) / alpha
        return FragmentLengthModel(self.kind, meanLen=meanLen)


class DeletionPolicy(namedtuple('DeletionPolicy', ['kind', 'eps', 'gamma'])):
    """Probability ``d(len)`` that a fragment of a given length is lost."""
    __slots__ = ()

    def __new__(cls, kind, eps=None, gamma=None):
        if kind not in POLICY_KINDS:
            raise ParameterError('Unknown deletion policy {0!r}'.format(kind))
        if kind == CONSTANT:
            if eps is None or not 0.0 <= eps <= 1.0:
                raise ParameterError('Constant deletion needs eps in [0, 1], '
                                     'got {0!r}'.format(eps))
            eps = float(eps)
            gamma = None
        elif kind == EXP_LENGTH:
            if gamma is None or not gamma > 0:
                raise ParameterError('Length-dependent deletion needs '
                                     'gamma > 0, got {0!r}'.format(gamma))
            gamma = float(gamma)
            eps = None
        else:
            eps = gamma = None
        return super(DeletionPolicy, cls).__new__(cls, kind, eps, gamma)

    @classmethod
    def Zero(cls):
        return cls(ZERO)

    @classmethod
    def Constant(cls, eps):
        return cls(CONSTANT, eps=eps)

    @classmethod
    def ExpLength(cls, gamma):
        return cls(EXP_LENGTH, gamma=gamma)

    def Probs(self, lengths, n):
        # type: (np.ndarray, int) -> np.ndarray
        """Vectorised ``d(len)`` over an array of lengths."""
        lengths = np.asarray(lengths, dtype=float)
        if self.kind == ZERO:
            return np.zeros_like(lengths)
        if self.kind == CONSTANT:
            return np.full_like(lengths, self.eps)
        return np.exp(-self.gamma * lengths / Log2(n))


def SampleLengths(model, n, size, rng):
    # type: (FragmentLengthModel, int, int, np.random.Generator) -> np.ndarray
    """Draw ``size`` i.i.d. lengths from ``model`` at block length ``n``.

    Parameters
    ----------
    model : FragmentLengthModel
    n : int
    size : int
    rng : np.random.Generator

    Returns
    -------
    np.ndarray
        int64 array of lengths.
    """
    Log2(n)
    if model.kind == GEOMETRIC:
        return rng.geometric(1.0 / model._RequireMeanLen(),
                             size=size).astype(np.int64)
    if model.kind == UNIFORM:
        return rng.integers(0, model.MaxLength(n) + 1, size=size,
                            dtype=np.int64)
    return np.full(size, model.FixedLength(), dtype=np.int64)


def SampleLength(model, n, rng):
    # type: (FragmentLengthModel, int, np.random.Generator) -> int
    """Draw a single fragment length."""
    return int(SampleLengths(model, n, 1, rng)[0])


def Pmf(model, n, length):
    # type: (FragmentLengthModel, int, int) -> float
    """Probability that a fragment has exactly ``length`` bits.

    Parameters
    ----------
    model : FragmentLengthModel
    n : int
    length : int

    Returns
    -------
    float
    """
    if length < 0:
        raise ParameterError('Length must be nonnegative, got '
                             '{0!r}'.format(length))
    Log2(n)
    if model.kind == GEOMETRIC:
        if length < 1:
            return 0.0
        q = 1.0 / model._RequireMeanLen()
        return q * (1.0 - q) ** (length - 1)
    if model.kind == UNIFORM:
        top = model.MaxLength(n)
        return 1.0 / (top + 1) if length <= top else 0.0
    return 1.0 if length == model.FixedLength() else 0.0


def Support(model, n, tail=PMF_TAIL):
    # type: (FragmentLengthModel, int, float) -> Tuple[np.ndarray, np.ndarray]
    """Return ``(lengths, masses)`` covering all but at most ``tail`` of the
    probability mass.

    Raises
    ------
    NumericError
        If the truncation point needed for ``tail`` is unreasonably large.
    """
    Log2(n)
    if model.kind == FIXED:
        return (np.array([model.FixedLength()], dtype=np.int64),
                np.array([1.0]))
    if model.kind == UNIFORM:
        top = model.MaxLength(n)
        lengths = np.arange(0, top + 1, dtype=np.int64)
        return lengths, np.full(top + 1, 1.0 / (top + 1))

    q = 1.0 / model._RequireMeanLen()
    if q >= 1.0:
        return np.array([1], dtype=np.int64), np.array([1.0])
    # P(N > k) = (1 - q)^k
    top = int(math.ceil(math.log(tail) / math.log1p(-q)))
    if top > _MAX_SUPPORT:
        raise NumericError('Geometric support truncation unreachable',
                           {'meanLen': model.meanLen, 'tail': tail,
                            'truncation': top})
    lengths = np.arange(1, top + 1, dtype=np.int64)
    masses = q * np.power(1.0 - q, lengths - 1)
    _logger.debug('Truncated geometric support at %d (tail < %g)', top, tail)
    return lengths, masses


def HBeta(model, alpha, beta):
    # type: (FragmentLengthModel, float, float) -> float
    """Limiting rescaled length density ``h(beta)``.

    Parameters
    ----------
    model : FragmentLengthModel
    alpha : float
        Ignored by the Uniform model, whose density only depends on gamma.
    beta : float

    Returns
    -------
    float
    """
    if beta < 0:
        raise ParameterError('beta must be nonnegative, got {0!r}'.format(beta))
    if model.kind == GEOMETRIC:
        if not alpha > 0:
            raise ParameterError('alpha must be positive, got '
                                 '{0!r}'.format(alpha))
        return alpha * math.exp(-alpha * beta)
    if model.kind == UNIFORM:
        return 1.0 / model.gamma if beta <= model.gamma else 0.0
    raise DensityUndefinedError('Density undefined for the fixed-length model; '
                                'use its point-mass forms instead')


def DHat(policy, beta):
    # type: (DeletionPolicy, float) -> float
    """Limiting deletion probability ``d_hat(beta)`` of a fragment of
    ``beta * log2(n)`` bits.
    """
    if beta < 0:
        raise ParameterError('beta must be nonnegative, got {0!r}'.format(beta))
    if policy.kind == ZERO:
        return 0.0
    if policy.kind == CONSTANT:
        return policy.eps
    return math.exp(-policy.gamma * beta)


def DeletionProb(policy, length, n):
    # type: (DeletionPolicy, int, int) -> float
    """Finite-n deletion probability ``d(length)``."""
    return float(policy.Probs(np.array([length]), n)[0])


def ImpliedAlpha(model, alpha=None):
    # type: (FragmentLengthModel, Optional[float]) -> float
    """Resolve the asymptotic alpha for ``model``.

    A Uniform model on ``[0, gamma log n]`` has mean ``gamma log n / 2``, so its
    alpha is fixed at ``2 / gamma`` and any ``alpha`` argument is ignored.
    """
    if model.kind == UNIFORM:
        implied = 2.0 / model.gamma
        if alpha is not None and abs(alpha - implied) > 1e-12:
            _logger.debug('Ignoring alpha=%r for uniform model; using 2/gamma'
                          '=%r', alpha, implied)
        return implied
    if alpha is None or not alpha > 0:
        raise ParameterError('alpha must be positive, got {0!r}'.format(alpha))
    return float(alpha)


def AlphaAtN(model, n):
    # type: (FragmentLengthModel, int) -> float
    """Finite-n alpha, ``log2(n) / l_n``."""
    return Log2(n) / model.Mean(n)


# Configuration ----------------------------------------------------------------
def ModelToConfig(model):
    # type: (FragmentLengthModel) -> Dict[str, Any]
    config = {'kind': model.kind}
    if model.meanLen is not None:
        config['mean_len'] = model.meanLen
    if model.gamma is not None:
        config['gamma'] = model.gamma
    return config


def ModelFromConfig(config):
    # type: (Dict[str, Any]) -> FragmentLengthModel
    try:
        kind = config['kind']
    except (KeyError, TypeError):
        raise ParameterError('Fragment config needs a "kind": '
                             '{0!r}'.format(config))
    return FragmentLengthModel(kind, meanLen=config.get('mean_len'),
                               gamma=config.get('gamma'))


def PolicyToConfig(policy):
    # type: (DeletionPolicy) -> Dict[str, Any]
    config = {'kind': policy.kind}
    if policy.eps is not None:
        config['eps'] = policy.eps
    if policy.gamma is not None:
        config['gamma'] = policy.gamma
    return config


def PolicyFromConfig(config):
    # type: (Dict[str, Any]) -> DeletionPolicy
    try:
        kind = config['kind']
    except (KeyError, TypeError):
        raise ParameterError('Deletion config needs a "kind": '
                             '{0!r}'.format(config))
    return DeletionPolicy(kind, eps=config.get('eps'),
                          gamma=config.get('gamma'))


def LoadChannelConfig(source):
    # type: (Union[str, Dict[str, Any]]) -> Tuple[Optional[FragmentLengthModel], Optional[DeletionPolicy]]
    """Read a ``{"fragment": ..., "deletion": ...}`` object.

    Parameters
    ----------
    source : Union[str, Dict[str, Any]]
        A path to a JSON file, or an already parsed mapping.

    Returns
    -------
    Tuple[Optional[FragmentLengthModel], Optional[DeletionPolicy]]
        Either entry is None when its key is absent.
    """
    if not isinstance(source, dict):
        try:
            with open(source) as f:
                source = json.load(f)
        except (IOError, OSError, ValueError) as e:
            raise ParameterError('Could not read channel config: '
                                 '{0}'.format(e))
    model = policy = None
    if 'fragment' in source:
        model = ModelFromConfig(source['fragment'])
    if 'deletion' in source:
        policy = PolicyFromConfig(source['deletion'])
    return model, policy

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
Coverage fraction F, alignment cost A, the noiseless capacity ``F - A`` and
the inner/outer bounds of the noisy channel.

Thresholds ``theta`` are expressed in multiples of ``log2(n)``: a fragment of
``N`` bits is counted when ``N >= theta * log2(n)``.
"""
from __future__ import absolute_import

import logging
import math
from collections import namedtuple

import numpy as np

from .distributions import (CONSTANT, EXP_LENGTH, FIXED, GEOMETRIC, UNIFORM,
                            ZERO, DHat, DeletionPolicy, HBeta, ImpliedAlpha,
                            Log2, MinKeptLength, ModelToConfig, PolicyToConfig,
                            Support)
from .channel import ValidateCrossover
from .errors import ConsistencyError, ParameterError, ThresholdUndefinedError
from .quadrature import AdaptiveSimpson

if False:
    from typing import *
    from .distributions import FragmentLengthModel

_logger = logging.getLogger(__name__)

QUADRATURE_TOL = 1e-9
TAIL_TOL = 1e-12
CONSISTENCY_TOL = 1e-6

CLOSED_FORM = 'closed_form'
QUADRATURE = 'quadrature'
FINITE_N = 'finite_n'

# Tolerance on ``1/alpha >= theta`` comparisons for point-mass models.
_EDGE_TOL = 1e-12


def BinaryEntropy(q):
    # type: (float) -> float
    """Binary entropy in bits, with ``0 log 0 = 0``."""
    if not 0.0 <= q <= 1.0:
        raise ParameterError('Entropy argument must lie in [0, 1], got '
                             '{0!r}'.format(q))
    if q == 0.0 or q == 1.0:
        return 0.0
    return -q * math.log2(q) - (1.0 - q) * math.log2(1.0 - q)


def OptimalFilterThreshold(p):
    # type: (float) -> float
    """Smallest discard threshold at which a kept fragment carries more BSC
    capacity than it costs to align: ``1 / (1 - H(p))``.
    """
    return 1.0 / (1.0 - BinaryEntropy(ValidateCrossover(p)))


def OuterAlignmentThreshold(p):
    # type: (float) -> float
    """Alignment-cost threshold of the outer bound, ``2 / (1 - H(2p))``."""
    ValidateCrossover(p)
    # 1 - H(2p) only bounds anything while 2p < 0.5
    capacity = 1.0 - BinaryEntropy(2.0 * p) if p < 0.25 else 0.0
    if capacity <= 0.0:
        raise ThresholdUndefinedError(
            'Outer bound threshold 2/(1-H(2p)) is undefined for p={0!r}: '
            '1-H(2p) <= 0 (requires p < 0.25)'.format(p))
    return 2.0 / capacity


# F and A ----------------------------------------------------------------------
def _FixedKeepFactor(policy, alpha, theta):
    invAlpha = 1.0 / alpha
    if invAlpha + _EDGE_TOL < theta:
        return 0.0
    return 1.0 - DHat(policy, invAlpha)


def _UpperLimit(model, alpha, tol=TAIL_TOL):
    """Point beyond which the coverage integrand's tail mass is below
    ``tol``.
    """
    if model.kind == UNIFORM:
        return model.gamma
    # tail of alpha * beta * h(beta) is (1 + alpha B) exp(-alpha B)
    upper = 1.0
    while (1.0 + alpha * upper) * math.exp(-alpha * upper) >= tol:
        upper *= 2.0
    return upper


def _DensityIntegral(model, policy, alpha, theta, weight):
    upper = _UpperLimit(model, alpha)
    if theta >= upper:
        return 0.0

    def integrand(beta):
        return weight(beta) * (1.0 - DHat(policy, beta)) * HBeta(model, alpha,
                                                                  beta)

    return alpha * AdaptiveSimpson(absTol=QUADRATURE_TOL).Integrate(
        integrand, theta, upper)


def _ValidateArgs(alpha, theta):
    if not alpha > 0:
        raise ParameterError('alpha must be positive, got {0!r}'.format(alpha))
    if theta < 0:
        raise ParameterError('theta must be nonnegative, got '
                             '{0!r}'.format(theta))


def CoverageFraction(model, policy, alpha, theta):
    # type: (FragmentLengthModel, DeletionPolicy, float, float) -> float
    """Coverage fraction ``F_d{theta log n}``.

    Density models are integrated numerically,
    ``F = alpha * int_theta^inf beta (1 - d_hat(beta)) h(beta) dbeta``; the
    Fixed model is evaluated as a point mass at ``beta = 1/alpha``.

    Parameters
    ----------
    model : FragmentLengthModel
    policy : DeletionPolicy
    alpha : float
        Ignored for Uniform models, whose alpha is ``2/gamma``.
    theta : float

    Returns
    -------
    float
    """
    alpha = ImpliedAlpha(model, alpha)
    _ValidateArgs(alpha, theta)
    if model.kind == FIXED:
        return _FixedKeepFactor(policy, alpha, theta)
    return _DensityIntegral(model, policy, alpha, theta, lambda beta: beta)


def AlignmentCost(model, policy, alpha, theta):
    # type: (FragmentLengthModel, DeletionPolicy, float, float) -> float
    """Alignment cost ``A_d{theta log n}``,
    ``alpha * int_theta^inf (1 - d_hat(beta)) h(beta) dbeta``.
    """
    alpha = ImpliedAlpha(model, alpha)
    _ValidateArgs(alpha, theta)
    if model.kind == FIXED:
        return alpha * _FixedKeepFactor(policy, alpha, theta)
    return _DensityIntegral(model, policy, alpha, theta, lambda beta: 1.0)


def ClosedFormFA(model, policy, alpha, theta):
    # type: (FragmentLengthModel, DeletionPolicy, float, float) -> Optional[Tuple[float, float]]
    """Closed-form ``(F, A)`` at threshold ``theta``, or None when no closed
    form is implemented for the model/policy pair.
    """
    alpha = ImpliedAlpha(model, alpha)
    _ValidateArgs(alpha, theta)
    if model.kind == FIXED:
        keep = _FixedKeepFactor(policy, alpha, theta)
        return keep, alpha * keep

    if model.kind == GEOMETRIC:
        decay = math.exp(-alpha * theta)
        coverage = (1.0 + alpha * theta) * decay
        alignment = alpha * decay
        if policy.kind == EXP_LENGTH:
            rate = alpha + policy.gamma
            lost = alpha * alpha * math.exp(-rate * theta)
            coverage -= lost * (1.0 + rate * theta) / (rate * rate)
            alignment -= lost / rate
            return coverage, alignment
    else:
        if policy.kind == EXP_LENGTH:
            return None
        gamma = model.gamma
        if theta >= gamma:
            return 0.0, 0.0
        coverage = (gamma * gamma - theta * theta) / (gamma * gamma)
        alignment = 2.0 * (gamma - theta) / (gamma * gamma)

    if policy.kind == CONSTANT:
        coverage *= 1.0 - policy.eps
        alignment *= 1.0 - policy.eps
    return coverage, alignment


def ClosedFormCapacity(model, policy, alpha):
    # type: (FragmentLengthModel, DeletionPolicy, float) -> Optional[float]
    """Capacity expressions for the standard model/policy pairs, or None.

    Geometric with no, constant or length-dependent deletion; Uniform with no
    or constant deletion; Fixed with any policy.
    """
    alpha = ImpliedAlpha(model, alpha)
    if model.kind == GEOMETRIC:
        base = math.exp(-alpha)
        if policy.kind == ZERO:
            return base
        if policy.kind == CONSTANT:
            return (1.0 - policy.eps) * base
        gamma = policy.gamma
        return base * (1.0 - alpha * alpha * math.exp(-gamma) /
                       (alpha + gamma) ** 2)
    if model.kind == UNIFORM:
        if policy.kind == EXP_LENGTH:
            return None
        gamma = model.gamma
        value = ((gamma - 1.0) / gamma) ** 2 if gamma >= 1.0 else 0.0
        if policy.kind == CONSTANT:
            value *= 1.0 - policy.eps
        return value
    if 1.0 / alpha + _EDGE_TOL < 1.0:
        return 0.0
    return (1.0 - DHat(policy, 1.0 / alpha)) * (1.0 - alpha)


def ShufflingCapacity(alpha):
    # type: (float) -> float
    """Capacity ``(1 - alpha)+`` of the fixed-length shuffling channel."""
    return max(0.0, 1.0 - alpha)


def MinFragmentConditionHolds(p, alpha):
    # type: (float, float) -> bool
    """Whether every fixed-length fragment clears the outer bound's alignment
    threshold, ``1/alpha >= 2 / (1 - H(2p))``.
    """
    return 1.0 / alpha + _EDGE_TOL >= OuterAlignmentThreshold(p)


def NoisyShufflingCapacity(p, alpha):
    # type: (float, float) -> float
    """``1 - H(p) - alpha``, the capacity when all fragments have the same
    length and that length is at least ``2 log n / (1 - H(2p))``.
    """
    if not MinFragmentConditionHolds(p, alpha):
        raise ParameterError(
            'Fragments of {0:g} log n bits are shorter than the 2/(1-H(2p)) = '
            '{1:g} threshold'.format(1.0 / alpha, OuterAlignmentThreshold(p)))
    return 1.0 - BinaryEntropy(p) - alpha


# Reports ----------------------------------------------------------------------
class CapacityReport(namedtuple('CapacityReport',
                                ['F', 'A', 'value', 'theta', 'method',
                                 'closedForm', 'params'])):
    __slots__ = ()

    @property
    def difference(self):
        if self.closedForm is None:
            return None
        return self.value - self.closedForm

    def ToJson(self):
        # type: () -> Dict[str, Any]
        return {
            'F': self.F,
            'A': self.A,
            'value': self.value,
            'theta': self.theta,
            'method': self.method,
            'closed_form': self.closedForm,
            'difference': self.difference,
            'params': self.params,
        }


class NoisyBounds(namedtuple('NoisyBounds',
                             ['p', 'rIn', 'rOut', 'thetaIn', 'thetaOutF',
                              'thetaOutA', 'method', 'params'])):
    __slots__ = ()

    def ToJson(self):
        # type: () -> Dict[str, Any]
        return {
            'p': self.p,
            'r_in': self.rIn,
            'r_out': self.rOut,
            'theta_in': self.thetaIn,
            'theta_out_F': self.thetaOutF,
            'theta_out_A': self.thetaOutA,
            'method': self.method,
            'params': self.params,
        }


def _Params(model, policy, alpha, **extra):
    params = {'fragment': ModelToConfig(model),
              'deletion': PolicyToConfig(policy),
              'alpha': alpha}
    params.update(extra)
    return params


def CapacityNoiseless(model, policy, alpha):
    # type: (FragmentLengthModel, DeletionPolicy, float) -> CapacityReport
    """Noiseless capacity ``F{log n} - A{log n}``.

    For density models the value comes from quadrature and is checked against
    `ClosedFormCapacity` whenever one exists.

    Raises
    ------
    ConsistencyError
        If quadrature and closed form differ by more than 1e-6.
    """
    alpha = ImpliedAlpha(model, alpha)
    coverage = CoverageFraction(model, policy, alpha, 1.0)
    alignment = AlignmentCost(model, policy, alpha, 1.0)
    value = coverage - alignment
    closed = ClosedFormCapacity(model, policy, alpha)
    method = CLOSED_FORM if model.kind == FIXED else QUADRATURE
    if closed is not None and abs(value - closed) > CONSISTENCY_TOL:
        raise ConsistencyError('Quadrature disagrees with the closed form',
                               {'quadrature': value, 'closed_form': closed,
                                'model': model.kind, 'deletion': policy.kind,
                                'alpha': alpha})
    return CapacityReport(coverage, alignment, value, 1.0, method, closed,
                          _Params(model, policy, alpha))


def InnerBoundAtThreshold(model, p, alpha, theta):
    # type: (FragmentLengthModel, float, float, float) -> float
    """Unclamped achievable rate ``(1 - H(p)) F{theta} - A{theta}`` of the
    decoder that discards fragments shorter than ``theta log n``.
    """
    policy = DeletionPolicy.Zero()
    bscCapacity = 1.0 - BinaryEntropy(ValidateCrossover(p))
    return (bscCapacity * CoverageFraction(model, policy, alpha, theta) -
            AlignmentCost(model, policy, alpha, theta))


def NoisyInnerBound(model, p, alpha):
    # type: (FragmentLengthModel, float, float) -> float
    """Achievable rate ``R_in`` at the optimal threshold ``1/(1 - H(p))``,
    clamped at 0.
    """
    theta = OptimalFilterThreshold(p)
    return max(0.0, InnerBoundAtThreshold(model, p, alpha, theta))


def NoisyOuterBound(model, p, alpha):
    # type: (FragmentLengthModel, float, float) -> float
    """Converse bound ``R_out = (1 - H(p)) F{1} - A{2/(1 - H(2p))}``, clamped
    at 0.

    Raises
    ------
    ThresholdUndefinedError
        If ``p >= 0.25``.
    """
    thetaA = OuterAlignmentThreshold(p)
    policy = DeletionPolicy.Zero()
    bscCapacity = 1.0 - BinaryEntropy(p)
    value = (bscCapacity * CoverageFraction(model, policy, alpha, 1.0) -
             AlignmentCost(model, policy, alpha, thetaA))
    return max(0.0, value)


def ComputeNoisyBounds(model, p, alpha):
    # type: (FragmentLengthModel, float, float) -> NoisyBounds
    alpha = ImpliedAlpha(model, alpha)
    rIn = NoisyInnerBound(model, p, alpha)
    rOut = NoisyOuterBound(model, p, alpha)
    return NoisyBounds(p, rIn, rOut, OptimalFilterThreshold(p), 1.0,
                       OuterAlignmentThreshold(p), QUADRATURE,
                       _Params(model, DeletionPolicy.Zero(), alpha))


# Finite n ---------------------------------------------------------------------
def FiniteNFA(model, policy, n, theta):
    # type: (FragmentLengthModel, DeletionPolicy, int, float) -> Tuple[float, float]
    """Pre-limit coverage fraction and alignment cost at block length ``n``,
    by direct summation over the length pmf.

    Returns
    -------
    Tuple[float, float]
        ``F_n = E[N (1 - d(N)) 1{N >= theta log n}] / l_n`` and
        ``A_n = (log n / l_n) E[(1 - d(N)) 1{N >= theta log n}]``.
    """
    lengths, masses = Support(model, n)
    weights = masses * (1.0 - policy.Probs(lengths, n))
    # zero-length draws never become fragments
    cutoff = max(1, MinKeptLength(n, theta))
    weights = np.where(lengths >= cutoff, weights, 0.0)
    meanLen = model.Mean(n)
    coverage = float(np.dot(lengths, weights)) / meanLen
    alignment = Log2(n) * float(weights.sum()) / meanLen
    return coverage, alignment


def FiniteNBounds(model, n, p):
    # type: (FragmentLengthModel, int, float) -> NoisyBounds
    """The noisy inner and outer bound expressions evaluated at block length
    ``n`` with `FiniteNFA` in place of the limits.
    """
    policy = DeletionPolicy.Zero()
    bscCapacity = 1.0 - BinaryEntropy(ValidateCrossover(p))
    thetaIn = OptimalFilterThreshold(p)
    thetaOutA = OuterAlignmentThreshold(p)
    coverageIn, alignmentIn = FiniteNFA(model, policy, n, thetaIn)
    coverageOut = FiniteNFA(model, policy, n, 1.0)[0]
    alignmentOut = FiniteNFA(model, policy, n, thetaOutA)[1]
    rIn = max(0.0, bscCapacity * coverageIn - alignmentIn)
    rOut = max(0.0, bscCapacity * coverageOut - alignmentOut)
    return NoisyBounds(p, rIn, rOut, thetaIn, 1.0, thetaOutA, FINITE_N,
                       {'fragment': ModelToConfig(model), 'n': n})

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
Adaptive Simpson quadrature over finite intervals.
"""
from __future__ import absolute_import

import logging

from .errors import NumericError

if False:
    from typing import *

_logger = logging.getLogger(__name__)


class AdaptiveSimpson(object):
    """Integral of a one-dimensional function by recursive interval bisection.

    An interval is accepted once the two-panel and one-panel Simpson estimates
    agree to within ``15 * tol`` (the Richardson error estimate), where ``tol``
    is halved at every bisection so the total error stays below ``absTol``.
    """
    __slots__ = ('absTol', 'maxDepth', 'minDepth', 'evaluations')

    def __init__(self, absTol=1e-9, maxDepth=50, minDepth=4):
        # type: (float, int, int) -> None
        """
        Parameters
        ----------
        absTol : float
            Absolute accuracy requested for the whole integral.
        maxDepth : int
            Bisection depth after which the integration is declared failed.
        minDepth : int
            Bisections always performed before accepting an estimate, so that
            a lucky agreement on a coarse panel is not trusted.
        """
        self.absTol = absTol
        self.maxDepth = maxDepth
        self.minDepth = minDepth
        self.evaluations = 0

    def _Eval(self, f, x):
        self.evaluations += 1
        return f(x)

    def _Panel(self, f, a, fa, b, fb):
        m = 0.5 * (a + b)
        fm = self._Eval(f, m)
        return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def _Refine(self, f, a, fa, b, fb, m, fm, whole, tol, depth):
        lm, flm, left = self._Panel(f, a, fa, m, fm)
        rm, frm, right = self._Panel(f, m, fm, b, fb)
        delta = left + right - whole
        if depth >= self.minDepth and abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        if depth >= self.maxDepth:
            raise NumericError('Adaptive Simpson quadrature did not converge',
                               {'a': a, 'b': b, 'tol': tol, 'depth': depth,
                                'delta': delta})
        return (self._Refine(f, a, fa, m, fm, lm, flm, left, 0.5 * tol,
                             depth + 1) +
                self._Refine(f, m, fm, b, fb, rm, frm, right, 0.5 * tol,
                             depth + 1))

    def Integrate(self, f, a, b):
        # type: (Callable[[float], float], float, float) -> float
        """
        Parameters
        ----------
        f : Callable[[float], float]
        a : float
        b : float

        Returns
        -------
        float
        """
        if b == a:
            return 0.0
        if b < a:
            return -self.Integrate(f, b, a)
        self.evaluations = 0
        fa = self._Eval(f, a)
        fb = self._Eval(f, b)
        m, fm, whole = self._Panel(f, a, fa, b, fb)
        result = self._Refine(f, a, fa, b, fb, m, fm, whole, self.absTol, 0)
        _logger.debug('Integrated over [%g, %g] with %d evaluations', a, b,
                      self.evaluations)
        return result


def Integrate(f, a, b, absTol=1e-9):
    # type: (Callable[[float], float], float, float, float) -> float
    """Convenience wrapper around `AdaptiveSimpson`."""
    return AdaptiveSimpson(absTol=absTol).Integrate(f, a, b)

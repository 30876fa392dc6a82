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

from __future__ import absolute_import

import math
import unittest

from scipy import integrate

from tornPaper.errors import NumericError
from tornPaper.quadrature import AdaptiveSimpson, Integrate


class TestAdaptiveSimpson(unittest.TestCase):

    def testPolynomial(self):
        self.assertAlmostEqual(Integrate(lambda x: x * x, 0.0, 1.0), 1.0 / 3,
                               places=10)

    def testAgainstScipy(self):
        functions = [
            (lambda x: math.exp(-x), 0.0, 20.0),
            (lambda x: math.sin(x), 0.0, math.pi),
            (lambda x: x * math.exp(-0.3 * x), 1.5, 200.0),
            (lambda x: 1.0 / (1.0 + x * x), -3.0, 5.0),
        ]
        for f, a, b in functions:
            expected, _ = integrate.quad(f, a, b, epsabs=1e-12)
            self.assertAlmostEqual(Integrate(f, a, b), expected, places=8)

    def testInterval(self):
        self.assertEqual(Integrate(math.exp, 2.0, 2.0), 0.0)
        self.assertAlmostEqual(Integrate(lambda x: x, 1.0, 0.0), -0.5,
                               places=10)

    def testEvaluations(self):
        simpson = AdaptiveSimpson(absTol=1e-6)
        simpson.Integrate(math.cos, 0.0, 1.0)
        self.assertGreater(simpson.evaluations, 5)

    def testNonConvergence(self):
        simpson = AdaptiveSimpson(absTol=1e-15, maxDepth=5)
        with self.assertRaises(NumericError) as cm:
            simpson.Integrate(lambda x: 1.0 if x > 0.3 else 0.0, 0.0, 1.0)
        self.assertEqual(cm.exception.diagnostics['depth'], 5)
        self.assertIn('depth', str(cm.exception))


if __name__ == '__main__':
    unittest.main(verbosity=2)

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

import numpy as np
from scipy import integrate

from tornPaper import capacity
from tornPaper.distributions import DeletionPolicy, FragmentLengthModel
from tornPaper.errors import ParameterError, ThresholdUndefinedError

GEOMETRIC = FragmentLengthModel.Geometric()
FIXED = FragmentLengthModel.Fixed()
ZERO = DeletionPolicy.Zero()


def Entropy(q):
    return -q * math.log2(q) - (1 - q) * math.log2(1 - q)


class TestEntropyAndThresholds(unittest.TestCase):

    def testBinaryEntropy(self):
        self.assertEqual(capacity.BinaryEntropy(0.0), 0.0)
        self.assertEqual(capacity.BinaryEntropy(1.0), 0.0)
        self.assertAlmostEqual(capacity.BinaryEntropy(0.5), 1.0)
        self.assertAlmostEqual(capacity.BinaryEntropy(0.11), Entropy(0.11))
        with self.assertRaises(ParameterError):
            capacity.BinaryEntropy(1.1)

    def testThresholds(self):
        self.assertEqual(capacity.OptimalFilterThreshold(0.0), 1.0)
        self.assertAlmostEqual(capacity.OptimalFilterThreshold(0.05),
                               1.0 / (1.0 - Entropy(0.05)))
        self.assertEqual(capacity.OuterAlignmentThreshold(0.0), 2.0)
        self.assertAlmostEqual(capacity.OuterAlignmentThreshold(0.05),
                               2.0 / (1.0 - Entropy(0.1)))
        # 1 - H(2p) turns positive again for p > 0.25
        for p in (0.25, 0.3, 0.4, 0.49):
            with self.assertRaises(ThresholdUndefinedError):
                capacity.OuterAlignmentThreshold(p)
            with self.assertRaises(ThresholdUndefinedError):
                capacity.NoisyOuterBound(GEOMETRIC, p, 0.5)
        with self.assertRaises(ParameterError):
            capacity.OptimalFilterThreshold(0.5)


class TestCoverageAndAlignment(unittest.TestCase):

    def testAgainstScipy(self):
        alpha, theta, gamma = 0.5, 1.3, 0.7
        policy = DeletionPolicy.ExpLength(gamma)

        def Weight(beta):
            return (1 - math.exp(-gamma * beta)) * alpha * math.exp(
                -alpha * beta)

        coverage, _ = integrate.quad(lambda b: alpha * b * Weight(b), theta,
                                     np.inf)
        alignment, _ = integrate.quad(lambda b: alpha * Weight(b), theta,
                                      np.inf)
        self.assertAlmostEqual(
            capacity.CoverageFraction(GEOMETRIC, policy, alpha, theta),
            coverage, places=7)
        self.assertAlmostEqual(
            capacity.AlignmentCost(GEOMETRIC, policy, alpha, theta),
            alignment, places=7)

    def testClosedFormsMatchQuadrature(self):
        cases = [(GEOMETRIC, ZERO), (GEOMETRIC, DeletionPolicy.Constant(0.2)),
                 (GEOMETRIC, DeletionPolicy.ExpLength(1.0)),
                 (FragmentLengthModel.Uniform(3.0), ZERO),
                 (FragmentLengthModel.Uniform(3.0),
                  DeletionPolicy.Constant(0.4))]
        for model, policy in cases:
            for alpha in (0.2, 1.0, 2.5):
                for theta in (0.0, 0.5, 1.0, 2.0):
                    closed = capacity.ClosedFormFA(model, policy, alpha, theta)
                    self.assertAlmostEqual(
                        capacity.CoverageFraction(model, policy, alpha, theta),
                        closed[0], places=7)
                    self.assertAlmostEqual(
                        capacity.AlignmentCost(model, policy, alpha, theta),
                        closed[1], places=7)

    def testNoClosedForm(self):
        self.assertIsNone(capacity.ClosedFormFA(
            FragmentLengthModel.Uniform(2.0), DeletionPolicy.ExpLength(1.0),
            None, 1.0))

    def testFullCoverage(self):
        for model, alpha in ((GEOMETRIC, 0.7), (FIXED, 0.7),
                             (FragmentLengthModel.Uniform(2.0), None)):
            self.assertAlmostEqual(
                capacity.CoverageFraction(model, ZERO, alpha, 0.0), 1.0,
                places=7)

    def testUniformBeyondSupport(self):
        model = FragmentLengthModel.Uniform(2.0)
        self.assertEqual(capacity.CoverageFraction(model, ZERO, None, 2.5),
                         0.0)
        self.assertEqual(capacity.ClosedFormFA(model, ZERO, None, 2.5),
                         (0.0, 0.0))

    def testFixedPointMass(self):
        self.assertEqual(capacity.CoverageFraction(FIXED, ZERO, 0.25, 4.0), 1.0)
        self.assertEqual(capacity.AlignmentCost(FIXED, ZERO, 0.25, 4.0), 0.25)
        self.assertEqual(capacity.CoverageFraction(FIXED, ZERO, 0.25, 4.5), 0.0)
        policy = DeletionPolicy.ExpLength(0.5)
        self.assertAlmostEqual(
            capacity.CoverageFraction(FIXED, policy, 0.25, 1.0),
            1.0 - math.exp(-2.0))

    def testMonotoneInTheta(self):
        thetas = np.linspace(0.0, 5.0, 21)
        for model in (GEOMETRIC, FragmentLengthModel.Uniform(4.0)):
            values = [capacity.CoverageFraction(model, ZERO, 0.5, t)
                      for t in thetas]
            self.assertTrue(all(a >= b - 1e-12
                                for a, b in zip(values, values[1:])))

    def testBadArguments(self):
        with self.assertRaises(ParameterError):
            capacity.CoverageFraction(GEOMETRIC, ZERO, 0.0, 1.0)
        with self.assertRaises(ParameterError):
            capacity.AlignmentCost(GEOMETRIC, ZERO, 1.0, -0.5)


class TestNoiselessCapacity(unittest.TestCase):

    def assertCapacity(self, model, policy, alpha, expected):
        report = capacity.CapacityNoiseless(model, policy, alpha)
        self.assertAlmostEqual(report.value, expected, places=6)
        self.assertAlmostEqual(report.F - report.A, report.value, places=12)
        if report.closedForm is not None:
            self.assertLessEqual(abs(report.difference), 1e-6)
        return report

    def testGeometric(self):
        for alpha in (0.1, 0.5, 1.0, 2.0):
            self.assertCapacity(GEOMETRIC, ZERO, alpha, math.exp(-alpha))
            self.assertCapacity(GEOMETRIC, DeletionPolicy.Constant(0.2),
                                alpha, 0.8 * math.exp(-alpha))
            for gamma in (0.5, 1.0, 3.0):
                expected = math.exp(-alpha) * (
                    1 - alpha ** 2 * math.exp(-gamma) / (alpha + gamma) ** 2)
                self.assertCapacity(GEOMETRIC,
                                    DeletionPolicy.ExpLength(gamma), alpha,
                                    expected)

    def testUniform(self):
        for gamma in (0.5, 1.0, 1.5, 2.0, 4.0):
            model = FragmentLengthModel.Uniform(gamma)
            expected = ((gamma - 1) / gamma) ** 2 if gamma >= 1 else 0.0
            self.assertCapacity(model, ZERO, None, expected)
            self.assertCapacity(model, DeletionPolicy.Constant(0.1), None,
                                0.9 * expected)
        gamma = 2.0
        expected, _ = integrate.quad(
            lambda b: (2 / gamma) * (b - 1) * (1 - math.exp(-b)) / gamma, 1.0,
            gamma)
        report = self.assertCapacity(FragmentLengthModel.Uniform(gamma),
                                     DeletionPolicy.ExpLength(1.0), None,
                                     expected)
        self.assertIsNone(report.closedForm)
        self.assertIsNone(report.difference)

    def testFixed(self):
        for alpha in (0.1, 0.3, 0.5, 0.9):
            report = self.assertCapacity(FIXED, ZERO, alpha, 1.0 - alpha)
            self.assertEqual(report.method, capacity.CLOSED_FORM)
        self.assertCapacity(FIXED, ZERO, 2.0, 0.0)
        self.assertCapacity(FIXED, DeletionPolicy.Constant(0.1), 0.3,
                            0.9 * 0.7)

    def testAnchors(self):
        self.assertAlmostEqual(
            capacity.CapacityNoiseless(GEOMETRIC, ZERO, 1.0).value, 0.367879,
            places=6)
        self.assertAlmostEqual(
            capacity.CapacityNoiseless(FIXED, ZERO, 0.3).value, 0.7,
            places=12)
        self.assertAlmostEqual(
            capacity.CapacityNoiseless(FragmentLengthModel.Uniform(2.0), ZERO,
                                       None).value, 0.25, places=9)

    def testReportJson(self):
        data = capacity.CapacityNoiseless(GEOMETRIC, ZERO, 1.0).ToJson()
        self.assertEqual(data['method'], capacity.QUADRATURE)
        self.assertEqual(data['params']['fragment'], {'kind': 'geometric'})
        self.assertEqual(data['theta'], 1.0)
        self.assertIn('difference', data)

    def testMonotoneInDeletion(self):
        values = [capacity.CapacityNoiseless(
            GEOMETRIC, DeletionPolicy.Constant(eps), 0.5).value
            for eps in (0.0, 0.2, 0.4)]
        self.assertGreater(values[0], values[1])
        self.assertGreater(values[1], values[2])

    def testReferenceCapacities(self):
        self.assertEqual(capacity.ShufflingCapacity(0.25), 0.75)
        self.assertEqual(capacity.ShufflingCapacity(1.5), 0.0)
        self.assertAlmostEqual(capacity.NoisyShufflingCapacity(0.01, 0.2),
                               1 - Entropy(0.01) - 0.2)
        with self.assertRaises(ParameterError):
            capacity.NoisyShufflingCapacity(0.05, 0.5)


class TestNoisyBounds(unittest.TestCase):

    def testNoNoiseReducesToCapacity(self):
        for alpha in (0.2, 0.5, 1.0):
            noiseless = capacity.CapacityNoiseless(GEOMETRIC, ZERO, alpha)
            bounds = capacity.ComputeNoisyBounds(GEOMETRIC, 0.0, alpha)
            self.assertAlmostEqual(bounds.rIn, noiseless.value, places=9)
            self.assertGreaterEqual(bounds.rOut, bounds.rIn)

    def testFixedLengthsMeetAtNoisyShufflingCapacity(self):
        checked = 0
        for p in (0.01, 0.02, 0.05):
            for alpha in (0.1, 0.2, 0.3, 0.5):
                if not capacity.MinFragmentConditionHolds(p, alpha):
                    continue
                checked += 1
                bounds = capacity.ComputeNoisyBounds(FIXED, p, alpha)
                expected = 1.0 - Entropy(p) - alpha
                self.assertAlmostEqual(bounds.rIn, expected, places=9)
                self.assertAlmostEqual(bounds.rOut, expected, places=9)
        self.assertEqual(checked, 8)

    def testAnchor(self):
        bounds = capacity.ComputeNoisyBounds(FIXED, 0.01, 0.2)
        self.assertAlmostEqual(bounds.rIn, 0.719207, places=6)
        self.assertAlmostEqual(bounds.rOut, 0.719207, places=6)

    def testOuterBoundDominates(self):
        for p in (0.0, 0.01, 0.05, 0.1):
            for invAlpha in (1, 2, 5, 10, 20):
                bounds = capacity.ComputeNoisyBounds(GEOMETRIC, p,
                                                     1.0 / invAlpha)
                self.assertGreaterEqual(bounds.rOut, bounds.rIn - 1e-9)
                self.assertGreaterEqual(bounds.rIn, 0.0)

    def testGapShrinksWithFragmentLength(self):
        gaps = []
        for invAlpha in (1, 2, 4, 8):
            bounds = capacity.ComputeNoisyBounds(GEOMETRIC, 0.01,
                                                 1.0 / invAlpha)
            gaps.append(bounds.rOut - bounds.rIn)
        self.assertAlmostEqual(gaps[0], 0.269, places=2)
        self.assertAlmostEqual(gaps[1], 0.147, places=2)
        self.assertTrue(all(a > b for a, b in zip(gaps, gaps[1:])))

        for p in (0.01, 0.02, 0.05):
            gaps = []
            for invAlpha in range(2, 21):
                bounds = capacity.ComputeNoisyBounds(GEOMETRIC, p,
                                                     1.0 / invAlpha)
                gaps.append(bounds.rOut - bounds.rIn)
            for wide, narrow in zip(gaps, gaps[1:]):
                self.assertGreater(wide, narrow, p)

    def testLongFragmentsApproachBscCapacity(self):
        for p in (0.01, 0.02, 0.05):
            bounds = capacity.ComputeNoisyBounds(GEOMETRIC, p, 1.0 / 50)
            bsc = 1.0 - Entropy(p)
            for value in (bounds.rIn, bounds.rOut):
                self.assertLess(bsc - value, 0.02, p)
                self.assertGreater(bsc, value)

    def testOptimalThreshold(self):
        for p in (0.01, 0.05, 0.1):
            best = capacity.OptimalFilterThreshold(p)
            atBest = capacity.InnerBoundAtThreshold(GEOMETRIC, p, 0.5, best)
            for theta in np.arange(0.5, 3.0, 0.05):
                self.assertGreaterEqual(
                    atBest,
                    capacity.InnerBoundAtThreshold(GEOMETRIC, p, 0.5, theta) -
                    1e-9)

    def testUndefinedOuterBound(self):
        with self.assertRaises(ThresholdUndefinedError):
            capacity.NoisyOuterBound(GEOMETRIC, 0.3, 0.5)
        with self.assertRaises(ThresholdUndefinedError):
            capacity.ComputeNoisyBounds(GEOMETRIC, 0.25, 0.5)

    def testBoundsJson(self):
        data = capacity.ComputeNoisyBounds(GEOMETRIC, 0.05, 0.5).ToJson()
        self.assertEqual(sorted(data), sorted(['p', 'r_in', 'r_out',
                                               'theta_in', 'theta_out_F',
                                               'theta_out_A', 'method',
                                               'params']))
        self.assertEqual(data['theta_out_F'], 1.0)


class TestFiniteN(unittest.TestCase):

    def testFiniteNFA(self):
        model = FragmentLengthModel.Fixed(16)
        self.assertEqual(capacity.FiniteNFA(model, ZERO, 2 ** 16, 1.0),
                         (1.0, 1.0))
        self.assertEqual(capacity.FiniteNFA(model, ZERO, 2 ** 16, 1.1),
                         (0.0, 0.0))

        geometric = FragmentLengthModel.Geometric(16)
        coverage, alignment = capacity.FiniteNFA(geometric, ZERO, 2 ** 16, 0.0)
        self.assertAlmostEqual(coverage, 1.0, places=9)
        self.assertAlmostEqual(alignment, 1.0, places=9)

    def testUniformSkipsEmptyFragments(self):
        # lengths 0..24 at n = 2^12; the zero-length draws never become
        # fragments, so only 24 of the 25 equally likely lengths count
        uniform = FragmentLengthModel.Uniform(2.0)
        coverage, alignment = capacity.FiniteNFA(uniform, ZERO, 2 ** 12, 0.0)
        self.assertAlmostEqual(coverage, 1.0, places=12)
        self.assertAlmostEqual(alignment, 24.0 / 25.0, places=12)

    def testFiniteNApproachesLimit(self):
        n = 2 ** 20
        model = GEOMETRIC.WithAlpha(1.0, n)
        for theta in (0.5, 1.0, 2.0):
            coverage, alignment = capacity.FiniteNFA(model, ZERO, n, theta)
            closed = capacity.ClosedFormFA(GEOMETRIC, ZERO, 1.0, theta)
            self.assertAlmostEqual(coverage, closed[0], delta=0.05)
            self.assertAlmostEqual(alignment, closed[1], delta=0.05)

    def testFiniteNBounds(self):
        n = 2 ** 20
        finite = capacity.FiniteNBounds(GEOMETRIC.WithAlpha(1.0, n), n, 0.01)
        limit = capacity.ComputeNoisyBounds(GEOMETRIC, 0.01, 1.0)
        self.assertEqual(finite.method, capacity.FINITE_N)
        self.assertAlmostEqual(finite.rIn, limit.rIn, delta=0.05)
        self.assertAlmostEqual(finite.rOut, limit.rOut, delta=0.05)
        self.assertGreaterEqual(finite.rOut, finite.rIn)

    def testFiniteNNeedsMeanLength(self):
        with self.assertRaises(ParameterError):
            capacity.FiniteNFA(GEOMETRIC, ZERO, 1024, 1.0)


if __name__ == '__main__':
    unittest.main(verbosity=2)

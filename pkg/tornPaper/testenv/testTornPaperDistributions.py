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

import json
import math
import os
import shutil
import tempfile
import unittest

import numpy as np
from scipy import integrate

from tornPaper.distributions import (DeletionPolicy, FragmentLengthModel,
                                     AlphaAtN, DeletionProb, DHat, HBeta,
                                     ImpliedAlpha, LoadChannelConfig, Log2,
                                     MinKeptLength, ModelFromConfig,
                                     ModelToConfig, Pmf, PolicyFromConfig,
                                     PolicyToConfig, SampleLength,
                                     SampleLengths, Support)
from tornPaper.errors import DensityUndefinedError, ParameterError


class TestFragmentLengthModel(unittest.TestCase):

    def testValidation(self):
        with self.assertRaises(ParameterError):
            FragmentLengthModel('poisson', meanLen=4)
        with self.assertRaises(ParameterError):
            FragmentLengthModel.Geometric(0.5)
        with self.assertRaises(ParameterError):
            FragmentLengthModel.Uniform(0.0)
        with self.assertRaises(ParameterError):
            FragmentLengthModel.Fixed(0.2)
        with self.assertRaises(ParameterError):
            FragmentLengthModel.Geometric().Mean(1024)

    def testMeans(self):
        self.assertEqual(FragmentLengthModel.Geometric(8).Mean(1024), 8.0)
        self.assertEqual(FragmentLengthModel.Fixed(63.6).FixedLength(), 64)
        uniform = FragmentLengthModel.Uniform(2.0)
        self.assertEqual(uniform.MaxLength(1024), 20)
        self.assertEqual(uniform.Mean(1024), 10.0)
        self.assertAlmostEqual(AlphaAtN(uniform, 1024), 1.0)
        self.assertIsNone(FragmentLengthModel.Geometric(8).MaxLength(1024))

    def testWithAlpha(self):
        geometric = FragmentLengthModel.Geometric().WithAlpha(0.5, 1024)
        self.assertEqual(geometric.meanLen, 20.0)
        self.assertIsNone(FragmentLengthModel.Fixed().WithAlpha(0.5).meanLen)
        uniform = FragmentLengthModel.Uniform(4.0).WithAlpha(0.5)
        self.assertEqual(uniform.gamma, 4.0)
        self.assertEqual(FragmentLengthModel.Uniform(4.0).WithAlpha(2.0).gamma,
                         1.0)
        with self.assertRaises(ParameterError):
            geometric.WithAlpha(0.0)

    def testImpliedAlpha(self):
        self.assertEqual(ImpliedAlpha(FragmentLengthModel.Uniform(4.0), 3.0),
                         0.5)
        self.assertEqual(ImpliedAlpha(FragmentLengthModel.Geometric(), 0.7),
                         0.7)
        with self.assertRaises(ParameterError):
            ImpliedAlpha(FragmentLengthModel.Geometric())


class TestLengths(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(11)

    def testLog2(self):
        self.assertEqual(Log2(1024), 10.0)
        with self.assertRaises(ParameterError):
            Log2(1)

    def testMinKeptLength(self):
        self.assertEqual(MinKeptLength(1024, 1.0), 10)
        self.assertEqual(MinKeptLength(1024, 0.5), 5)
        self.assertEqual(MinKeptLength(1000, 1.0), 10)
        self.assertEqual(MinKeptLength(1024, 0.0), 0)
        with self.assertRaises(ParameterError):
            MinKeptLength(1024, -1.0)

    def testSampleMeans(self):
        geometric = SampleLengths(FragmentLengthModel.Geometric(8), 1024,
                                  200000, self.rng)
        self.assertGreaterEqual(geometric.min(), 1)
        self.assertAlmostEqual(geometric.mean(), 8.0, delta=0.1)

        uniform = SampleLengths(FragmentLengthModel.Uniform(2.0), 1024,
                                200000, self.rng)
        self.assertEqual(uniform.min(), 0)
        self.assertEqual(uniform.max(), 20)
        self.assertAlmostEqual(uniform.mean(), 10.0, delta=0.1)

        fixed = SampleLengths(FragmentLengthModel.Fixed(12), 1024, 100,
                              self.rng)
        self.assertTrue((fixed == 12).all())
        self.assertEqual(SampleLength(FragmentLengthModel.Fixed(12), 1024,
                                      self.rng), 12)

    def testPmf(self):
        model = FragmentLengthModel.Geometric(4)
        self.assertEqual(Pmf(model, 1024, 0), 0.0)
        self.assertAlmostEqual(Pmf(model, 1024, 1), 0.25)
        self.assertAlmostEqual(Pmf(model, 1024, 3), 0.25 * 0.75 ** 2)
        self.assertAlmostEqual(Pmf(FragmentLengthModel.Uniform(2.0), 1024, 20),
                               1.0 / 21)
        self.assertEqual(Pmf(FragmentLengthModel.Uniform(2.0), 1024, 21), 0.0)
        self.assertEqual(Pmf(FragmentLengthModel.Fixed(8), 1024, 8), 1.0)
        with self.assertRaises(ParameterError):
            Pmf(model, 1024, -1)

    def testSupport(self):
        for model in (FragmentLengthModel.Geometric(16),
                      FragmentLengthModel.Uniform(3.0),
                      FragmentLengthModel.Fixed(7)):
            lengths, masses = Support(model, 4096)
            self.assertEqual(len(lengths), len(masses))
            self.assertGreater(masses.sum(), 1.0 - 1e-11)
            self.assertLessEqual(masses.sum(), 1.0 + 1e-12)
            self.assertAlmostEqual(float(np.dot(lengths, masses)),
                                   model.Mean(4096), places=6)

    def testRescaledPmfConvergence(self):
        # (log n) Pmf(beta log n) approaches h(beta) as n grows
        for beta in (0.5, 1.0, 2.0):
            gaps = []
            for exponent in (10, 14, 18):
                n = 2 ** exponent
                model = FragmentLengthModel.Geometric().WithAlpha(1.0, n)
                length = int(round(beta * exponent))
                scaled = exponent * Pmf(model, n, length)
                gaps.append(abs(scaled - HBeta(model, 1.0, beta)))
            self.assertGreater(gaps[0], gaps[1])
            self.assertGreater(gaps[1], gaps[2])

        uniform = FragmentLengthModel.Uniform(2.0)
        n = 2 ** 16
        self.assertAlmostEqual(16 * Pmf(uniform, n, 5), 0.5, delta=0.02)


class TestDensities(unittest.TestCase):

    def testGeometricDensityIntegratesToOne(self):
        for alpha in (0.2, 1.0, 3.0):
            model = FragmentLengthModel.Geometric()
            total, _ = integrate.quad(lambda b: HBeta(model, alpha, b), 0,
                                      np.inf)
            self.assertAlmostEqual(total, 1.0, places=8)

    def testUniformDensity(self):
        model = FragmentLengthModel.Uniform(4.0)
        self.assertEqual(HBeta(model, None, 1.0), 0.25)
        self.assertEqual(HBeta(model, None, 4.5), 0.0)

    def testFixedHasNoDensity(self):
        model = FragmentLengthModel.Fixed()
        self.assertFalse(model.hasDensity)
        with self.assertRaises(DensityUndefinedError):
            HBeta(model, 1.0, 1.0)
        with self.assertRaises(ParameterError):
            HBeta(model, 1.0, 1.0)


class TestDeletionPolicy(unittest.TestCase):

    def testValidation(self):
        with self.assertRaises(ParameterError):
            DeletionPolicy.Constant(1.5)
        with self.assertRaises(ParameterError):
            DeletionPolicy.ExpLength(0.0)
        with self.assertRaises(ParameterError):
            DeletionPolicy('sometimes')

    def testProbabilities(self):
        self.assertEqual(DHat(DeletionPolicy.Zero(), 3.0), 0.0)
        self.assertEqual(DHat(DeletionPolicy.Constant(0.2), 3.0), 0.2)
        self.assertAlmostEqual(DHat(DeletionPolicy.ExpLength(2.0), 1.5),
                               math.exp(-3.0))
        policy = DeletionPolicy.ExpLength(1.0)
        self.assertAlmostEqual(DeletionProb(policy, 10, 1024), math.exp(-1.0))
        probs = policy.Probs(np.array([0, 5, 10]), 1024)
        np.testing.assert_allclose(probs, np.exp([0.0, -0.5, -1.0]))
        np.testing.assert_array_equal(
            DeletionPolicy.Constant(0.3).Probs([1, 2], 1024), [0.3, 0.3])

    def testDeletionConvergence(self):
        gamma = 1.0
        policy = DeletionPolicy.ExpLength(gamma)
        for beta in (0.35, 1.0, 2.5):
            for exponent in (10, 14, 18):
                n = 2 ** exponent
                length = int(round(beta * exponent))
                gap = abs(DeletionProb(policy, length, n) - DHat(policy, beta))
                self.assertLessEqual(gap, gamma / exponent)


class TestChannelConfig(unittest.TestCase):

    def setUp(self):
        self.tempDir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tempDir)

    def testRoundTrip(self):
        for model in (FragmentLengthModel.Geometric(12),
                      FragmentLengthModel.Uniform(2.5),
                      FragmentLengthModel.Fixed()):
            self.assertEqual(ModelFromConfig(ModelToConfig(model)), model)
        for policy in (DeletionPolicy.Zero(), DeletionPolicy.Constant(0.1),
                       DeletionPolicy.ExpLength(0.5)):
            self.assertEqual(PolicyFromConfig(PolicyToConfig(policy)), policy)

    def testLoadFile(self):
        path = os.path.join(self.tempDir, 'channel.json')
        with open(path, 'w') as f:
            json.dump({'fragment': {'kind': 'geometric', 'mean_len': 16},
                       'deletion': {'kind': 'exp', 'gamma': 1.0}}, f)
        model, policy = LoadChannelConfig(path)
        self.assertEqual(model, FragmentLengthModel.Geometric(16))
        self.assertEqual(policy, DeletionPolicy.ExpLength(1.0))

        model, policy = LoadChannelConfig({'fragment': {'kind': 'fixed'}})
        self.assertEqual(model.kind, 'fixed')
        self.assertIsNone(policy)

    def testBadConfig(self):
        with self.assertRaises(ParameterError):
            LoadChannelConfig(os.path.join(self.tempDir, 'missing.json'))
        with self.assertRaises(ParameterError):
            ModelFromConfig({'mean_len': 3})
        with self.assertRaises(ParameterError):
            PolicyFromConfig({'kind': 'constant'})


if __name__ == '__main__':
    unittest.main(verbosity=2)

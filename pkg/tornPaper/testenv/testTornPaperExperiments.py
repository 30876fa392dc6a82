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

try:
    from unittest import mock
except ImportError:
    import mock

from tornPaper import experiments
from tornPaper._config import THREADS_ENV_VAR, GetThreadCount
from tornPaper.channel import ChannelParams, TornOutput
from tornPaper.codec import INDEXED, RANDOM
from tornPaper.distributions import DeletionPolicy, FragmentLengthModel
from tornPaper.errors import (DensityUndefinedError, ParameterError,
                              ThresholdUndefinedError)


class TestEstimate(unittest.TestCase):

    def testFromSamples(self):
        estimate = experiments.Estimate.FromSamples([1.0, 2.0, 3.0])
        self.assertEqual(estimate.mean, 2.0)
        self.assertAlmostEqual(estimate.stderr, 1.0 / math.sqrt(3))
        self.assertEqual(experiments.Estimate.FromSamples([4.0]),
                         (4.0, 0.0))
        self.assertTrue(math.isnan(experiments.Estimate.FromSamples([]).mean))

    def testTrialStreams(self):
        first = experiments.TrialRng(5, 3).random(4)
        self.assertTrue(np.array_equal(first,
                                       experiments.TrialRng(5, 3).random(4)))
        self.assertFalse(np.array_equal(first,
                                        experiments.TrialRng(5, 4).random(4)))


class TestThreadConfig(unittest.TestCase):

    def testThreadCount(self):
        with mock.patch.dict(os.environ, {THREADS_ENV_VAR: '3'}):
            self.assertEqual(GetThreadCount(), 3)
        with mock.patch.dict(os.environ, {THREADS_ENV_VAR: '0'}):
            self.assertEqual(GetThreadCount(), 1)
        with mock.patch.dict(os.environ, {THREADS_ENV_VAR: 'many'}):
            with self.assertRaises(ParameterError):
                GetThreadCount()


class TestErrorRate(unittest.TestCase):

    def testIndexedCodeNeverFails(self):
        params = ChannelParams(1024, FragmentLengthModel.Fixed(64))
        spec = experiments.CodebookSpec(INDEXED, None, None, 64)
        report = experiments.RunErrorRate(params, spec, 'indexed', 100,
                                          seed=7)
        self.assertEqual(report.trials, 100)
        self.assertEqual(report.errors, 0)
        self.assertEqual(report.errorRate, 0.0)
        self.assertEqual(report.empiricalF, (1.0, 0.0))

    def testIndependentOfWorkerCount(self):
        params = ChannelParams(16, FragmentLengthModel.Fixed(8))
        spec = experiments.CodebookSpec(RANDOM, 0.5, 1, None)
        reports = []
        for threads in ('1', '4'):
            with mock.patch.dict(os.environ, {THREADS_ENV_VAR: threads}):
                reports.append(experiments.RunErrorRate(
                    params, spec, 'noiseless', 60, seed=3).ToJson())
        self.assertEqual(json.dumps(reports[0], sort_keys=True),
                         json.dumps(reports[1], sort_keys=True))

    def testNoiselessRateSeparation(self):
        params = ChannelParams(16, FragmentLengthModel.Fixed(8))
        rates = []
        for rate in (0.125, 0.875):
            spec = experiments.CodebookSpec(RANDOM, rate, 11, None)
            report = experiments.RunErrorRate(params, spec, 'noiseless', 500,
                                              seed=12)
            self.assertLessEqual(report.errors, report.trials)
            rates.append(report.errorRate)
        self.assertLess(rates[0], rates[1])

        spec = experiments.CodebookSpec(RANDOM, 0.125, 11, None)
        rerun = experiments.RunErrorRate(params, spec, 'noiseless', 500,
                                         seed=12)
        self.assertEqual(rerun.errorRate, rates[0])

    def testModerateRates(self):
        params = ChannelParams(16, FragmentLengthModel.Fixed(8))
        rates = [experiments.RunErrorRate(
            params, experiments.CodebookSpec(RANDOM, rate, 21, None),
            'noiseless', 200, seed=22).errorRate for rate in (0.25, 0.75)]
        self.assertLess(rates[0], rates[1])

    def testNoisyRateSeparation(self):
        params = ChannelParams(16, FragmentLengthModel.Fixed(8), p=0.02)
        rates = []
        for rate in (0.125, 0.875):
            spec = experiments.CodebookSpec(RANDOM, rate, 11, None)
            rates.append(experiments.RunErrorRate(
                params, spec, 'noisy', 500, seed=12, eps=1.0).errorRate)
        self.assertLess(rates[0], rates[1])

    def testSingleCodewordTypicality(self):
        params = ChannelParams(4096, FragmentLengthModel.Fixed(4096), p=0.05)
        spec = experiments.CodebookSpec(RANDOM, 0.0, 2, None)
        report = experiments.RunErrorRate(params, spec, 'noisy', 100, seed=4,
                                          eps=0.3)
        self.assertLessEqual(report.errorRate, 0.05)

    def testDump(self):
        tempDir = tempfile.mkdtemp()
        try:
            params = ChannelParams(64, FragmentLengthModel.Geometric(8),
                                   DeletionPolicy.Constant(0.1))
            spec = experiments.CodebookSpec(RANDOM, 0.125, 0, None)
            experiments.RunErrorRate(params, spec, 'noiseless', 5, seed=1,
                                     dumpDir=tempDir)
            names = sorted(os.listdir(tempDir))
            self.assertEqual(names, ['trial_{0:05d}.txt'.format(t)
                                     for t in range(5)])
            with open(os.path.join(tempDir, names[0])) as f:
                output = TornOutput.FromText(f.read())
            self.assertEqual(output.n, 64)
        finally:
            shutil.rmtree(tempDir)

    def testBadArguments(self):
        params = ChannelParams(16, FragmentLengthModel.Fixed(8))
        spec = experiments.CodebookSpec(RANDOM, 0.5, 1, None)
        with self.assertRaises(ParameterError):
            experiments.RunErrorRate(params, spec, 'noiseless', 0)
        with self.assertRaises(ParameterError):
            experiments.RunErrorRate(params, spec, 'guess', 1)
        with self.assertRaises(ParameterError):
            experiments.BuildCodebook(
                16, experiments.CodebookSpec(INDEXED, None, None, None))
        with self.assertRaises(ParameterError):
            experiments.BuildCodebook(
                16, experiments.CodebookSpec('lattice', 0.5, 1, None))


class TestConcentration(unittest.TestCase):

    def setUp(self):
        n = 2 ** 16
        self.params = ChannelParams(
            n, FragmentLengthModel.Geometric().WithAlpha(1.0, n))

    def testCoverage(self):
        report = experiments.VerifyCoverageConcentration(self.params, 1.0,
                                                         500, 0.1, seed=1)
        self.assertLessEqual(report.deviationFreq, 0.01)
        self.assertAlmostEqual(report.statistic.mean, report.expected,
                               delta=0.01)
        self.assertAlmostEqual(report.expected, 2 * math.exp(-1), delta=0.02)

    def testAlignment(self):
        report = experiments.VerifyAlignmentConcentration(self.params, 1.0,
                                                          500, 0.1, seed=2)
        self.assertLessEqual(report.deviationFreq, 0.01)
        self.assertAlmostEqual(report.expected, math.exp(-1), delta=0.02)
        self.assertEqual(report.statistic, report.empiricalACount)

    def testBuckets(self):
        reports = experiments.VerifyBucketConcentration(self.params, 2, 300,
                                                        seed=3)
        self.assertEqual(len(reports), 17)
        for report in reports[:8]:
            self.assertLessEqual(report.deviationFreq, 0.05)
            self.assertAlmostEqual(report.band, 256.0)
        total = sum(r.expected for r in reports)
        self.assertAlmostEqual(total, 4096.0, delta=1.0)
        self.assertGreater(reports[0].analyticBound, 0.0)

    def testUniformBucketsSkipEmptyFragments(self):
        n = 2 ** 12
        params = ChannelParams(n, FragmentLengthModel.Uniform(2.0))
        reports = experiments.VerifyBucketConcentration(params, 1, 300,
                                                        seed=5)
        # bucket 1 holds lengths 1..11 of the 25 equally likely 0..24
        self.assertAlmostEqual(reports[0].expected, n * 11 / 25.0 / 12.0)
        self.assertAlmostEqual(reports[0].statistic.mean,
                               reports[0].expected, delta=5.0)
        for report in reports[:3]:
            self.assertLessEqual(report.deviationFreq, 0.05)

    def testDeviationShrinksWithBlockLength(self):
        trials = 500
        for verify in (experiments.VerifyCoverageConcentration,
                       experiments.VerifyAlignmentConcentration):
            freqs = []
            for n in (2 ** 12, 2 ** 14, 2 ** 16):
                params = ChannelParams(
                    n, FragmentLengthModel.Geometric().WithAlpha(1.0, n))
                freqs.append(verify(params, 1.0, trials, 0.1,
                                    seed=6).deviationFreq)
            for before, after in zip(freqs, freqs[1:]):
                slack = 2.0 * math.sqrt(before * (1.0 - before) / trials)
                self.assertLessEqual(after, before + slack, freqs)
            self.assertGreater(freqs[0], freqs[2])

    def testNeedsEnoughTrials(self):
        with self.assertRaises(ParameterError):
            experiments.VerifyCoverageConcentration(self.params, 1.0, 99, 0.1)

    def testBucketIndices(self):
        indices = experiments.BucketIndices(np.array([1, 3, 4, 7, 8, 12, 100]),
                                            16, 1, 3)
        self.assertEqual(indices.tolist(), [1, 1, 2, 2, 3, 4, 4])

    def testDeviationBound(self):
        bounds = [experiments.BucketDeviationBound(2 ** k, k, 1.0 / k)
                  for k in (10, 16, 22)]
        self.assertTrue(all(a > b for a, b in zip(bounds, bounds[1:])))
        self.assertLessEqual(bounds[0], 1.0)


class TestSweep(unittest.TestCase):

    def testGrid(self):
        rows = experiments.SweepBounds([0.05, 0.01, 0.02], range(1, 21),
                                       FragmentLengthModel.Geometric())
        self.assertEqual(len(rows), 60)
        keys = [(row.p, row.invAlpha) for row in rows]
        self.assertEqual(keys, sorted(keys))
        for row in rows:
            self.assertGreaterEqual(row.gap, -1e-9)
            self.assertAlmostEqual(row.gap, row.rOut - row.rIn)

        text = experiments.SweepToCsv(rows)
        lines = text.splitlines()
        self.assertEqual(lines[0], 'inv_alpha,p,r_in,r_out,gap')
        self.assertEqual(len(lines), 61)
        self.assertEqual(experiments.SweepRowToJson(rows[0])['inv_alpha'], 1)

    def testUniformSweep(self):
        rows = experiments.SweepBounds([0.01], [2.0, 4.0],
                                       FragmentLengthModel.Uniform(1.0))
        self.assertEqual(len(rows), 2)
        self.assertLess(rows[0].rIn, rows[1].rIn)

    def testGuards(self):
        with self.assertRaises(DensityUndefinedError):
            experiments.SweepBounds([0.01], [1, 2],
                                    FragmentLengthModel.Fixed())
        with self.assertRaises(ThresholdUndefinedError):
            experiments.SweepBounds([0.3], [1, 2],
                                    FragmentLengthModel.Geometric())
        with self.assertRaises(ParameterError):
            experiments.SweepBounds([], [1], FragmentLengthModel.Geometric())


if __name__ == '__main__':
    unittest.main(verbosity=2)

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

import unittest

import numpy as np

from tornPaper.channel import (ApplyBsc, ApplyDeletions, BitsToArray,
                               ChannelParams, Fragment, RandomBits,
                               SampleTrace, Tear, TearLengths, TearTrace,
                               TornOutput, TraceStatistics, Transmit,
                               TransmitTraced, ValidateCrossover)
from tornPaper.distributions import DeletionPolicy, FragmentLengthModel
from tornPaper.errors import ParameterError


class TestFragments(unittest.TestCase):

    def testFragment(self):
        self.assertEqual(Fragment('0110').length, 4)
        with self.assertRaises(ParameterError):
            Fragment('')
        with self.assertRaises(ParameterError):
            Fragment('0120')

    def testTornOutputIsAMultiset(self):
        a = TornOutput(8, [Fragment('01'), Fragment('110'), Fragment('01')])
        b = TornOutput(8, [Fragment('110'), Fragment('01'), Fragment('01')])
        c = TornOutput(8, [Fragment('110'), Fragment('01')])
        self.assertEqual(a, b)
        self.assertEqual(hash(a), hash(b))
        self.assertNotEqual(a, c)
        self.assertNotEqual(a, TornOutput(9, b.fragments))
        self.assertEqual(len(a), 3)
        self.assertEqual(a.TotalLength(), 7)
        with self.assertRaises(ParameterError):
            TornOutput(4, [Fragment('0110'), Fragment('1')])

    def testShuffled(self):
        output = TornOutput(16, [Fragment(b) for b in
                                 ('0', '10', '110', '1110', '11110')])
        shuffled = output.Shuffled(np.random.default_rng(3))
        self.assertEqual(sorted(f.bits for f in shuffled),
                         sorted(f.bits for f in output))
        self.assertEqual(TornOutput(16, shuffled), output)

    def testText(self):
        output = TornOutput(10, [Fragment('0011'), Fragment('1'),
                                 Fragment('10')])
        text = output.ToText()
        self.assertEqual(text, 'n=10 count=3\n1\n10\n0011\n')
        self.assertEqual(TornOutput.FromText(text), output)
        self.assertEqual(TornOutput.FromText('n=5 count=0\n'),
                         TornOutput(5))
        with self.assertRaises(ParameterError):
            TornOutput.FromText('n=10 count=2\n1\n')
        with self.assertRaises(ParameterError):
            TornOutput.FromText('count=1\n1\n')
        with self.assertRaises(ParameterError):
            TornOutput.FromText('')


class TestTearing(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(5)

    def testFixedTear(self):
        x = '0110100111'
        fragments, trace = Tear(x, FragmentLengthModel.Fixed(4), self.rng)
        self.assertEqual([f.bits for f in fragments], ['0110', '1001', '11'])
        self.assertEqual(trace.lengths.tolist(), [4, 4, 2])
        self.assertTrue(trace.kept.all())

    def testTearPreservesBits(self):
        for model in (FragmentLengthModel.Geometric(6),
                      FragmentLengthModel.Uniform(1.5),
                      FragmentLengthModel.Fixed(9)):
            for _ in range(20):
                x = RandomBits(500, self.rng)
                fragments, trace = Tear(x, model, self.rng)
                self.assertEqual(''.join(f.bits for f in fragments), x)
                self.assertEqual(int(trace.lengths.sum()), 500)
                self.assertGreater(trace.lengths.min(), 0)

    def testFragmentCountConcentrates(self):
        n = 2 ** 14
        model = FragmentLengthModel.Geometric(32)
        ratios = [len(TearLengths(n, model, self.rng)) / (n / 32.0)
                  for _ in range(100)]
        self.assertGreaterEqual(np.mean(ratios), 0.9)
        self.assertLessEqual(np.mean(ratios), 1.1)

    def testTinyBlocks(self):
        lengths = TearLengths(1, FragmentLengthModel.Geometric(4), self.rng)
        self.assertEqual(lengths.tolist(), [1])
        with self.assertRaises(ParameterError):
            TearLengths(0, FragmentLengthModel.Geometric(4), self.rng)


class TestNoiseAndDeletion(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(7)

    def testValidateCrossover(self):
        self.assertEqual(ValidateCrossover(0), 0.0)
        for p in (-0.1, 0.5, 0.7):
            with self.assertRaises(ParameterError):
                ValidateCrossover(p)

    def testBscFlipRate(self):
        x = RandomBits(10 ** 6, self.rng)
        for _ in range(10):
            y = ApplyBsc(x, 0.1, self.rng)
            rate = np.mean(BitsToArray(x) != BitsToArray(y))
            self.assertGreaterEqual(rate, 0.099)
            self.assertLessEqual(rate, 0.101)
        self.assertEqual(ApplyBsc(x[:100], 0.0, self.rng), x[:100])

    def testExpLengthSurvival(self):
        fragments = [Fragment('0' * 10)] * 10000
        survivors, kept = ApplyDeletions(fragments,
                                         DeletionPolicy.ExpLength(1.0), 1024,
                                         self.rng)
        self.assertEqual(len(survivors), int(kept.sum()))
        self.assertAlmostEqual(kept.mean(), 1.0 - np.exp(-1.0), delta=0.02)

    def testDeleteEverything(self):
        params = ChannelParams(64, FragmentLengthModel.Geometric(4),
                               DeletionPolicy.Constant(1.0))
        output = Transmit(RandomBits(64, self.rng), params, self.rng)
        self.assertEqual(len(output), 0)


class TestTransmit(unittest.TestCase):

    def testNoiselessTransmission(self):
        rng = np.random.default_rng(13)
        params = ChannelParams(256, FragmentLengthModel.Geometric(8))
        x = RandomBits(256, rng)
        output, trace = TransmitTraced(x, params, rng)
        self.assertEqual(output.TotalLength(), 256)
        self.assertEqual(len(output), len(trace.lengths))
        self.assertEqual(sorted(f.length for f in output),
                         sorted(trace.lengths.tolist()))
        for fragment in output:
            self.assertIn(fragment.bits, x)

    def testDeterministic(self):
        params = ChannelParams(512, FragmentLengthModel.Uniform(2.0),
                               DeletionPolicy.Constant(0.2), p=0.05)
        x = RandomBits(512, np.random.default_rng(1))
        first = Transmit(x, params, np.random.default_rng(99))
        second = Transmit(x, params, np.random.default_rng(99))
        self.assertEqual(first, second)

    def testSampleTraceMatchesTransmission(self):
        params = ChannelParams(1024, FragmentLengthModel.Geometric(10),
                               DeletionPolicy.Constant(0.3))
        x = RandomBits(1024, np.random.default_rng(2))
        trace = SampleTrace(params, np.random.default_rng(21))
        _, transmitted = TransmitTraced(x, params, np.random.default_rng(21))
        np.testing.assert_array_equal(trace.lengths, transmitted.lengths)
        np.testing.assert_array_equal(trace.kept, transmitted.kept)

    def testWrongLength(self):
        params = ChannelParams(16, FragmentLengthModel.Fixed(4))
        with self.assertRaises(ParameterError):
            Transmit('0101', params, np.random.default_rng(0))

    def testTraceStatistics(self):
        trace = TearTrace(np.array([10, 3, 3]), np.array([True, True, True]))
        coverage, alignment = TraceStatistics(trace, 16, 1.0)
        self.assertEqual(coverage, 10 / 16.0)
        self.assertEqual(alignment, 0.25)

        trace = TearTrace(np.array([10, 6]), np.array([False, True]))
        coverage, alignment = TraceStatistics(trace, 16, 1.0)
        self.assertEqual(coverage, 6 / 16.0)
        self.assertEqual(alignment, 0.25)


if __name__ == '__main__':
    unittest.main(verbosity=2)

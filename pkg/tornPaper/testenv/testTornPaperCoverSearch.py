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

import itertools
import unittest

import numpy as np
from scipy import stats

from tornPaper.channel import ApplyBsc, RandomBits
from tornPaper.coverSearch import (CoverExact, CoverTypical, ExactStarts,
                                   MismatchRate, TypicalityCheck,
                                   TypicalStarts)
from tornPaper.errors import ParameterError


def BruteForceCover(codeword, fragments, accepts):
    """Try every combination of admissible starts."""
    options = []
    for bits in fragments:
        options.append([s for s in range(len(codeword) - len(bits) + 1)
                        if accepts(codeword[s:s + len(bits)], bits)])
    for starts in itertools.product(*options):
        used = set()
        for start, bits in zip(starts, fragments):
            cells = set(range(start, start + len(bits)))
            if used & cells:
                break
            used |= cells
        else:
            return True
    return False


def RandomCase(rng):
    n = int(rng.integers(1, 13))
    codeword = RandomBits(n, rng)
    if rng.random() < 0.5:
        # consecutive pieces of the codeword, some dropped, maybe one flip
        cuts = sorted(set(rng.integers(1, n + 1, size=3).tolist()) | {n})
        pieces, start = [], 0
        for cut in cuts:
            pieces.append(codeword[start:cut])
            start = cut
        pieces = [p for p in pieces if p and rng.random() < 0.8] or [codeword]
        if rng.random() < 0.3:
            i = int(rng.integers(len(pieces)))
            j = int(rng.integers(len(pieces[i])))
            flipped = '1' if pieces[i][j] == '0' else '0'
            pieces[i] = pieces[i][:j] + flipped + pieces[i][j + 1:]
        fragments = pieces[:4]
    else:
        count = int(rng.integers(1, 5))
        fragments = [RandomBits(int(rng.integers(1, min(n, 4) + 1)), rng)
                     for _ in range(count)]
    return codeword, fragments


def AssertValidCover(test, codeword, fragments, alignment, accepts):
    intervals = sorted(alignment.Intervals(fragments))
    test.assertEqual(len(intervals), len(fragments))
    for (_, end), (start, _) in zip(intervals, intervals[1:]):
        test.assertLessEqual(end, start)
    for placement in alignment.placements:
        bits = fragments[placement.fragment]
        segment = codeword[placement.start:placement.start + len(bits)]
        test.assertTrue(accepts(segment, bits))
    test.assertEqual(alignment.covered, sum(len(f) for f in fragments))


class TestTypicality(unittest.TestCase):

    def testMismatchRate(self):
        self.assertEqual(MismatchRate('0000', '0101'), 0.5)
        with self.assertRaises(ParameterError):
            MismatchRate('000', '00')
        with self.assertRaises(ParameterError):
            MismatchRate('', '')

    def testBand(self):
        x = '0' * 10
        self.assertTrue(TypicalityCheck(x, x, 0.0, 0.0))
        self.assertFalse(TypicalityCheck(x, '1' + x[1:], 0.0, 0.0))
        self.assertTrue(TypicalityCheck(x, '1' + x[1:], 0.1, 0.5))
        self.assertFalse(TypicalityCheck(x, '11' + x[2:], 0.1, 0.5))
        # an exact match is atypical for a noisy channel with a narrow band
        self.assertFalse(TypicalityCheck(x, x, 0.1, 0.5))
        with self.assertRaises(ParameterError):
            TypicalityCheck(x, x, 0.5, 0.1)

    def testAcceptanceFrequency(self):
        rng = np.random.default_rng(17)
        n, p, eps = 1000, 0.1, 0.3
        accepted = 0
        for _ in range(1000):
            x = RandomBits(n, rng)
            accepted += TypicalityCheck(x, ApplyBsc(x, p, rng), p, eps)
        band = int(round(eps * p * n))
        expected = (stats.binom.cdf(p * n + band, n, p) -
                    stats.binom.cdf(p * n - band - 1, n, p))
        self.assertGreater(expected, 0.99)
        self.assertGreaterEqual(accepted / 1000.0, 0.99)

    def testStarts(self):
        self.assertEqual(ExactStarts('01010', '010'), [0, 2])
        self.assertEqual(ExactStarts('0000', '1'), [])
        self.assertEqual(TypicalStarts('0110', '01', 0.0, 0.0), [0])
        self.assertEqual(TypicalStarts('0110', '00', 0.25, 1.0), [0, 2])


class TestCoverExact(unittest.TestCase):

    def testExamples(self):
        alignment = CoverExact('0110', ['01', '10'])
        self.assertEqual(sorted(alignment.Intervals(['01', '10'])),
                         [(0, 2), (2, 4)])
        self.assertIsNone(CoverExact('0000', ['00', '00', '00']))
        self.assertIsNone(CoverExact('1010', ['101', '010']))
        self.assertIsNone(CoverExact('1010', ['11']))
        self.assertEqual(CoverExact('0101', []).covered, 0)

    def testIdenticalFragments(self):
        alignment = CoverExact('0000', ['00', '00'])
        self.assertEqual(sorted(p.start for p in alignment.placements), [0, 2])

    def testBacktracks(self):
        # '010' at its leftmost start blocks both starts of '01'
        fragments = ['010', '01']
        alignment = CoverExact('01010', fragments)
        self.assertIsNotNone(alignment)
        self.assertEqual(sorted(alignment.Intervals(fragments)),
                         [(0, 2), (2, 5)])
        AssertValidCover(self, '01010', fragments, alignment,
                         lambda a, b: a == b)

    def testAgainstBruteForce(self):
        rng = np.random.default_rng(2021)
        found = 0
        for _ in range(10000):
            codeword, fragments = RandomCase(rng)
            alignment = CoverExact(codeword, fragments)
            expected = BruteForceCover(codeword, fragments,
                                       lambda a, b: a == b)
            self.assertEqual(alignment is not None, expected,
                             (codeword, fragments))
            if alignment is not None:
                found += 1
                AssertValidCover(self, codeword, fragments, alignment,
                                 lambda a, b: a == b)
        self.assertGreater(found, 1000)


class TestCoverTypical(unittest.TestCase):

    def testNoNoiseIsExact(self):
        rng = np.random.default_rng(4)
        for _ in range(10000):
            codeword, fragments = RandomCase(rng)
            self.assertEqual(
                CoverTypical(codeword, fragments, 0.0, 0.0) is not None,
                CoverExact(codeword, fragments) is not None)

    def testAgainstBruteForce(self):
        rng = np.random.default_rng(77)
        p, eps = 0.1, 1.0

        def Accepts(segment, bits):
            return TypicalityCheck(segment, bits, p, eps)

        for _ in range(10000):
            codeword, fragments = RandomCase(rng)
            alignment = CoverTypical(codeword, fragments, p, eps)
            self.assertEqual(alignment is not None,
                             BruteForceCover(codeword, fragments, Accepts),
                             (codeword, fragments))
            if alignment is not None:
                AssertValidCover(self, codeword, fragments, alignment,
                                 Accepts)

    def testFragmentOrderIsIrrelevant(self):
        rng = np.random.default_rng(31)
        for _ in range(2000):
            codeword, fragments = RandomCase(rng)
            permuted = [fragments[i]
                        for i in rng.permutation(len(fragments))]
            self.assertEqual(CoverExact(codeword, fragments) is None,
                             CoverExact(codeword, permuted) is None)
            self.assertEqual(
                CoverTypical(codeword, fragments, 0.1, 1.0) is None,
                CoverTypical(codeword, permuted, 0.1, 1.0) is None)


if __name__ == '__main__':
    unittest.main(verbosity=2)

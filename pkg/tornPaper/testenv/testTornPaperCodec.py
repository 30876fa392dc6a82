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

from tornPaper.channel import (ChannelParams, Fragment, TornOutput,
                               Transmit)
from tornPaper.codec import (Codebook, DecodeIndexed, DecodeNoiseless,
                             DecodeNoisy, DecodeResult, DecodeResultToJson,
                             Encode, IndexedCodeLayout, MessageBitCount,
                             RandomMessage)
from tornPaper.distributions import FragmentLengthModel
from tornPaper.errors import CodebookSizeError, ParameterError
from tornPaper.hooks import Decoders


class TestIndexedCode(unittest.TestCase):

    def testLayout(self):
        layout = IndexedCodeLayout.ForBlock(8, 4)
        self.assertEqual(layout.indexBits, 1)
        self.assertEqual(layout.payloadBits, 3)
        self.assertEqual(layout.messageBits, 6)

        layout = IndexedCodeLayout.ForBlock(1024, 64)
        self.assertEqual(layout.fragmentCount, 16)
        self.assertEqual(layout.indexBits, 4)
        self.assertEqual(layout.rate, 60 / 64.0)
        self.assertEqual(layout.asymptoticRate, 1 - 10 / 64.0)

        self.assertEqual(IndexedCodeLayout.ForBlock(8, 8).indexBits, 0)
        with self.assertRaises(ParameterError):
            IndexedCodeLayout.ForBlock(10, 4)
        with self.assertRaises(ParameterError):
            IndexedCodeLayout.ForBlock(8, 1)

    def testEncoding(self):
        codebook = Codebook.Indexed(8, 4)
        self.assertEqual(codebook.size, 64)
        self.assertEqual(Encode(codebook, 0), '00001000')
        self.assertEqual(Encode(codebook, 0b101110), '01011110')
        self.assertEqual(codebook.Codeword(63), '01111111')
        with self.assertRaises(ParameterError):
            Encode(codebook, 64)
        with self.assertRaises(ParameterError):
            codebook.words

    def testRoundTripSmall(self):
        codebook = Codebook.Indexed(8, 4)
        params = ChannelParams(8, FragmentLengthModel.Fixed(4))
        rng = np.random.default_rng(8)
        for message in range(codebook.size):
            output = Transmit(Encode(codebook, message), params, rng)
            result = DecodeIndexed(codebook, output)
            self.assertEqual(result.message, message)
            self.assertEqual(result.covered, 8)

    def testRoundTripLarge(self):
        codebook = Codebook.Indexed(1024, 64)
        params = ChannelParams(1024, FragmentLengthModel.Fixed(64))
        rng = np.random.default_rng(1024)
        for _ in range(20):
            message = RandomMessage(codebook, rng)
            output = Transmit(Encode(codebook, message), params, rng)
            self.assertEqual(DecodeIndexed(codebook, output).message, message)

    def testMissingFragment(self):
        codebook = Codebook.Indexed(16, 4)
        codeword = Encode(codebook, 201)
        pieces = [Fragment(codeword[i:i + 4]) for i in range(0, 16, 4)]
        self.assertEqual(DecodeIndexed(codebook, TornOutput(16, pieces))
                         .message, 201)
        self.assertIsNone(DecodeIndexed(codebook, TornOutput(16, pieces[1:]))
                          .message)
        duplicated = pieces[:3] + [pieces[0]]
        self.assertIsNone(DecodeIndexed(codebook, TornOutput(16, duplicated))
                          .message)
        torn = [Fragment(codeword[:2]), Fragment(codeword[2:4])] + pieces[1:]
        self.assertIsNone(DecodeIndexed(codebook, TornOutput(16, torn))
                          .message)


class TestRandomCodebook(unittest.TestCase):

    def testMessageBits(self):
        self.assertEqual(MessageBitCount(16, 0.125), 2)
        self.assertEqual(MessageBitCount(24, 1 / 3.0), 8)
        self.assertEqual(MessageBitCount(16, 0.0), 0)
        with self.assertRaises(ParameterError):
            MessageBitCount(16, -0.1)

    def testGeneration(self):
        codebook = Codebook.Random(16, 0.5, 3)
        self.assertEqual(codebook.size, 256)
        self.assertEqual(codebook.words.shape, (256, 16))
        self.assertTrue(np.array_equal(codebook.words,
                                       Codebook.Random(16, 0.5, 3).words))
        self.assertFalse(np.array_equal(codebook.words,
                                        Codebook.Random(16, 0.5, 4).words))
        self.assertEqual(len(Encode(codebook, 255)), 16)

    def testTooLarge(self):
        with self.assertRaises(CodebookSizeError):
            Codebook.Random(32, 0.75, 0)

    def testRandomMessage(self):
        rng = np.random.default_rng(0)
        codebook = Codebook.Random(16, 0.25, 0)
        messages = set(RandomMessage(codebook, rng) for _ in range(200))
        self.assertEqual(messages, set(range(16)))


class TestCoverDecoders(unittest.TestCase):

    def setUp(self):
        self.codebook = Codebook.Random(32, 0.25, 5)
        self.rng = np.random.default_rng(6)

    def testWholeCodeword(self):
        unique = len(np.unique(self.codebook.words, axis=0))
        self.assertEqual(unique, self.codebook.size)
        for message in (0, 17, 255):
            output = TornOutput(32, [Fragment(Encode(self.codebook,
                                                     message))])
            result = DecodeNoiseless(self.codebook, output)
            self.assertEqual(result, DecodeResult(message, 1, 32))
            self.assertEqual(DecodeResultToJson(result),
                             {'message': message, 'candidates': 1,
                              'covered': 32})

    def testShortFragmentsAreDiscarded(self):
        # only fragments of at least log2(32) = 5 bits are used
        codeword = Encode(self.codebook, 42)
        output = TornOutput(32, [Fragment(codeword[:4]),
                                 Fragment(codeword[4:])])
        result = DecodeNoiseless(self.codebook, output)
        self.assertEqual(result.message, 42)
        self.assertEqual(result.covered, 28)

    def testNothingKept(self):
        result = DecodeNoiseless(self.codebook, TornOutput(32))
        self.assertIsNone(result.message)
        self.assertEqual(result.candidates, self.codebook.size)

    def testNoisyWithoutNoiseMatchesNoiseless(self):
        params = ChannelParams(32, FragmentLengthModel.Geometric(8))
        for _ in range(1000):
            message = RandomMessage(self.codebook, self.rng)
            output = Transmit(Encode(self.codebook, message), params,
                              self.rng)
            expected = DecodeNoiseless(self.codebook, output)
            self.assertEqual(DecodeNoisy(self.codebook, output, 0.0, 0.0),
                             expected)
            self.assertEqual(Decoders.Call('noisy', self.codebook, output,
                                           p=0.0, eps=0.0), expected)

    def testDecodingIgnoresFragmentOrder(self):
        params = ChannelParams(32, FragmentLengthModel.Geometric(8), p=0.02)
        for _ in range(200):
            message = RandomMessage(self.codebook, self.rng)
            output = Transmit(Encode(self.codebook, message), params,
                              self.rng)
            first = TornOutput(32, output.Shuffled(self.rng))
            second = TornOutput(32, output.Shuffled(self.rng))
            self.assertEqual(DecodeNoiseless(self.codebook, first),
                             DecodeNoiseless(self.codebook, second))
            self.assertEqual(DecodeNoisy(self.codebook, first, 0.02, 1.0),
                             DecodeNoisy(self.codebook, second, 0.02, 1.0))

        indexed = Codebook.Indexed(1024, 64)
        indexedParams = ChannelParams(1024, FragmentLengthModel.Fixed(64))
        output = Transmit(Encode(indexed, 12345), indexedParams, self.rng)
        for _ in range(5):
            shuffled = TornOutput(1024, output.Shuffled(self.rng))
            self.assertEqual(DecodeIndexed(indexed, shuffled).message, 12345)

    def testNoisyDecoding(self):
        codebook = Codebook.Random(4096, 0.0, 9)
        params = ChannelParams(4096, FragmentLengthModel.Fixed(4096), p=0.05)
        hits = 0
        for _ in range(100):
            output = Transmit(Encode(codebook, 0), params, self.rng)
            hits += DecodeNoisy(codebook, output, 0.05, 0.3).message == 0
        self.assertGreaterEqual(hits, 95)

    def testWrongCodebook(self):
        with self.assertRaises(ParameterError):
            DecodeNoiseless(Codebook.Indexed(32, 8), TornOutput(32))
        with self.assertRaises(ParameterError):
            DecodeIndexed(self.codebook, TornOutput(32))
        with self.assertRaises(ParameterError):
            DecodeNoiseless(self.codebook, TornOutput(64))


if __name__ == '__main__':
    unittest.main(verbosity=2)

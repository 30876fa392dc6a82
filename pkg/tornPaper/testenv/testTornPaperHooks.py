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

from tornPaper import codec  # registers the built-in decoders
from tornPaper.errors import ParameterError
from tornPaper.hooks import Decoders, FallbackException


class TestDecoders(unittest.TestCase):

    def tearDown(self):
        Decoders._registered.pop('testDecoder', None)

    def testBuiltIns(self):
        self.assertEqual(Decoders.Names(), ['indexed', 'noiseless', 'noisy'])
        self.assertIs(Decoders._registered['noisy'][-1], codec.DecodeNoisy)

    def testLatestRegistrationFirst(self):
        Decoders.Register('testDecoder', lambda value: ('general', value))
        Decoders.Register('testDecoder', lambda value: ('special', value))
        self.assertEqual(Decoders.Call('testDecoder', 3), ('special', 3))

    def testFallback(self):
        def Special(value):
            if value < 0:
                raise FallbackException()
            return 'special'

        Decoders.Register('testDecoder', lambda value: 'general')
        Decoders.Register('testDecoder', Special)
        self.assertEqual(Decoders.Call('testDecoder', 1), 'special')
        self.assertEqual(Decoders.Call('testDecoder', -1), 'general')

    def testEveryRegistrationDeclines(self):
        def Decline(*args, **kwargs):
            raise FallbackException()

        Decoders.Register('testDecoder', Decline)
        with self.assertRaises(ParameterError):
            Decoders.Call('testDecoder')

    def testUnknownName(self):
        with self.assertRaises(ParameterError):
            Decoders.Call('psychic')


if __name__ == '__main__':
    unittest.main(verbosity=2)

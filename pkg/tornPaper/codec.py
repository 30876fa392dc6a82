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
Encoders and decoders.

Two code families are provided:

- random codebooks of ``2^ceil(nR)`` Bern(1/2) codewords, decoded by searching
  for the unique codeword that the long output fragments cover (exactly, or
  typically when the channel is noisy);
- the constructive index code for fixed-length tearing, where every fragment
  starts with the binary index of its position.
"""
from __future__ import absolute_import

import logging
import math
from collections import namedtuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .capacity import OptimalFilterThreshold
from .channel import ArrayToBits, BitsToArray, ValidateCrossover
from .coverSearch import BAND_SLACK, CoverExact, CoverTypical, TypicalityBand
from .distributions import Log2, MinKeptLength
from .errors import CodebookSizeError, ParameterError
from .hooks import Decoders, FallbackException

if False:
    from typing import *
    from .channel import TornOutput

_logger = logging.getLogger(__name__)

RANDOM = 'random'
INDEXED = 'indexed'

MAX_MESSAGE_BITS = 20


def MessageBitCount(n, rate):
    # type: (int, float) -> int
    """``ceil(n R)``, tolerant of floating point noise in ``n * R``."""
    if rate < 0:
        raise ParameterError('Rate must be nonnegative, got {0!r}'.format(rate))
    return max(0, int(math.ceil(n * rate - 1e-9)))


class IndexedCodeLayout(namedtuple('IndexedCodeLayout',
                                   ['n', 'fragLen', 'indexBits',
                                    'payloadBits'])):
    """Fragment layout of the index code: ``indexBits`` position bits followed
    by ``payloadBits`` message bits in each of the ``n / fragLen`` fragments.
    """
    __slots__ = ()

    @classmethod
    def ForBlock(cls, n, fragLen):
        # type: (int, int) -> IndexedCodeLayout
        Log2(n)
        fragLen = int(fragLen)
        if fragLen < 1 or n % fragLen:
            raise ParameterError('Fragment length {0!r} must divide the block '
                                 'length {1}'.format(fragLen, n))
        fragmentCount = n // fragLen
        indexBits = int(math.ceil(math.log2(fragmentCount))) \
            if fragmentCount > 1 else 0
        if indexBits >= fragLen:
            raise ParameterError('Fragments of {0} bits cannot hold a '
                                 '{1}-bit index'.format(fragLen, indexBits))
        return cls(n, fragLen, indexBits, fragLen - indexBits)

    @property
    def fragmentCount(self):
        return self.n // self.fragLen

    @property
    def messageBits(self):
        return self.fragmentCount * self.payloadBits

    @property
    def rate(self):
        """Constructive rate ``payloadBits / fragLen``."""
        return self.payloadBits / float(self.fragLen)

    @property
    def asymptoticRate(self):
        """``1 - log2(n) / fragLen``, the finite-n value of ``1 - alpha``."""
        return 1.0 - Log2(self.n) / self.fragLen


class Codebook(object):
    """An enumerable set of length-``n`` binary codewords.

    Random codebooks are generated once from their seed and kept as a
    ``(size, n)`` uint8 array; index codebooks compute codewords on demand.
    """
    __slots__ = ('n', 'rate', 'kind', 'seed', 'layout', 'messageBits',
                 '_words')

    def __init__(self, n, rate, kind, seed=None, layout=None, words=None):
        self.n = n
        self.rate = rate
        self.kind = kind
        self.seed = seed
        self.layout = layout
        self.messageBits = (layout.messageBits if kind == INDEXED
                            else MessageBitCount(n, rate))
        self._words = words

    def __repr__(self):
        return ('{0.__class__.__name__}(kind={0.kind!r}, n={0.n}, '
                'rate={0.rate!r})'.format(self))

    @classmethod
    def Random(cls, n, rate, seed):
        # type: (int, float, int) -> Codebook
        """
        Raises
        ------
        CodebookSizeError
            If the codebook would hold more than 2^20 codewords.
        """
        Log2(n)
        messageBits = MessageBitCount(n, rate)
        if messageBits > MAX_MESSAGE_BITS:
            raise CodebookSizeError(
                'Codebook of 2^{0} codewords exceeds the 2^{1} limit (n={2}, '
                'R={3!r})'.format(messageBits, MAX_MESSAGE_BITS, n, rate))
        rng = np.random.default_rng(seed)
        words = rng.integers(0, 2, size=(2 ** messageBits, n), dtype=np.uint8)
        _logger.debug('Generated random codebook of %d codewords, n=%d',
                      len(words), n)
        return cls(n, rate, RANDOM, seed=seed, words=words)

    @classmethod
    def Indexed(cls, n, fragLen):
        # type: (int, int) -> Codebook
        layout = IndexedCodeLayout.ForBlock(n, fragLen)
        return cls(n, layout.rate, INDEXED, layout=layout)

    @property
    def size(self):
        return 2 ** self.messageBits

    @property
    def words(self):
        # type: () -> np.ndarray
        if self._words is None:
            raise ParameterError('Index codebooks are not stored')
        return self._words

    def Codeword(self, message):
        # type: (int) -> str
        return Encode(self, message)


DecodeResult = namedtuple('DecodeResult', ['message', 'candidates', 'covered'])


def DecodeResultToJson(result):
    # type: (DecodeResult) -> Dict[str, Any]
    return {'message': result.message, 'candidates': result.candidates,
            'covered': result.covered}


def _CheckMessage(codebook, message):
    if not 0 <= message < codebook.size:
        raise ParameterError('Message {0!r} outside [0, {1})'.format(
            message, codebook.size))


def Encode(codebook, message):
    # type: (Codebook, int) -> str
    """Map a message index to its codeword.

    Parameters
    ----------
    codebook : Codebook
    message : int

    Returns
    -------
    str
    """
    _CheckMessage(codebook, message)
    if codebook.kind == RANDOM:
        return ArrayToBits(codebook.words[message])

    layout = codebook.layout
    payload = format(message, '0{0}b'.format(layout.messageBits)) \
        if layout.messageBits else ''
    pieces = []
    for position in range(layout.fragmentCount):
        if layout.indexBits:
            pieces.append(format(position, '0{0}b'.format(layout.indexBits)))
        start = position * layout.payloadBits
        pieces.append(payload[start:start + layout.payloadBits])
    return ''.join(pieces)


def RandomMessage(codebook, rng):
    # type: (Codebook, np.random.Generator) -> int
    """Draw a message uniformly from the codebook."""
    if codebook.messageBits <= 62:
        return int(rng.integers(0, codebook.size))
    bits = ArrayToBits(rng.integers(0, 2, size=codebook.messageBits,
                                    dtype=np.uint8))
    return int(bits, 2)


def _AdmissibleMask(words, bits, p, eps):
    """Boolean mask of the codewords with at least one start where ``bits``
    passes the mismatch-rate band.
    """
    length = len(bits)
    if length > words.shape[1]:
        return np.zeros(len(words), dtype=bool)
    windows = sliding_window_view(words, length, axis=1)
    mismatches = (windows != BitsToArray(bits)).sum(axis=2)
    band = TypicalityBand(p, eps) + BAND_SLACK
    return (np.abs(mismatches / float(length) - p) <= band).any(axis=1)


def _DecodeByCover(codebook, output, theta, p, eps, cover):
    if codebook.kind != RANDOM:
        raise ParameterError('Cover decoding needs a random codebook')
    if output.n != codebook.n:
        raise ParameterError('Output block length {0} does not match the '
                             'codebook ({1})'.format(output.n, codebook.n))
    cutoff = MinKeptLength(codebook.n, theta)
    kept = [f for f in output if f.length >= cutoff]

    mask = np.ones(codebook.size, dtype=bool)
    for bits in set(f.bits for f in kept):
        mask &= _AdmissibleMask(codebook.words, bits, p, eps)

    found = []
    covered = 0
    for message in np.flatnonzero(mask).tolist():
        alignment = cover(Encode(codebook, message), kept)
        if alignment is not None:
            found.append(message)
            covered = alignment.covered
    _logger.debug('Cover decoding kept %d of %d fragments, %d candidates',
                  len(kept), len(output), len(found))
    if len(found) == 1:
        return DecodeResult(found[0], 1, covered)
    return DecodeResult(None, len(found), 0)


def DecodeNoiseless(codebook, output, p=0.0, eps=0.0):
    # type: (Codebook, TornOutput, float, float) -> DecodeResult
    """Discard fragments shorter than ``log2(n)`` bits and return the unique
    codeword that the rest cover exactly.

    Zero or several covering codewords are a decoding failure
    (``message`` is None).
    """
    return _DecodeByCover(codebook, output, 1.0, 0.0, 0.0, CoverExact)


def DecodeNoisy(codebook, output, p, eps):
    # type: (Codebook, TornOutput, float, float) -> DecodeResult
    """Discard fragments shorter than ``log2(n) / (1 - H(p))`` bits and return
    the unique codeword that the rest typically cover.
    """
    ValidateCrossover(p)
    theta = OptimalFilterThreshold(p)

    def cover(codeword, fragments):
        return CoverTypical(codeword, fragments, p, eps)

    return _DecodeByCover(codebook, output, theta, p, eps, cover)


def _DecodeNoisyWithoutNoise(codebook, output, p=0.0, eps=0.0):
    # typical covering with a zero-width band is exact covering
    if p != 0.0 or eps != 0.0:
        raise FallbackException()
    return DecodeNoiseless(codebook, output)


def DecodeIndexed(codebook, output, p=0.0, eps=0.0):
    # type: (Codebook, TornOutput, float, float) -> DecodeResult
    """Order the fragments by their index prefix and concatenate payloads.

    A fragment of the wrong length, an out-of-range or duplicate index, or a
    missing index is a decoding failure.
    """
    layout = codebook.layout
    if codebook.kind != INDEXED:
        raise ParameterError('Index decoding needs an index codebook')
    failure = DecodeResult(None, 0, 0)
    payloads = {}
    for fragment in output:
        if fragment.length != layout.fragLen:
            return failure
        position = int(fragment.bits[:layout.indexBits], 2) \
            if layout.indexBits else 0
        if position >= layout.fragmentCount or position in payloads:
            return failure
        payloads[position] = fragment.bits[layout.indexBits:]
    if len(payloads) != layout.fragmentCount:
        return failure
    bits = ''.join(payloads[i] for i in range(layout.fragmentCount))
    message = int(bits, 2) if bits else 0
    return DecodeResult(message, 1, output.TotalLength())


Decoders.Register('noiseless', DecodeNoiseless)
Decoders.Register('noisy', DecodeNoisy)
Decoders.Register('noisy', _DecodeNoisyWithoutNoise)
Decoders.Register('indexed', DecodeIndexed)

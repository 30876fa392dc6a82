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
The torn-paper channel: binary symmetric noise, random tearing, independent
fragment deletion and shuffling.

Bit strings are plain ``str`` objects over ``'0'``/``'1'``; the heavy lifting
(noise, length sampling, deletion draws) is done on numpy arrays.
"""
from __future__ import absolute_import

import logging
from collections import namedtuple

import numpy as np

from .distributions import (ZERO, DeletionPolicy, FragmentLengthModel, Log2,
                            MinKeptLength, SampleLengths)
from .errors import ParameterError

if False:
    from typing import *

_logger = logging.getLogger(__name__)

_ZERO_CHAR = ord('0')


def BitsToArray(bits):
    # type: (str) -> np.ndarray
    return np.frombuffer(bits.encode('ascii'), dtype=np.uint8) - _ZERO_CHAR


def ArrayToBits(array):
    # type: (np.ndarray) -> str
    return (np.asarray(array, dtype=np.uint8) + _ZERO_CHAR).tobytes().decode(
        'ascii')


def RandomBits(n, rng):
    # type: (int, np.random.Generator) -> str
    """Return ``n`` i.i.d. Bern(1/2) bits."""
    return ArrayToBits(rng.integers(0, 2, size=n, dtype=np.uint8))


def ValidateCrossover(p):
    # type: (float) -> float
    if not 0.0 <= p < 0.5:
        raise ParameterError('Crossover probability must lie in [0, 0.5), got '
                             '{0!r}'.format(p))
    return float(p)


class Fragment(namedtuple('Fragment', ['bits'])):
    """A contiguous piece of the (possibly noisy) codeword."""
    __slots__ = ()

    def __new__(cls, bits):
        if not bits or bits.strip('01'):
            raise ParameterError('Fragments are non-empty binary strings, got '
                                 '{0!r}'.format(bits))
        return super(Fragment, cls).__new__(cls, bits)

    @property
    def length(self):
        return len(self.bits)


class TornOutput(object):
    """The channel output: an unordered multiset of fragments.

    Fragments are stored in a canonical order (by length, then
    lexicographically) so equality and hashing ignore the order they were
    produced in. Consumers must not attach meaning to that order.
    """
    __slots__ = ('_n', '_fragments')

    def __init__(self, n, fragments=()):
        # type: (int, Iterable[Fragment]) -> None
        """
        Parameters
        ----------
        n : int
            Block length of the transmitted codeword.
        fragments : Iterable[Fragment]
        """
        self._n = int(n)
        self._fragments = tuple(sorted(fragments,
                                       key=lambda f: (f.length, f.bits)))
        if self.TotalLength() > self._n:
            raise ParameterError('Fragments hold more bits than the block '
                                 'length {0}'.format(self._n))

    def __eq__(self, other):
        if not isinstance(other, TornOutput):
            return NotImplemented
        return self._n == other._n and self._fragments == other._fragments

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash((self._n, self._fragments))

    def __len__(self):
        return len(self._fragments)

    def __iter__(self):
        return iter(self._fragments)

    def __repr__(self):
        return '{0.__class__.__name__}(n={0._n}, count={1})'.format(
            self, len(self._fragments))

    @property
    def n(self):
        return self._n

    @property
    def fragments(self):
        return self._fragments

    def TotalLength(self):
        # type: () -> int
        return sum(f.length for f in self._fragments)

    def Shuffled(self, rng):
        # type: (np.random.Generator) -> List[Fragment]
        """Return the fragments as a list in a uniformly random order."""
        order = rng.permutation(len(self._fragments))
        return [self._fragments[i] for i in order]

    def ToText(self):
        # type: () -> str
        """Serialize to the dump format: a ``n=<n> count=<k>`` header line
        followed by one fragment per line.
        """
        lines = ['n={0} count={1}'.format(self._n, len(self._fragments))]
        lines.extend(f.bits for f in self._fragments)
        return '\n'.join(lines) + '\n'

    @classmethod
    def FromText(cls, text):
        # type: (str) -> TornOutput
        lines = text.splitlines()
        if not lines:
            raise ParameterError('Empty torn output text')
        try:
            fields = dict(item.split('=', 1) for item in lines[0].split())
            n = int(fields['n'])
            count = int(fields['count'])
        except (KeyError, ValueError):
            raise ParameterError('Malformed torn output header: '
                                 '{0!r}'.format(lines[0]))
        bodies = [line.strip() for line in lines[1:] if line.strip()]
        if len(bodies) != count:
            raise ParameterError('Header announces {0} fragments, found '
                                 '{1}'.format(count, len(bodies)))
        return cls(n, [Fragment(b) for b in bodies])


class ChannelParams(namedtuple('ChannelParams', ['n', 'model', 'policy', 'p'])):
    __slots__ = ()

    def __new__(cls, n, model, policy=None, p=0.0):
        Log2(n)
        if not isinstance(model, FragmentLengthModel):
            raise ParameterError('Expected a FragmentLengthModel, got '
                                 '{0!r}'.format(model))
        if policy is None:
            policy = DeletionPolicy.Zero()
        return super(ChannelParams, cls).__new__(cls, int(n), model, policy,
                                                 ValidateCrossover(p))


# The survival flags are all True until ApplyDeletions fills them in.
TearTrace = namedtuple('TearTrace', ['lengths', 'kept'])


def TearLengths(n, model, rng):
    # type: (int, FragmentLengthModel, np.random.Generator) -> np.ndarray
    """Sample fragment lengths until they cover ``n`` bits.

    Zero-length draws are skipped and the last fragment is truncated so the
    lengths sum to exactly ``n``.
    """
    if n < 1:
        raise ParameterError('Cannot tear an empty string')
    mean = max(model.Mean(max(n, 2)), 1.0)
    chunk = int(1.5 * n / mean) + 16
    pieces = []
    total = 0
    while total < n:
        draws = SampleLengths(model, max(n, 2), chunk, rng)
        draws = draws[draws > 0]
        pieces.append(draws)
        total += int(draws.sum())
    lengths = np.concatenate(pieces)
    ends = np.cumsum(lengths)
    last = int(np.searchsorted(ends, n))
    lengths = lengths[:last + 1].copy()
    lengths[last] -= ends[last] - n
    return lengths


def Tear(x, model, rng):
    # type: (str, FragmentLengthModel, np.random.Generator) -> Tuple[List[Fragment], TearTrace]
    """Tear ``x`` into consecutive fragments.

    Returns
    -------
    Tuple[List[Fragment], TearTrace]
        The fragments in their original order, and the trace of their lengths.
    """
    lengths = TearLengths(len(x), model, rng)
    starts = np.concatenate(([0], np.cumsum(lengths)[:-1]))
    fragments = [Fragment(x[start:start + length])
                 for start, length in zip(starts.tolist(), lengths.tolist())]
    trace = TearTrace(lengths, np.ones(len(lengths), dtype=bool))
    return fragments, trace


def DrawSurvival(lengths, policy, n, rng):
    # type: (np.ndarray, DeletionPolicy, int, np.random.Generator) -> np.ndarray
    """Return independent keep flags, fragment ``i`` kept with probability
    ``1 - d(lengths[i])``.
    """
    lengths = np.asarray(lengths)
    if policy.kind == ZERO:
        return np.ones(len(lengths), dtype=bool)
    return rng.random(len(lengths)) >= policy.Probs(lengths, n)


def ApplyDeletions(fragments, policy, n, rng):
    # type: (Sequence[Fragment], DeletionPolicy, int, np.random.Generator) -> Tuple[List[Fragment], np.ndarray]
    """Independently drop fragments according to ``policy``.

    Returns
    -------
    Tuple[List[Fragment], np.ndarray]
        The surviving fragments (original order) and the per-fragment flags.
    """
    kept = DrawSurvival([f.length for f in fragments], policy, n, rng)
    return [f for f, k in zip(fragments, kept) if k], kept


def ApplyBsc(x, p, rng):
    # type: (str, float, np.random.Generator) -> str
    """Flip each bit of ``x`` independently with probability ``p``."""
    ValidateCrossover(p)
    if p == 0.0 or not x:
        return x
    flips = (rng.random(len(x)) < p).astype(np.uint8)
    return ArrayToBits(BitsToArray(x) ^ flips)


def SampleTrace(params, rng):
    # type: (ChannelParams, np.random.Generator) -> TearTrace
    """Sample the tearing and deletion pattern of one channel use without
    materialising any bits.
    """
    lengths = TearLengths(params.n, params.model, rng)
    kept = DrawSurvival(lengths, params.policy, params.n, rng)
    return TearTrace(lengths, kept)


def TransmitTraced(x, params, rng):
    # type: (str, ChannelParams, np.random.Generator) -> Tuple[TornOutput, TearTrace]
    """Like `Transmit`, also returning the tear trace."""
    if len(x) != params.n:
        raise ParameterError('Codeword has {0} bits, channel expects '
                             '{1}'.format(len(x), params.n))
    noisy = ApplyBsc(x, params.p, rng)
    fragments, trace = Tear(noisy, params.model, rng)
    survivors, kept = ApplyDeletions(fragments, params.policy, params.n, rng)
    order = rng.permutation(len(survivors))
    output = TornOutput(params.n, [survivors[i] for i in order])
    return output, trace._replace(kept=kept)


def Transmit(x, params, rng):
    # type: (str, ChannelParams, np.random.Generator) -> TornOutput
    """Send ``x`` through the channel: BSC noise, tearing, deletion, then a
    uniformly random shuffle.
    """
    return TransmitTraced(x, params, rng)[0]


def TraceStatistics(trace, n, theta):
    # type: (TearTrace, int, float) -> Tuple[float, float]
    """Per-use coverage and alignment statistics of a trace.

    Returns
    -------
    Tuple[float, float]
        ``(1/n) sum N_i 1{kept, N_i >= theta log n}`` and
        ``(log n / n) sum 1{kept, N_i >= theta log n}``.
    """
    lengths = np.asarray(trace.lengths)
    mask = np.asarray(trace.kept) & (lengths >= MinKeptLength(n, theta))
    coverage = float(lengths[mask].sum()) / n
    alignment = Log2(n) * int(mask.sum()) / n
    return coverage, alignment

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
Placement of output fragments onto a candidate codeword.

A cover assigns every fragment a start position in the codeword such that the
occupied intervals are pairwise disjoint and each fragment matches the
codeword segment under it, either exactly or in the typical-set sense of a
binary symmetric channel.
"""
from __future__ import absolute_import

from collections import namedtuple

from .errors import ParameterError

if False:
    from typing import *

# Mismatch-rate band floor, so that p = 0 does not give a zero-width band
# unless eps is also 0.
TYPICALITY_FLOOR = 0.01
BAND_SLACK = 1e-12

Placement = namedtuple('Placement', ['fragment', 'start'])


class Alignment(namedtuple('Alignment', ['placements', 'covered'])):
    """Disjoint placement of fragments, indexed by their position in the
    sequence handed to the search.
    """
    __slots__ = ()

    def Intervals(self, fragments):
        # type: (Sequence[Any]) -> List[Tuple[int, int]]
        """Half-open ``(start, end)`` intervals of the placements."""
        bits = _BitsOf(fragments)
        return [(p.start, p.start + len(bits[p.fragment]))
                for p in self.placements]


def _BitsOf(fragments):
    return [getattr(f, 'bits', f) for f in fragments]


def MismatchRate(segX, segY):
    # type: (str, str) -> float
    if len(segX) != len(segY):
        raise ParameterError('Segments differ in length: {0} vs {1}'.format(
            len(segX), len(segY)))
    if not segX:
        raise ParameterError('Segments must be non-empty')
    return sum(a != b for a, b in zip(segX, segY)) / float(len(segX))


def TypicalityBand(p, eps):
    # type: (float, float) -> float
    return eps * max(p, TYPICALITY_FLOOR)


def TypicalityCheck(segX, segY, p, eps):
    # type: (str, str, float, float) -> bool
    """Whether a codeword segment and an output fragment look like an input
    and output of BSC(p): their mismatch rate is within
    ``eps * max(p, 0.01)`` of ``p``.

    Parameters
    ----------
    segX : str
        Codeword segment.
    segY : str
        Output fragment.
    p : float
    eps : float

    Returns
    -------
    bool
    """
    if not 0.0 <= p < 0.5:
        raise ParameterError('Crossover probability must lie in [0, 0.5), got '
                             '{0!r}'.format(p))
    rate = MismatchRate(segX, segY)
    return abs(rate - p) <= TypicalityBand(p, eps) + BAND_SLACK


def ExactStarts(codeword, bits):
    # type: (str, str) -> List[int]
    """All (possibly overlapping) start positions of ``bits`` in
    ``codeword``, left to right.
    """
    starts = []
    start = codeword.find(bits)
    while start != -1:
        starts.append(start)
        start = codeword.find(bits, start + 1)
    return starts


def TypicalStarts(codeword, bits, p, eps):
    # type: (str, str, float, float) -> List[int]
    """Start positions where ``bits`` is typical with the codeword segment."""
    length = len(bits)
    return [s for s in range(len(codeword) - length + 1)
            if TypicalityCheck(codeword[s:s + length], bits, p, eps)]


def FindCover(n, fragments, startsFor):
    # type: (int, Sequence[Any], Callable[[str], List[int]]) -> Optional[Alignment]
    """Exact backtracking search for a disjoint placement of every fragment.

    Fragments are tried longest first and candidate starts left to right.
    Failed states ``(depth, occupied positions, lower bound)`` are memoised;
    identical fragments are only placed at increasing starts, and a branch is
    abandoned as soon as the remaining fragments hold more bits than the
    free positions.

    Parameters
    ----------
    n : int
        Codeword length.
    fragments : Sequence[Union[Fragment, str]]
    startsFor : Callable[[str], List[int]]
        Returns the admissible start positions of a fragment.

    Returns
    -------
    Optional[Alignment]
    """
    bits = _BitsOf(fragments)
    count = len(bits)
    order = sorted(range(count), key=lambda i: (-len(bits[i]), bits[i]))

    candidates = {}
    for b in set(bits):
        candidates[b] = [s for s in startsFor(b) if 0 <= s <= n - len(b)]
        if not candidates[b]:
            return None

    remaining = [0] * (count + 1)
    for depth in range(count - 1, -1, -1):
        remaining[depth] = remaining[depth + 1] + len(bits[order[depth]])

    starts = [None] * count
    failed = set()

    def Search(depth, occupied, free):
        if depth == count:
            return True
        index = order[depth]
        current = bits[index]
        lowest = -1
        if depth and bits[order[depth - 1]] == current:
            lowest = starts[order[depth - 1]]
        key = (depth, occupied, lowest)
        if key in failed or remaining[depth] > free:
            return False
        window = (1 << len(current)) - 1
        for start in candidates[current]:
            if start <= lowest:
                continue
            mask = window << start
            if occupied & mask:
                continue
            starts[index] = start
            if Search(depth + 1, occupied | mask, free - len(current)):
                return True
        starts[index] = None
        failed.add(key)
        return False

    if not Search(0, 0, n):
        return None
    placements = tuple(Placement(i, starts[i]) for i in range(count))
    return Alignment(placements, remaining[0])


def CoverExact(codeword, fragments):
    # type: (str, Sequence[Any]) -> Optional[Alignment]
    """Place every fragment as an exact substring of ``codeword`` at pairwise
    disjoint intervals, or return None.
    """
    return FindCover(len(codeword), fragments,
                     lambda bits: ExactStarts(codeword, bits))


def CoverTypical(codeword, fragments, p, eps):
    # type: (str, Sequence[Any], float, float) -> Optional[Alignment]
    """Like `CoverExact`, but a fragment may sit wherever it passes
    `TypicalityCheck` against the codeword segment.
    """
    return FindCover(len(codeword), fragments,
                     lambda bits: TypicalStarts(codeword, bits, p, eps))

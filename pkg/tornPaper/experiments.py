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
Monte Carlo harness: decoding error rates, empirical checks that the coverage,
alignment and per-bucket fragment counts concentrate around their finite-n
expectations, and the inner/outer bound sweep.

Trial ``t`` of a run seeded with ``s`` always draws from the stream
``SeedSequence(s, spawn_key=(t,))``, so reports do not depend on the number of
workers or the order in which trials finish.
"""
from __future__ import absolute_import

import csv
import io
import logging
import math
import os
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ._config import DEFAULT_SEED, GetThreadCount
from .capacity import ComputeNoisyBounds, FiniteNFA
from .channel import SampleTrace, TraceStatistics, TransmitTraced
from .codec import INDEXED, RANDOM, Codebook, Encode, RandomMessage
from .distributions import Log2, Support
from .errors import (ConsistencyError, DensityUndefinedError,
                     ParameterError)
from .hooks import Decoders

if False:
    from typing import *
    from .channel import ChannelParams
    from .distributions import FragmentLengthModel

_logger = logging.getLogger(__name__)

MIN_CONCENTRATION_TRIALS = 100
GAP_SLACK = 1e-9


class Estimate(namedtuple('Estimate', ['mean', 'stderr'])):
    __slots__ = ()

    @classmethod
    def FromSamples(cls, values):
        # type: (Sequence[float]) -> Estimate
        values = np.asarray(values, dtype=float)
        if not len(values):
            return cls(float('nan'), float('nan'))
        if len(values) == 1:
            return cls(float(values[0]), 0.0)
        return cls(float(values.mean()),
                   float(values.std(ddof=1) / math.sqrt(len(values))))

    def ToJson(self):
        return {'mean': self.mean, 'stderr': self.stderr}


class ExperimentReport(namedtuple('ExperimentReport',
                                  ['label', 'trials', 'errors', 'errorRate',
                                   'empiricalF', 'empiricalACount',
                                   'statistic', 'expected', 'band',
                                   'deviationFreq', 'analyticBound'])):
    """Aggregated result of a Monte Carlo run.

    ``statistic`` is the estimate of the quantity a concentration check is
    about, ``expected`` its finite-n expectation and ``band`` the absolute
    deviation beyond which a trial counts towards ``deviationFreq``. Fields
    that do not apply to a run are None.
    """
    __slots__ = ()

    def ToJson(self):
        # type: () -> Dict[str, Any]
        def estimate(value):
            return None if value is None else value.ToJson()

        return {
            'label': self.label,
            'trials': self.trials,
            'errors': self.errors,
            'error_rate': self.errorRate,
            'empirical_F': estimate(self.empiricalF),
            'empirical_A_count': estimate(self.empiricalACount),
            'statistic': estimate(self.statistic),
            'expected': self.expected,
            'band': self.band,
            'deviation_freq': self.deviationFreq,
            'analytic_bound': self.analyticBound,
        }


SweepRow = namedtuple('SweepRow', ['invAlpha', 'p', 'rIn', 'rOut', 'gap'])

SWEEP_HEADER = ('inv_alpha', 'p', 'r_in', 'r_out', 'gap')

CodebookSpec = namedtuple('CodebookSpec', ['kind', 'rate', 'seed', 'fragLen'])


def TrialRng(seed, trial):
    # type: (int, int) -> np.random.Generator
    """Independent random stream of one trial."""
    return np.random.default_rng(np.random.SeedSequence(seed,
                                                        spawn_key=(trial,)))


def _RunTrials(func, trials):
    """Evaluate ``func(t)`` for every trial and return results in trial
    order.
    """
    workers = min(GetThreadCount(), max(trials, 1))
    _logger.info('Running %d trials on %d worker(s)', trials, workers)
    if workers == 1:
        return [func(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, range(trials)))


def BuildCodebook(n, spec):
    # type: (int, CodebookSpec) -> Codebook
    if spec.kind == RANDOM:
        return Codebook.Random(n, spec.rate,
                               DEFAULT_SEED if spec.seed is None else spec.seed)
    if spec.kind == INDEXED:
        if spec.fragLen is None:
            raise ParameterError('Index codebooks need a fragment length')
        return Codebook.Indexed(n, spec.fragLen)
    raise ParameterError('Unknown codebook kind {0!r}'.format(spec.kind))


def RunErrorRate(params, codebookSpec, decoder, trials, seed=DEFAULT_SEED,
                 eps=0.0, theta=1.0, dumpDir=None):
    # type: (ChannelParams, CodebookSpec, str, int, int, float, float, Optional[str]) -> ExperimentReport
    """Estimate the block error rate of a code over the channel.

    Each trial draws a uniform message, encodes it, transmits it and decodes
    the output with the decoder registered as ``decoder``.

    Parameters
    ----------
    params : ChannelParams
    codebookSpec : CodebookSpec
    decoder : str
        One of the names registered in `hooks.Decoders`.
    trials : int
    seed : int
    eps : float
        Typicality band width for the noisy decoder.
    theta : float
        Threshold of the reported empirical coverage/alignment statistics.
    dumpDir : Optional[str]
        If given, every trial's output is written there in the dump format.

    Returns
    -------
    ExperimentReport
    """
    if trials < 1:
        raise ParameterError('Need at least one trial')
    codebook = BuildCodebook(params.n, codebookSpec)
    if dumpDir:
        os.makedirs(dumpDir, exist_ok=True)

    def Trial(t):
        rng = TrialRng(seed, t)
        message = RandomMessage(codebook, rng)
        output, trace = TransmitTraced(Encode(codebook, message), params, rng)
        result = Decoders.Call(decoder, codebook, output, p=params.p, eps=eps)
        if dumpDir:
            path = os.path.join(dumpDir, 'trial_{0:05d}.txt'.format(t))
            with open(path, 'w') as f:
                f.write(output.ToText())
        return (result.message != message,) + TraceStatistics(trace,
                                                              params.n, theta)

    results = _RunTrials(Trial, trials)
    errors = sum(1 for r in results if r[0])
    _logger.info('%s decoding: %d errors in %d trials', decoder, errors,
                 trials)
    return ExperimentReport(
        label='error_rate:{0}'.format(decoder), trials=trials, errors=errors,
        errorRate=errors / float(trials),
        empiricalF=Estimate.FromSamples([r[1] for r in results]),
        empiricalACount=Estimate.FromSamples([r[2] for r in results]),
        statistic=None, expected=None, band=None, deviationFreq=None,
        analyticBound=None)


def _SampleStatistics(params, theta, trials, seed):
    def Trial(t):
        return TraceStatistics(SampleTrace(params, TrialRng(seed, t)),
                               params.n, theta)

    return np.array(_RunTrials(Trial, trials), dtype=float).reshape(trials, 2)


def _VerifyConcentration(label, column, params, theta, trials, eps, seed):
    if trials < MIN_CONCENTRATION_TRIALS:
        raise ParameterError('Concentration checks need at least {0} trials, '
                             'got {1}'.format(MIN_CONCENTRATION_TRIALS, trials))
    expected = FiniteNFA(params.model, params.policy, params.n, theta)[column]
    samples = _SampleStatistics(params, theta, trials, seed)
    band = eps * expected
    deviations = np.abs(samples[:, column] - expected) > band
    return ExperimentReport(
        label=label, trials=trials, errors=None, errorRate=None,
        empiricalF=Estimate.FromSamples(samples[:, 0]),
        empiricalACount=Estimate.FromSamples(samples[:, 1]),
        statistic=Estimate.FromSamples(samples[:, column]),
        expected=expected, band=band,
        deviationFreq=float(deviations.mean()), analyticBound=None)


def VerifyCoverageConcentration(params, theta, trials, eps,
                                seed=DEFAULT_SEED):
    # type: (ChannelParams, float, int, float, int) -> ExperimentReport
    """Fraction of trials whose covered fraction
    ``(1/n) sum N_i 1{kept, N_i >= theta log n}`` deviates from ``F_n`` by
    more than ``eps * F_n``.
    """
    return _VerifyConcentration('coverage', 0, params, theta, trials, eps,
                                seed)


def VerifyAlignmentConcentration(params, theta, trials, eps,
                                 seed=DEFAULT_SEED):
    # type: (ChannelParams, float, int, float, int) -> ExperimentReport
    """Fraction of trials whose alignment statistic
    ``(log n / n) sum 1{kept, N_i >= theta log n}`` deviates from ``A_n`` by
    more than ``eps * A_n``.
    """
    return _VerifyConcentration('alignment', 1, params, theta, trials, eps,
                                seed)


def BucketDeviationBound(n, meanLen, eps):
    # type: (int, float, float) -> float
    """Analytic bound on the probability that a bucket count strays more than
    ``eps * n / meanLen`` from its mean.
    """
    return min(1.0, 2.0 * math.exp(-n * eps * eps / (2.0 * meanLen)) +
               2.0 * math.exp(-8.0 * eps * eps * meanLen * n / (1.0 + 2.0 * eps)))


def BucketIndices(lengths, n, buckets, maxBucket):
    # type: (np.ndarray, int, int, int) -> np.ndarray
    """Bucket ``k`` holds lengths in ``[(k-1)/L log n, k/L log n)``; every
    length at or above ``(J/L) log n`` goes to the overflow bucket ``J + 1``.
    """
    scaled = np.asarray(lengths, dtype=float) * buckets / Log2(n)
    indices = np.floor(scaled + 1e-9).astype(np.int64) + 1
    return np.minimum(indices, maxBucket + 1)


def VerifyBucketConcentration(params, buckets, trials, seed=DEFAULT_SEED,
                              maxBucket=None):
    # type: (ChannelParams, int, int, int, Optional[int]) -> List[ExperimentReport]
    """Per-bucket concentration of the number of surviving fragments.

    The expected count of bucket ``k`` is ``n q_k e_k / l_n`` where ``q_k e_k``
    is the pmf mass of the bucket weighted by the survival probability, and a
    trial deviates when its count is more than ``n / (l_n log n)`` away.

    Parameters
    ----------
    params : ChannelParams
    buckets : int
        Granularity ``L``: buckets are ``log n / L`` bits wide.
    trials : int
    seed : int
    maxBucket : Optional[int]
        Last regular bucket ``J``; defaults to ``8 L``.

    Returns
    -------
    List[ExperimentReport]
        One report per bucket ``1 .. J + 1``.
    """
    if buckets < 1:
        raise ParameterError('Bucket granularity must be at least 1, got '
                             '{0!r}'.format(buckets))
    if trials < 1:
        raise ParameterError('Need at least one trial')
    n = params.n
    maxBucket = 8 * buckets if maxBucket is None else int(maxBucket)
    meanLen = params.model.Mean(n)
    scale = n / meanLen

    lengths, masses = Support(params.model, n)
    survival = masses * (1.0 - params.policy.Probs(lengths, n))
    # tearing skips zero-length draws
    survival = np.where(lengths > 0, survival, 0.0)
    lengthBuckets = BucketIndices(lengths, n, buckets, maxBucket)
    expected = np.bincount(lengthBuckets, weights=survival,
                           minlength=maxBucket + 2) * scale

    epsN = 1.0 / Log2(n)
    band = epsN * scale
    bound = BucketDeviationBound(n, meanLen, epsN)

    def Trial(t):
        trace = SampleTrace(params, TrialRng(seed, t))
        kept = BucketIndices(np.asarray(trace.lengths)[trace.kept], n,
                             buckets, maxBucket)
        return np.bincount(kept, minlength=maxBucket + 2)

    counts = np.array(_RunTrials(Trial, trials), dtype=float)
    reports = []
    for k in range(1, maxBucket + 2):
        column = counts[:, k]
        reports.append(ExperimentReport(
            label='bucket:{0}'.format(k), trials=trials, errors=None,
            errorRate=None, empiricalF=None, empiricalACount=None,
            statistic=Estimate.FromSamples(column),
            expected=float(expected[k]), band=band,
            deviationFreq=float((np.abs(column - expected[k]) > band).mean()),
            analyticBound=bound))
    return reports


def SweepBounds(pList, invAlphaGrid, model):
    # type: (Iterable[float], Iterable[float], FragmentLengthModel) -> List[SweepRow]
    """Inner and outer noisy bounds over a grid of ``1/alpha`` and ``p``,
    sorted by ``(p, 1/alpha)``.
    """
    pList = sorted(set(pList))
    invAlphaGrid = sorted(set(invAlphaGrid))
    if not pList or not invAlphaGrid:
        raise ParameterError('Sweep grid is empty')
    if not model.hasDensity:
        raise DensityUndefinedError('Bound sweeps need a model with a length '
                                    'density')
    rows = []
    for p in pList:
        for invAlpha in invAlphaGrid:
            if not invAlpha > 0:
                raise ParameterError('1/alpha must be positive, got '
                                     '{0!r}'.format(invAlpha))
            alpha = 1.0 / invAlpha
            bounds = ComputeNoisyBounds(model.WithAlpha(alpha), p, alpha)
            gap = bounds.rOut - bounds.rIn
            if gap < -GAP_SLACK:
                raise ConsistencyError('Inner bound exceeds outer bound',
                                       {'p': p, 'inv_alpha': invAlpha,
                                        'r_in': bounds.rIn,
                                        'r_out': bounds.rOut})
            rows.append(SweepRow(invAlpha, p, bounds.rIn, bounds.rOut, gap))
    return rows


def SweepToCsv(rows):
    # type: (Iterable[SweepRow]) -> str
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(SWEEP_HEADER)
    for row in rows:
        writer.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def SweepRowToJson(row):
    # type: (SweepRow) -> Dict[str, float]
    return dict(zip(SWEEP_HEADER, row))

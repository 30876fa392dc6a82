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
Command line front end.

Every command writes a single JSON (or CSV) document to standard output and
logs to standard error, so a rerun with the same flags reproduces the output
byte for byte.
"""
from __future__ import absolute_import

import argparse
import json
import logging
import sys
from collections import namedtuple

from . import capacity, experiments
from ._config import DEFAULT_SEED
from .channel import ChannelParams
from .codec import INDEXED, RANDOM
from .distributions import (CONSTANT, EXP_LENGTH, FIXED, GEOMETRIC,
                            MODEL_KINDS, POLICY_KINDS, UNIFORM, ZERO,
                            DeletionPolicy, FragmentLengthModel, ImpliedAlpha,
                            LoadChannelConfig, Log2)
from .errors import CodebookSizeError, NumericError, ParameterError
from .hooks import Decoders

if False:
    from typing import *

_logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARAMETER = 2
EXIT_NUMERIC = 3
EXIT_CODEBOOK = 4

JSON = 'json'
CSV = 'csv'

CONCENTRATION_CHECKS = ('coverage', 'alignment', 'bucket')
DEFAULT_THETA = 1.0
DEFAULT_DEVIATION = 0.1
DEFAULT_BUCKETS = 1


class RunConfig(namedtuple('RunConfig',
                           ['command', 'n', 'model', 'policy', 'alpha', 'p',
                            'rate', 'codec', 'eps', 'decoder', 'trials',
                            'seed', 'output', 'dump', 'extra'])):
    """Fully resolved flags of one invocation.

    ``alpha`` is the asymptotic alpha: given directly, derived from the mean
    fragment length as ``log2(n) / l_n``, or ``2 / gamma`` for Uniform models.
    ``extra`` holds command specific flags.
    """
    __slots__ = ()

    @property
    def channel(self):
        # type: () -> ChannelParams
        if self.n is None:
            raise ParameterError('{0} needs the block length --n'.format(
                self.command))
        return ChannelParams(self.n, self.model, self.policy, self.p)


# Argument types ---------------------------------------------------------------
def _FloatList(text):
    try:
        values = [float(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError('expected comma separated numbers, '
                                         'got {0!r}'.format(text))
    if not values:
        raise argparse.ArgumentTypeError('empty list')
    return values


def ParseRange(text):
    # type: (str) -> List[float]
    """``A:B[:STEP]`` to the inclusive grid ``A, A + STEP, ..., <= B``."""
    parts = text.split(':')
    try:
        if len(parts) not in (2, 3):
            raise ValueError(text)
        start, stop = float(parts[0]), float(parts[1])
        step = float(parts[2]) if len(parts) == 3 else 1.0
    except ValueError:
        raise argparse.ArgumentTypeError('expected A:B[:STEP], got '
                                         '{0!r}'.format(text))
    if not step > 0 or stop < start:
        raise argparse.ArgumentTypeError('empty range {0!r}'.format(text))
    count = int((stop - start) / step + 1e-9) + 1
    return [round(start + k * step, 12) for k in range(count)]


# Channel resolution -----------------------------------------------------------
def _ResolveModel(args, configModel, defaultKind, alphaOptional=False):
    kind = args.model or (configModel.kind if configModel else defaultKind)
    fromConfig = configModel if configModel and configModel.kind == kind \
        else None
    if alphaOptional and args.gamma is None and args.alpha is None and \
            args.meanLen is None:
        # the sweep sets alpha (and a uniform gamma) per grid point
        if kind == UNIFORM:
            return FragmentLengthModel.Uniform(2.0), None
        return FragmentLengthModel(kind), None
    if kind == UNIFORM:
        if args.meanLen is not None:
            raise ParameterError('The uniform model takes --gamma, not '
                                 '--mean-len')
        gamma = args.gamma
        if gamma is None and fromConfig is not None:
            gamma = fromConfig.gamma
        if gamma is None:
            raise ParameterError('The uniform model needs --gamma')
        model = FragmentLengthModel.Uniform(gamma)
        return model, ImpliedAlpha(model, args.alpha)

    if args.gamma is not None:
        raise ParameterError('--gamma only applies to the uniform model')
    if args.alpha is not None and args.meanLen is not None:
        raise ParameterError('Give exactly one of --alpha and --mean-len')
    if args.alpha is not None:
        if not args.alpha > 0:
            raise ParameterError('--alpha must be positive, got '
                                 '{0!r}'.format(args.alpha))
        return FragmentLengthModel(kind).WithAlpha(args.alpha, args.n), \
            args.alpha
    meanLen = args.meanLen
    if meanLen is None and fromConfig is not None:
        meanLen = fromConfig.meanLen
    if meanLen is None:
        raise ParameterError('Give exactly one of --alpha and --mean-len')
    if args.n is None:
        raise ParameterError('--mean-len needs --n to derive alpha')
    model = FragmentLengthModel(kind, meanLen=meanLen)
    return model, Log2(args.n) / model.Mean(args.n)


def _ResolvePolicy(args, configPolicy):
    kind = args.deletion or (configPolicy.kind if configPolicy else ZERO)
    fromConfig = configPolicy if configPolicy and configPolicy.kind == kind \
        else None
    if kind == CONSTANT:
        eps = args.delEps
        if eps is None and fromConfig is not None:
            eps = fromConfig.eps
        return DeletionPolicy.Constant(eps)
    if kind == EXP_LENGTH:
        gamma = args.delGamma
        if gamma is None and fromConfig is not None:
            gamma = fromConfig.gamma
        return DeletionPolicy.ExpLength(gamma)
    return DeletionPolicy.Zero()


def BuildRunConfig(args):
    # type: (argparse.Namespace) -> RunConfig
    configModel = configPolicy = None
    if args.config:
        configModel, configPolicy = LoadChannelConfig(args.config)
    codec = getattr(args, 'codec', None)
    defaultKind = FIXED if codec == INDEXED else GEOMETRIC
    p = getattr(args, 'p', 0.0)
    trials = getattr(args, 'trials', None)
    if args.command == 'bounds':
        # report the 1 - H(2p) failure before any other missing flag
        capacity.OuterAlignmentThreshold(p)
    if args.command == 'sweep' and any(
            getattr(args, key) is not None
            for key in ('alpha', 'meanLen', 'gamma', 'n')):
        raise ParameterError('sweep takes alpha from --inv-alpha; drop '
                             '--alpha, --mean-len, --gamma and --n')
    if args.n is not None:
        Log2(args.n)
    model, alpha = _ResolveModel(args, configModel, defaultKind,
                                 alphaOptional=args.command == 'sweep')
    policy = _ResolvePolicy(args, configPolicy)
    if trials is not None and trials < 1:
        raise ParameterError('--trials must be positive')
    extra = dict((key, getattr(args, key)) for key in
                 ('minFragOk', 'finiteN', 'invAlpha', 'lemma', 'theta',
                  'buckets') if hasattr(args, key))
    return RunConfig(
        command=args.command, n=args.n, model=model, policy=policy,
        alpha=alpha, p=p, rate=getattr(args, 'rate', None), codec=codec,
        eps=getattr(args, 'eps', None), decoder=getattr(args, 'decoder', None),
        trials=trials, seed=getattr(args, 'seed', None),
        output=args.output,
        dump=getattr(args, 'dump', None), extra=extra)


# Commands ---------------------------------------------------------------------
def _Dump(payload, output):
    if output == CSV:
        raise ParameterError('CSV output is only available for sweep')
    return json.dumps(payload, sort_keys=True, indent=2) + '\n'


def CmdCapacity(config):
    # type: (RunConfig) -> str
    report = capacity.CapacityNoiseless(config.model, config.policy,
                                        config.alpha)
    return _Dump(report.ToJson(), config.output)


def CmdBounds(config):
    # type: (RunConfig) -> str
    if config.policy.kind != ZERO:
        raise ParameterError('Noisy bounds assume no fragment deletions')
    bounds = capacity.ComputeNoisyBounds(config.model, config.p, config.alpha)
    payload = bounds.ToJson()
    if config.extra.get('minFragOk'):
        if config.model.kind != FIXED:
            raise ParameterError('--min-frag-ok applies to the fixed model')
        # raises when 1/alpha < 2/(1 - H(2p))
        payload['capacity'] = capacity.NoisyShufflingCapacity(config.p,
                                                              config.alpha)
    if config.extra.get('finiteN'):
        if config.n is None:
            raise ParameterError('--finite-n needs the block length --n')
        payload['finite_n'] = capacity.FiniteNBounds(config.model, config.n,
                                                     config.p).ToJson()
    return _Dump(payload, config.output)


def CmdSweep(config):
    # type: (RunConfig) -> str
    if config.policy.kind != ZERO:
        raise ParameterError('Noisy bounds assume no fragment deletions')
    rows = experiments.SweepBounds(config.p, config.extra['invAlpha'],
                                   config.model)
    if config.output == JSON:
        return json.dumps([experiments.SweepRowToJson(r) for r in rows],
                          sort_keys=True, indent=2) + '\n'
    return experiments.SweepToCsv(rows)


def CmdSimulate(config):
    # type: (RunConfig) -> str
    params = config.channel
    decoder = config.decoder
    if decoder is None:
        if config.codec == INDEXED:
            decoder = 'indexed'
        else:
            decoder = 'noisy' if config.p > 0 else 'noiseless'
    if config.codec == INDEXED:
        if config.rate is not None:
            raise ParameterError('The index codec fixes its own rate; drop '
                                 '--rate')
        spec = experiments.CodebookSpec(INDEXED, None, None,
                                        int(round(params.model.Mean(params.n))))
    else:
        if config.rate is None:
            raise ParameterError('Random codebooks need --rate')
        spec = experiments.CodebookSpec(RANDOM, config.rate, config.seed, None)
    report = experiments.RunErrorRate(params, spec, decoder, config.trials,
                                      seed=config.seed, eps=config.eps,
                                      dumpDir=config.dump)
    payload = report.ToJson()
    payload['config'] = {'n': params.n, 'alpha': config.alpha,
                         'p': params.p, 'codec': config.codec,
                         'rate': config.rate, 'decoder': decoder,
                         'seed': config.seed}
    return _Dump(payload, config.output)


def CmdConcentration(config):
    # type: (RunConfig) -> str
    params = config.channel
    check = config.extra['lemma']
    theta, buckets = config.extra['theta'], config.extra['buckets']
    if check == 'bucket':
        if theta is not None or config.eps is not None:
            raise ParameterError('The bucket check takes --buckets, not '
                                 '--theta or --eps')
        reports = experiments.VerifyBucketConcentration(
            params, DEFAULT_BUCKETS if buckets is None else buckets,
            config.trials, seed=config.seed)
        return _Dump([r.ToJson() for r in reports], config.output)
    if buckets is not None:
        raise ParameterError('--buckets only applies to the bucket check')
    verify = (experiments.VerifyCoverageConcentration if check == 'coverage'
              else experiments.VerifyAlignmentConcentration)
    report = verify(params, DEFAULT_THETA if theta is None else theta,
                    config.trials,
                    DEFAULT_DEVIATION if config.eps is None else config.eps,
                    seed=config.seed)
    return _Dump(report.ToJson(), config.output)


COMMANDS = {
    'capacity': CmdCapacity,
    'bounds': CmdBounds,
    'sweep': CmdSweep,
    'simulate': CmdSimulate,
    'concentration': CmdConcentration,
}


# Parser -----------------------------------------------------------------------
def _CommonParser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', metavar='PATH',
                        help='JSON file with "fragment" and "deletion" '
                             'objects; flags override it')
    common.add_argument('--model', choices=MODEL_KINDS,
                        help='fragment length distribution (default: '
                             'geometric, fixed for the index codec)')
    common.add_argument('--alpha', type=float,
                        help='log2(n) / mean fragment length')
    common.add_argument('--mean-len', '--frag-len', dest='meanLen',
                        type=float, metavar='L',
                        help='mean fragment length in bits (needs --n)')
    common.add_argument('--gamma', type=float,
                        help='uniform support width in multiples of log2(n)')
    common.add_argument('--deletion', choices=POLICY_KINDS,
                        help='fragment deletion policy (default: zero)')
    common.add_argument('--del-eps', dest='delEps', type=float, metavar='E',
                        help='deletion probability of the constant policy')
    common.add_argument('--del-gamma', dest='delGamma', type=float,
                        metavar='G',
                        help='decay rate of the length dependent policy')
    common.add_argument('--n', type=int, help='block length')
    common.add_argument('-v', '--verbose', action='count', default=0,
                        help='log progress to stderr (-vv for debug)')
    return common


def BuildParser():
    # type: () -> argparse.ArgumentParser
    common = _CommonParser()
    parser = argparse.ArgumentParser(
        prog='tornpaper',
        description='Capacity, bounds and simulations of the torn paper '
                    'channel.')
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    def AddCommand(name, helpText, output=JSON):
        cmd = sub.add_parser(name, parents=[common], help=helpText)
        cmd.add_argument('--output', choices=(JSON, CSV), default=output,
                         help='output format (default: %(default)s)')
        return cmd

    def AddMonteCarloFlags(cmd):
        cmd.add_argument('--seed', type=int, default=DEFAULT_SEED,
                         help='random seed (default: %(default)s)')
        cmd.add_argument('--trials', type=int, default=100,
                         help='Monte Carlo trials (default: %(default)s)')

    AddCommand('capacity', 'noiseless capacity F - A')

    cmd = AddCommand('bounds', 'inner and outer bounds with BSC noise')
    cmd.add_argument('--p', type=float, default=0.0,
                     help='BSC crossover probability')
    cmd.add_argument('--min-frag-ok', dest='minFragOk', action='store_true',
                     help='check 1/alpha >= 2/(1 - H(2p)) for fixed lengths '
                          'and report the exact capacity')
    cmd.add_argument('--finite-n', dest='finiteN', action='store_true',
                     help='also evaluate the bounds at block length --n')

    cmd = AddCommand('sweep', 'bounds over a (p, 1/alpha) grid', output=CSV)
    cmd.add_argument('--p', type=_FloatList, required=True, metavar='LIST',
                     help='comma separated crossover probabilities')
    cmd.add_argument('--inv-alpha', dest='invAlpha', type=ParseRange,
                     required=True, metavar='A:B[:STEP]',
                     help='inclusive grid of 1/alpha')

    cmd = AddCommand('simulate', 'decoding error rate of a code')
    cmd.add_argument('--p', type=float, default=0.0,
                     help='BSC crossover probability')
    AddMonteCarloFlags(cmd)
    cmd.add_argument('--codec', choices=(RANDOM, INDEXED), default=RANDOM)
    cmd.add_argument('--rate', type=float, help='random codebook rate')
    cmd.add_argument('--eps', type=float, default=0.1,
                     help='typicality band of the noisy decoder '
                          '(default: %(default)s)')
    cmd.add_argument('--decoder', choices=Decoders.Names(),
                     help='registered decoder (default: by codec and p)')
    cmd.add_argument('--dump', metavar='DIR',
                     help='write every channel output to DIR')

    cmd = AddCommand('concentration',
                     'empirical concentration of coverage, alignment or '
                     'bucket counts')
    AddMonteCarloFlags(cmd)
    cmd.add_argument('--lemma', choices=CONCENTRATION_CHECKS, required=True,
                     help='statistic to check')
    cmd.add_argument('--theta', type=float,
                     help='discard threshold in multiples of log2(n) for '
                          'coverage and alignment (default: 1)')
    cmd.add_argument('--eps', type=float,
                     help='relative deviation band for coverage and '
                          'alignment (default: 0.1)')
    cmd.add_argument('--buckets', type=int,
                     help='buckets per log2(n) bits for the bucket check '
                          '(default: 1)')
    return parser


def _ConfigureLogging(verbosity):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level,
                        format='%(levelname)s %(name)s: %(message)s')


def main(argv=None):
    # type: (Optional[List[str]]) -> int
    args = BuildParser().parse_args(argv)
    _ConfigureLogging(args.verbose)
    try:
        config = BuildRunConfig(args)
        text = COMMANDS[config.command](config)
    except CodebookSizeError as e:
        _logger.error('%s', e)
        return EXIT_CODEBOOK
    except ParameterError as e:
        _logger.error('%s', e)
        return EXIT_PARAMETER
    except NumericError as e:
        _logger.error('%s', e)
        return EXIT_NUMERIC
    sys.stdout.write(text)
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())

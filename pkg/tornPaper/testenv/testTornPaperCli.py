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

import io
import json
import os
import shutil
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout

from tornPaper import cli


class BaseClasses:

    class CliTest(unittest.TestCase):

        def Run(self, *argv):
            stdout = io.StringIO()
            with redirect_stdout(stdout):
                code = cli.main(list(argv))
            return code, stdout.getvalue()

        def RunJson(self, *argv):
            code, text = self.Run(*argv)
            self.assertEqual(code, cli.EXIT_OK, text)
            return json.loads(text)


class TestCapacityCommand(BaseClasses.CliTest):

    def testGeometric(self):
        data = self.RunJson('capacity', '--model', 'geometric', '--alpha', '1',
                            '--deletion', 'zero')
        self.assertAlmostEqual(data['value'], 0.367879, places=6)
        self.assertLessEqual(abs(data['difference']), 1e-6)

    def testFixed(self):
        data = self.RunJson('capacity', '--model', 'fixed', '--alpha', '0.3')
        self.assertAlmostEqual(data['value'], 0.7, places=12)

    def testUniform(self):
        data = self.RunJson('capacity', '--model', 'uniform', '--gamma', '2')
        self.assertAlmostEqual(data['value'], 0.25, places=9)

    def testMeanLength(self):
        data = self.RunJson('capacity', '--mean-len', '20', '--n', '1024')
        self.assertAlmostEqual(data['params']['alpha'], 0.5)

    def testConfigFile(self):
        tempDir = tempfile.mkdtemp()
        try:
            path = os.path.join(tempDir, 'channel.json')
            with open(path, 'w') as f:
                json.dump({'fragment': {'kind': 'fixed'},
                           'deletion': {'kind': 'constant', 'eps': 0.1}}, f)
            data = self.RunJson('capacity', '--config', path, '--alpha', '0.3')
            self.assertAlmostEqual(data['value'], 0.63, places=12)
            data = self.RunJson('capacity', '--config', path, '--alpha', '0.3',
                                '--deletion', 'zero')
            self.assertAlmostEqual(data['value'], 0.7, places=12)
        finally:
            shutil.rmtree(tempDir)

    def testParameterErrors(self):
        for argv in (['capacity', '--alpha', '1', '--mean-len', '10', '--n',
                      '1024'],
                     ['capacity'],
                     ['capacity', '--mean-len', '10'],
                     ['capacity', '--model', 'uniform'],
                     ['capacity', '--alpha', '1', '--gamma', '2'],
                     ['capacity', '--alpha', '1', '--deletion', 'constant'],
                     ['capacity', '--alpha', '1', '--output', 'csv']):
            code, text = self.Run(*argv)
            self.assertEqual(code, cli.EXIT_PARAMETER, argv)
            self.assertEqual(text, '')

    def testUsageErrors(self):
        for argv in (['capacity', '--alpha', '1', '--bogus'],
                     ['capacity', '--model', 'poisson'],
                     ['teleport']):
            with redirect_stderr(io.StringIO()):
                with self.assertRaises(SystemExit) as cm:
                    cli.main(argv)
            self.assertEqual(cm.exception.code, cli.EXIT_PARAMETER)


class TestBoundsCommand(BaseClasses.CliTest):

    def testMinFragmentBound(self):
        data = self.RunJson('bounds', '--model', 'fixed', '--alpha', '0.2',
                            '--p', '0.01', '--min-frag-ok')
        self.assertAlmostEqual(data['r_in'], 0.719207, places=6)
        self.assertAlmostEqual(data['r_out'], 0.719207, places=6)
        self.assertAlmostEqual(data['capacity'], 0.719207, places=6)

    def testMinFragmentConditionFails(self):
        code, _ = self.Run('bounds', '--model', 'fixed', '--alpha', '0.5',
                           '--p', '0.05', '--min-frag-ok')
        self.assertEqual(code, cli.EXIT_PARAMETER)

    def testUndefinedThreshold(self):
        with self.assertLogs('tornPaper.cli', level='ERROR') as logs:
            code, _ = self.Run('bounds', '--p', '0.3')
        self.assertEqual(code, cli.EXIT_PARAMETER)
        self.assertIn('1-H(2p)', logs.output[0])

    def testFiniteN(self):
        data = self.RunJson('bounds', '--alpha', '1', '--n', '1048576', '--p',
                            '0.01', '--finite-n')
        self.assertEqual(data['finite_n']['method'], 'finite_n')
        self.assertAlmostEqual(data['finite_n']['r_in'], data['r_in'],
                               delta=0.05)


class TestSweepCommand(BaseClasses.CliTest):

    def testCsv(self):
        code, text = self.Run('sweep', '--p', '0.01,0.02,0.05', '--inv-alpha',
                              '1:20')
        self.assertEqual(code, cli.EXIT_OK)
        lines = text.splitlines()
        self.assertEqual(lines[0], 'inv_alpha,p,r_in,r_out,gap')
        self.assertEqual(len(lines), 61)

    def testJson(self):
        data = self.RunJson('sweep', '--p', '0.01', '--inv-alpha', '2:4:0.5',
                            '--output', 'json')
        self.assertEqual([row['inv_alpha'] for row in data],
                         [2.0, 2.5, 3.0, 3.5, 4.0])

    def testParseRange(self):
        self.assertEqual(cli.ParseRange('1:3'), [1.0, 2.0, 3.0])
        self.assertEqual(cli.ParseRange('0.5:1.5:0.25'),
                         [0.5, 0.75, 1.0, 1.25, 1.5])

    def testFixedModel(self):
        code, _ = self.Run('sweep', '--model', 'fixed', '--p', '0.01',
                           '--inv-alpha', '1:3')
        self.assertEqual(code, cli.EXIT_PARAMETER)


class TestSimulateCommand(BaseClasses.CliTest):

    def testIndexedCode(self):
        argv = ['simulate', '--codec', 'indexed', '--n', '1024', '--frag-len',
                '64', '--trials', '100', '--seed', '7']
        code, first = self.Run(*argv)
        self.assertEqual(code, cli.EXIT_OK)
        self.assertEqual(json.loads(first)['error_rate'], 0.0)
        code, second = self.Run(*argv)
        self.assertEqual(first, second)

    def testRandomCode(self):
        data = self.RunJson('simulate', '--n', '16', '--model', 'fixed',
                            '--frag-len', '8', '--rate', '0.25', '--trials',
                            '50')
        self.assertEqual(data['config']['decoder'], 'noiseless')
        self.assertLessEqual(data['errors'], 50)

    def testCodebookTooLarge(self):
        code, _ = self.Run('simulate', '--n', '32', '--alpha', '1', '--rate',
                           '1.0', '--trials', '1')
        self.assertEqual(code, cli.EXIT_CODEBOOK)

    def testMissingArguments(self):
        code, _ = self.Run('simulate', '--alpha', '1', '--rate', '0.25')
        self.assertEqual(code, cli.EXIT_PARAMETER)
        code, _ = self.Run('simulate', '--n', '16', '--alpha', '1')
        self.assertEqual(code, cli.EXIT_PARAMETER)

    def testDump(self):
        tempDir = tempfile.mkdtemp()
        try:
            self.RunJson('simulate', '--n', '64', '--alpha', '1', '--rate',
                         '0.125', '--trials', '3', '--dump', tempDir)
            self.assertEqual(len(os.listdir(tempDir)), 3)
        finally:
            shutil.rmtree(tempDir)


class TestConcentrationCommand(BaseClasses.CliTest):

    def testCoverage(self):
        data = self.RunJson('concentration', '--lemma', 'coverage', '--n',
                            '65536', '--alpha', '1', '--eps', '0.1',
                            '--trials', '500')
        self.assertLessEqual(data['deviation_freq'], 0.01)

    def testBuckets(self):
        data = self.RunJson('concentration', '--lemma', 'bucket', '--n',
                            '4096', '--alpha', '1', '--buckets', '1',
                            '--trials', '20')
        self.assertEqual(len(data), 9)
        self.assertEqual(data[0]['label'], 'bucket:1')

    def testTooFewTrials(self):
        code, _ = self.Run('concentration', '--lemma', 'alignment', '--n',
                           '1024', '--alpha', '1', '--trials', '10')
        self.assertEqual(code, cli.EXIT_PARAMETER)

    def testNumericError(self):
        code, _ = self.Run('concentration', '--lemma', 'coverage', '--n',
                           '1024', '--mean-len', '1e12')
        self.assertEqual(code, cli.EXIT_NUMERIC)


class TestFlagScope(BaseClasses.CliTest):

    def Help(self, command):
        stdout = io.StringIO()
        with redirect_stdout(stdout):
            with self.assertRaises(SystemExit) as cm:
                cli.main([command, '--help'])
        self.assertEqual(cm.exception.code, 0)
        return stdout.getvalue()

    def testHelpListsUsedFlags(self):
        self.assertNotIn('--p ', self.Help('capacity'))
        self.assertNotIn('--trials', self.Help('capacity'))
        self.assertNotIn('--seed', self.Help('bounds'))
        self.assertNotIn('--trials', self.Help('sweep'))
        self.assertNotIn('--p ', self.Help('concentration'))
        simulate = self.Help('simulate')
        for flag in ('--p ', '--seed', '--trials', '--rate'):
            self.assertIn(flag, simulate)

    def testUnusedFlagsAreRejected(self):
        for argv in (['capacity', '--alpha', '1', '--p', '0.2'],
                     ['capacity', '--alpha', '1', '--trials', '5'],
                     ['bounds', '--alpha', '1', '--seed', '3'],
                     ['sweep', '--p', '0.01', '--inv-alpha', '1:2',
                      '--trials', '5'],
                     ['concentration', '--lemma', 'coverage', '--n',
                      '1024', '--alpha', '1', '--p', '0.1']):
            with redirect_stderr(io.StringIO()):
                with self.assertRaises(SystemExit) as cm:
                    cli.main(argv)
            self.assertEqual(cm.exception.code, cli.EXIT_PARAMETER, argv)

    def testIgnoredCombinationsAreParameterErrors(self):
        for argv in (['sweep', '--p', '0.01', '--inv-alpha', '1:2',
                      '--alpha', '0.5'],
                     ['sweep', '--p', '0.01', '--inv-alpha', '1:2',
                      '--deletion', 'constant', '--del-eps', '0.1'],
                     ['concentration', '--lemma', 'bucket', '--n', '1024',
                      '--alpha', '1', '--theta', '2'],
                     ['concentration', '--lemma', 'coverage', '--n',
                      '1024', '--alpha', '1', '--buckets', '2'],
                     ['simulate', '--codec', 'indexed', '--n', '1024',
                      '--frag-len', '64', '--rate', '0.5']):
            code, text = self.Run(*argv)
            self.assertEqual(code, cli.EXIT_PARAMETER, argv)
            self.assertEqual(text, '')


if __name__ == '__main__':
    unittest.main(verbosity=2)

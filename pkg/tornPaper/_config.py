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
Environment driven settings.

``TPL_THREADS`` caps the number of worker threads used by the experiment
harness. It is read on every call so tests can patch the environment.
"""
from __future__ import absolute_import

import os

from .errors import ParameterError

# Seed used whenever a caller does not provide one.
DEFAULT_SEED = 20210712

THREADS_ENV_VAR = 'TPL_THREADS'


def GetThreadCount():
    # type: () -> int
    """Return the worker pool size.

    Returns
    -------
    int
    """
    value = os.environ.get(THREADS_ENV_VAR)
    if not value:
        return max(1, os.cpu_count() or 1)
    try:
        count = int(value)
    except ValueError:
        raise ParameterError('{0} must be an integer, got {1!r}'.format(
            THREADS_ENV_VAR, value))
    return max(1, count)

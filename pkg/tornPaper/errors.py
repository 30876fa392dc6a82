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
Exception types shared by the tornPaper modules.
"""

if False:
    from typing import *


class TornPaperError(Exception):
    pass


class ParameterError(TornPaperError, ValueError):
    """Raised for invalid model, policy, probability or command parameters."""
    pass


class DensityUndefinedError(ParameterError):
    """Raised when the asymptotic length density is requested for a model that
    has none (the Fixed model)."""
    pass


class ThresholdUndefinedError(ParameterError):
    """Raised when a discard threshold of the form c / (1 - H(q)) diverges."""
    pass


class NumericError(TornPaperError, ArithmeticError):
    """Raised when a numerical procedure fails to reach its tolerance."""

    def __init__(self, message, diagnostics=None):
        # type: (str, Optional[Dict[str, Any]]) -> None
        """
        Parameters
        ----------
        message : str
        diagnostics : Optional[Dict[str, Any]]
            Free-form details about the failed computation (interval,
            tolerance, depth reached, ...).
        """
        super(NumericError, self).__init__(message)
        self.diagnostics = dict(diagnostics or {})

    def __str__(self):
        message = super(NumericError, self).__str__()
        if not self.diagnostics:
            return message
        details = ', '.join('{0}={1!r}'.format(k, v)
                            for k, v in sorted(self.diagnostics.items()))
        return '{0} ({1})'.format(message, details)


class ConsistencyError(NumericError):
    """Raised when a closed form and its numerical evaluation disagree."""
    pass


class CodebookSizeError(TornPaperError):
    """Raised when a codebook would be too large to enumerate."""
    pass


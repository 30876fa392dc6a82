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

from .errors import ParameterError

if False:
    from typing import *
    from .codec import DecodeResult


class FallbackException(Exception):
    """Raised if a registered decoder declines an input and wants to fall back
    to the implementation registered before it."""
    pass


class Decoders(object):
    """Simple aggregator of named decoders.

    Several functions may be registered under one name; the most recently
    registered is tried first and may raise `FallbackException` to hand the
    call to the next one. This allows specialised fast paths to be layered on
    top of a general decoder.
    """
    _registered = {}

    @classmethod
    def Register(cls, name, func):
        # type: (str, Callable[..., DecodeResult]) -> None
        """
        Parameters
        ----------
        name : str
            Decoder name as accepted by `Call` and the --decoder flag.
        func : Callable[..., DecodeResult]
            Called as ``func(codebook, output, p=..., eps=...)``.
        """
        cls._registered.setdefault(name, []).insert(0, func)

    @classmethod
    def Names(cls):
        # type: () -> List[str]
        return sorted(cls._registered)

    @classmethod
    def Call(cls, name, *args, **kwargs):
        # type: (str, *Any, **Any) -> DecodeResult
        """Run the decoders registered under ``name`` until one accepts.

        Raises
        ------
        ParameterError
            If ``name`` is unknown or every registration falls back.
        """
        try:
            funcs = cls._registered[name]
        except KeyError:
            raise ParameterError('Unknown decoder {0!r}; expected one of '
                                 '{1}'.format(name, ', '.join(cls.Names())))
        for func in funcs:
            try:
                return func(*args, **kwargs)
            except FallbackException:
                continue
        raise ParameterError('No registered {0!r} decoder accepted the '
                             'input'.format(name))

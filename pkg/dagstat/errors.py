#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright (c) 2025, Lewis Guo. All rights reserved.
# Author: Lewis Guo <guolisen@gmail.com>
# Created: May 02, 2025
#
# Description: Exception types raised by the dagstat library.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

from typing import Optional


class DagstatError(Exception):
    """Base class for all dagstat errors."""


class TreeSyntaxError(DagstatError, ValueError):
    """Malformed tree term text."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


class CapExceededError(DagstatError, ValueError):
    """A configured size cap was exceeded."""

    def __init__(self, what: str, requested: int, cap: int):
        super().__init__(f"{what} size {requested} exceeds configured cap {cap}")
        self.what = what
        self.requested = requested
        self.cap = cap


class SourceError(DagstatError, ValueError):
    """Invalid split source, source spec or sigma table."""


class DecodeError(DagstatError, ValueError):
    """Malformed binary DAG encoding."""


class BoundsError(DagstatError, ValueError):
    """Invalid bound parameters or no class-membership fit."""


class RecurrenceMismatchError(DagstatError, ArithmeticError):
    """Two applicable recurrence branches disagree at a level."""

    def __init__(self, level: int, b: int, left: float, right: float,
                 detail: Optional[str] = None):
        message = (f"Recurrence branches disagree at level {level} (b={b}): "
                   f"{left!r} != {right!r}")
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)
        self.level = level
        self.b = b

#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright (c) 2025, Lewis Guo. All rights reserved.
# Author: Lewis Guo <guolisen@gmail.com>
# Created: May 10, 2025
#
# Description: Shared pieces of the dagstat command modules.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import logging
from contextlib import contextmanager
from typing import Any, Callable, Iterator, List, Optional

import click

from dagstat.config import Config
from dagstat.errors import DagstatError
from dagstat.trees.sources import SplitSource, parse_source
from dagstat.utils.helpers import parse_int_list

logger = logging.getLogger(__name__)


class IntListType(click.ParamType):
    """Comma-separated integers, powers allowed ('2^10,2^12')."""

    name = "int-list"

    def convert(self, value: Any, param: Optional[click.Parameter], ctx: Optional[click.Context]) -> List[int]:
        if isinstance(value, list):
            return value
        try:
            return parse_int_list(str(value))
        except ValueError as e:
            self.fail(str(e), param, ctx)


INT_LIST = IntListType()


def source_option(required: bool = True) -> Callable[[Callable[..., Any]], Callable[..., Any]]:
    return click.option(
        "--source", "-s", "source_spec", required=required,
        help="Source spec: bst, binomial:p=0.3, catalan, det:quarter, det:half, det:comb, table:path.csv",
    )


def get_config(ctx: click.Context) -> Config:
    config = ctx.find_object(Config)
    if config is None:
        config = Config()
    return config


def resolve_source(ctx: click.Context, spec: str) -> SplitSource:
    """Build the source named by ``spec`` using configured table sizes."""
    return parse_source(spec, catalan_levels=get_config(ctx).sampler.catalan_levels)


@contextmanager
def command_errors(action: str) -> Iterator[None]:
    """Turn library failures into a logged error and exit status 1."""
    try:
        yield
    except (DagstatError, ValueError, OSError, ArithmeticError) as e:
        logger.error(f"Error {action}: {e}")
        raise click.ClickException(str(e)) from e

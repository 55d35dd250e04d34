#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright (c) 2025, Lewis Guo. All rights reserved.
# Author: Lewis Guo <guolisen@gmail.com>
# Created: May 10, 2025
#
# Description: Commands that inspect split sources.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import logging

import click

from dagstat.commands.common import command_errors, get_config, resolve_source, source_option
from dagstat.errors import SourceError
from dagstat.trees.sources import validate
from dagstat.utils.helpers import metadata_line, write_csv

logger = logging.getLogger(__name__)

DEFAULT_VALIDATE_LEVELS = 256


def register_source_commands(cli: click.Group) -> None:
    """Register source commands with the CLI group.

    Args:
        cli: Root command group.
    """

    @cli.command("validate")
    @source_option()
    @click.option("--n-max", type=click.IntRange(min=2), default=DEFAULT_VALIDATE_LEVELS,
                  show_default=True, help="Highest level to check (clipped to the source's own limit)")
    @click.option("--out", "out_path", type=click.Path(dir_okay=False), default="-",
                  help="Output file (default: stdout)")
    @click.pass_context
    def validate_command(ctx: click.Context, source_spec: str, n_max: int, out_path: str) -> None:
        """Check that every level of a source is a probability distribution."""
        config = get_config(ctx)
        with command_errors("validating source"):
            src = resolve_source(ctx, source_spec)
            if src.n_max is not None and n_max > src.n_max:
                logger.info(f"Clipping n_max from {n_max} to {src.n_max} for {src.spec}")
                n_max = src.n_max
            report = validate(src, n_max, config.dp.tolerance)
            with click.open_file(out_path, "w") as stream:
                write_csv(
                    stream,
                    ["n", "total", "deviation", "ok"],
                    ([e.n, e.total, e.deviation, e.ok] for e in report.entries),
                    [metadata_line(None, src.spec), f"max_deviation={report.max_deviation:.3e}"],
                )
            if not report.passed:
                failed = [e for e in report.entries if not e.ok]
                first = failed[0]
                detail = first.error or f"total={first.total}"
                raise SourceError(f"Source {src.spec} failed at {len(failed)} levels, first n={first.n}: {detail}")

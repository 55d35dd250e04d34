#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright (c) 2025, Lewis Guo. All rights reserved.
# Author: Lewis Guo <guolisen@gmail.com>
# Created: May 11, 2025
#
# Description: Command group wiring for dagstat.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import logging
import sys
from typing import Optional

import click

from dagstat import __version__
from dagstat.commands.analysis_commands import register_analysis_commands
from dagstat.commands.simulation_commands import register_simulation_commands
from dagstat.commands.source_commands import register_source_commands
from dagstat.commands.tree_commands import register_tree_commands
from dagstat.config import load_config

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(level: str, debug: bool = False) -> None:
    """Install a single stderr handler on the root logger; stdout carries CSV."""
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_dagstat", False):
            root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._dagstat = True  # type: ignore[attr-defined]
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if debug else getattr(logging, level))


def create_cli() -> click.Group:
    """Create the dagstat command group with every command registered.

    Returns:
        Click group.
    """

    @click.group()
    @click.version_option(__version__, prog_name="dagstat")
    @click.option("--config", "-c", "config_path", type=click.Path(dir_okay=False),
                  help="Path to config file")
    @click.option("--debug", "-d", is_flag=True, help="Enable debug logging")
    @click.pass_context
    def cli(ctx: click.Context, config_path: Optional[str], debug: bool) -> None:
        """Minimal DAG statistics of random binary trees."""
        try:
            config = load_config(config_path)
        except Exception as e:
            logger.error(f"Error loading configuration: {e}")
            raise click.ClickException(f"Error loading configuration: {e}") from e
        configure_logging(config.logging.level, debug)
        if debug:
            logger.debug("Debug logging enabled")
        logger.debug(f"Loaded configuration: {config}")
        ctx.obj = config

    register_tree_commands(cli)
    register_source_commands(cli)
    register_analysis_commands(cli)
    register_simulation_commands(cli)
    return cli

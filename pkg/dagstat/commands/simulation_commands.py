#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright (c) 2025, Lewis Guo. All rights reserved.
# Author: Lewis Guo <guolisen@gmail.com>
# Created: May 11, 2025
#
# Description: Seeded Monte Carlo commands.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import logging
from typing import List, Optional

import click

from dagstat.commands.common import (
    INT_LIST,
    command_errors,
    get_config,
    resolve_source,
    source_option,
)
from dagstat.trees.bounds import FLAJOLET_CONSTANT, NORMALIZERS, trend_report
from dagstat.trees.sampler import estimate_dag_size
from dagstat.trees.sources import CatalanSource
from dagstat.utils.helpers import metadata_line, write_csv

logger = logging.getLogger(__name__)


def register_simulation_commands(cli: click.Group) -> None:
    """Register Monte Carlo commands with the CLI group.

    Args:
        cli: Root command group.
    """

    @cli.command("estimate")
    @source_option()
    @click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Number of leaves")
    @click.option("--reps", type=click.IntRange(min=2), required=True, help="Number of replicates")
    @click.option("--seed", type=int, required=True, help="Master seed")
    @click.option("--workers", type=click.IntRange(min=1), help="Worker processes (default from config)")
    @click.option("--out", "out_path", type=click.Path(dir_okay=False), default="-",
                  help="Output file (default: stdout)")
    @click.pass_context
    def estimate_command(ctx: click.Context, source_spec: str, n: int, reps: int, seed: int,
                         workers: Optional[int], out_path: str) -> None:
        """Estimate the average minimal DAG size with a confidence interval."""
        config = get_config(ctx)
        with command_errors("estimating DAG size"):
            src = resolve_source(ctx, source_spec)
            report = estimate_dag_size(src, n, reps, seed, workers or config.sampler.workers,
                                       config.sampler.z)
            with click.open_file(out_path, "w") as stream:
                write_csv(
                    stream,
                    ["n", "reps", "mean", "stderr", "ci_low", "ci_high"],
                    [[report.n, report.reps, report.mean, report.stderr, report.ci95[0], report.ci95[1]]],
                    [metadata_line(seed, src.spec)],
                )

    @cli.command("trend")
    @source_option()
    @click.option("--n-list", type=INT_LIST, required=True, help="Ascending levels, e.g. '2^10,2^12'")
    @click.option("--reps", type=click.IntRange(min=2), required=True, help="Replicates per level")
    @click.option("--seed", type=int, required=True, help="Master seed")
    @click.option("--normalizer", type=click.Choice(sorted(NORMALIZERS)), default="log2",
                  show_default=True, help="g in estimate * g(n) / n")
    @click.option("--workers", type=click.IntRange(min=1), help="Worker processes (default from config)")
    @click.option("--out", "out_path", type=click.Path(dir_okay=False), default="-",
                  help="Output file (default: stdout)")
    @click.pass_context
    def trend_command(ctx: click.Context, source_spec: str, n_list: List[int], reps: int, seed: int,
                      normalizer: str, workers: Optional[int], out_path: str) -> None:
        """Normalized DAG size estimates with bounds along a list of levels."""
        config = get_config(ctx)
        with command_errors("computing trend"):
            src = resolve_source(ctx, source_spec)
            rows = trend_report(src, n_list, reps, seed, normalizer,
                                workers or config.sampler.workers, z=config.sampler.z)
            metadata = [metadata_line(seed, src.spec), f"normalizer={normalizer}"]
            if isinstance(src, CatalanSource):
                metadata.append(f"reference_constant={FLAJOLET_CONSTANT:.10f}")
            with click.open_file(out_path, "w") as stream:
                write_csv(
                    stream,
                    ["n", "estimate", "stderr", "normalized", "bound_upper", "bound_lower"],
                    ([r.n, r.estimate, r.stderr, r.normalized, r.bound_upper, r.bound_lower] for r in rows),
                    metadata,
                )

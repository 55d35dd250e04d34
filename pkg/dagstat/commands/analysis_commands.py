#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright (c) 2025, Lewis Guo. All rights reserved.
# Author: Lewis Guo <guolisen@gmail.com>
# Created: May 10, 2025
#
# Description: Exact analysis commands: cut-point expectations, source
# entropy, closed-form bounds and deterministic DAG sizes.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import logging
import math
from typing import List, Optional

import click

from dagstat.commands.common import (
    INT_LIST,
    command_errors,
    get_config,
    resolve_source,
    source_option,
)
from dagstat.errors import BoundsError, SourceError
from dagstat.trees.bounds import TheoremKind, profile_for, theorem_bounds, upper_cut_point
from dagstat.trees.detsource import det_table, fit_constant, leaf_size_set
from dagstat.trees.entropy import brute_entropy, entropy_profile
from dagstat.trees.expectation import expected_cut_counts, small_subtree_bound
from dagstat.trees.sources import DeterministicSource
from dagstat.utils.helpers import metadata_line, write_csv

logger = logging.getLogger(__name__)


def register_analysis_commands(cli: click.Group) -> None:
    """Register analysis commands with the CLI group.

    Args:
        cli: Root command group.
    """

    @cli.command("expect")
    @source_option()
    @click.option("--b", "b", type=click.IntRange(min=1), required=True, help="Cut-point")
    @click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Highest level")
    @click.option("--dp-cap", type=click.IntRange(min=1), help="Override the DP level cap")
    @click.option("--out", "out_path", type=click.Path(dir_okay=False), default="-",
                  help="Output file (default: stdout)")
    @click.pass_context
    def expect_command(ctx: click.Context, source_spec: str, b: int, n: int,
                       dp_cap: Optional[int], out_path: str) -> None:
        """Tabulate the expected number of nodes with more than b leaves."""
        config = get_config(ctx)
        with command_errors("computing expectations"):
            src = resolve_source(ctx, source_spec)
            table = expected_cut_counts(src, b, n, dp_cap or config.dp.cap, config.dp.tolerance)
            with click.open_file(out_path, "w") as stream:
                table.to_csv(stream, [metadata_line(None, src.spec), f"b={b}"])

    @cli.command("entropy")
    @source_option()
    @click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Number of leaves")
    @click.option("--entropy-cap", type=click.IntRange(min=2), help="Override the entropy level cap")
    @click.option("--brute/--no-brute", default=False,
                  help="Also sum over all trees (needs n within the enumeration cap)")
    @click.option("--enum-cap", type=click.IntRange(min=1), help="Override the enumeration cap")
    @click.option("--out", "out_path", type=click.Path(dir_okay=False), default="-",
                  help="Output file (default: stdout)")
    @click.pass_context
    def entropy_command(ctx: click.Context, source_spec: str, n: int, entropy_cap: Optional[int],
                        brute: bool, enum_cap: Optional[int], out_path: str) -> None:
        """Entropy of the tree source in bits with its per-level decomposition."""
        config = get_config(ctx)
        with command_errors("computing entropy"):
            src = resolve_source(ctx, source_spec)
            profile = entropy_profile(src, n, entropy_cap or config.dp.entropy_cap, config.dp.tolerance)
            metadata = [metadata_line(None, src.spec), f"H={profile.H:.10f}"]
            if brute:
                brute_value = brute_entropy(src, n, enum_cap or config.enumeration.cap)
                metadata.append(f"H_enumerated={brute_value:.10f}")
            with click.open_file(out_path, "w") as stream:
                write_csv(
                    stream,
                    ["j", "h_j", "E_prev", "E_j", "contribution"],
                    ([r.j, r.h_j, r.e_prev, r.e_j, r.contribution] for r in profile.rows),
                    metadata,
                )

    @cli.command("bounds")
    @source_option()
    @click.option("--n-list", type=INT_LIST, required=True, help="Levels, e.g. '16,256,2^12'")
    @click.option("--dp-cap", type=click.IntRange(min=1), help="Override the DP level cap")
    @click.option("--out", "out_path", type=click.Path(dir_okay=False), default="-",
                  help="Output file (default: stdout)")
    @click.pass_context
    def bounds_command(ctx: click.Context, source_spec: str, n_list: List[int],
                       dp_cap: Optional[int], out_path: str) -> None:
        """Evaluate the closed-form DAG size bounds along a list of levels.

        Bounds that do not apply to the source are left empty. The cut-point
        column is E(n) + 4^b/3 with b = ceil(log4(n)/2), computed while n is
        within the DP cap.
        """
        config = get_config(ctx)
        cap = dp_cap or config.dp.cap
        with command_errors("evaluating bounds"):
            src = resolve_source(ctx, source_spec)
            profile = profile_for(src)
            rows = []
            for n in n_list:
                b = upper_cut_point(n)
                cut_bound: Optional[float] = None
                if n <= cap:
                    cut_bound = expected_cut_counts(src, b, n, cap, config.dp.tolerance)[n] + small_subtree_bound(b)
                row: List[Optional[float]] = [n, b, cut_bound]
                for kind in TheoremKind:
                    try:
                        row.append(theorem_bounds(kind, profile, n))
                    except BoundsError as e:
                        logger.debug(f"Bound {kind.value} skipped at n={n}: {e}")
                        row.append(None)
                rows.append(row)
            metadata = [
                metadata_line(None, src.spec),
                f"rho={profile.rho} N_rho={profile.n_rho} c={profile.c} "
                f"psi={profile.psi.label if profile.psi else None} "
                f"phi={profile.phi.label if profile.phi else None} onset={profile.onset}",
            ]
            with click.open_file(out_path, "w") as stream:
                write_csv(stream, ["n", "b", "cutpoint"] + [kind.value for kind in TheoremKind],
                          rows, metadata)

    @cli.command("det")
    @source_option()
    @click.option("--n-list", type=INT_LIST, required=True, help="Levels, e.g. '100,1000,10^5'")
    @click.option("--unpatched", is_flag=True,
                  help="Use the raw floor/ceil leaf-size iteration for the quarter rule")
    @click.option("--out", "out_path", type=click.Path(dir_okay=False), default="-",
                  help="Output file (default: stdout)")
    @click.pass_context
    def det_command(ctx: click.Context, source_spec: str, n_list: List[int],
                    unpatched: bool, out_path: str) -> None:
        """Minimal DAG sizes of a deterministic source along a list of levels."""
        with command_errors("computing deterministic DAG sizes"):
            src = resolve_source(ctx, source_spec)
            if not isinstance(src, DeterministicSource):
                raise SourceError(f"det needs a deterministic source (det:<rule>), got {src.spec}")
            rows = det_table(src, n_list)
            quarter = src.rule == "quarter"
            sizes = {row.n: float(row.dag_size) for row in rows}
            metadata = [metadata_line(None, src.spec)]
            if any(n > 1 for n in sizes):
                larger = {n: value for n, value in sizes.items() if n > 1}
                metadata.append(
                    f"K_sqrt={fit_constant(larger, math.sqrt):.6f} "
                    f"K_log2sq={fit_constant(larger, lambda n: math.log2(n) ** 2):.6f}"
                )
            header = ["n", "dag_size", "sqrt_n_ratio", "log2n_sq_ratio"]
            table_rows: List[List[object]] = [
                [r.n, r.dag_size, r.sqrt_n_ratio, r.log2n_sq_ratio] for r in rows
            ]
            if quarter:
                header.append("leaf_size_set")
                for table_row in table_rows:
                    table_row.append(len(leaf_size_set(int(table_row[0]), patched=not unpatched)))
            elif unpatched:
                raise SourceError("--unpatched only applies to det:quarter")
            with click.open_file(out_path, "w") as stream:
                write_csv(stream, header, table_rows, metadata)

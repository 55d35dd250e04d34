#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright (c) 2025, Lewis Guo. All rights reserved.
# Author: Lewis Guo <guolisen@gmail.com>
# Created: May 10, 2025
#
# Description: Commands that sample, encode and decode trees.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import logging
from typing import Optional

import click

from dagstat.commands.common import command_errors, resolve_source, source_option
from dagstat.errors import DagstatError
from dagstat.trees.dag import decode, encode, minimize, payload_bits, unfold
from dagstat.trees.sampler import RandomStream, replicate_seed, sample_tree
from dagstat.trees.tree import read_corpus, render_tree
from dagstat.utils.helpers import metadata_line

logger = logging.getLogger(__name__)


def register_tree_commands(cli: click.Group) -> None:
    """Register tree commands with the CLI group.

    Args:
        cli: Root command group.
    """

    @cli.command("sample")
    @source_option()
    @click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Number of leaves")
    @click.option("--count", type=click.IntRange(min=1), default=1, show_default=True,
                  help="Number of trees to draw")
    @click.option("--seed", type=int, required=True, help="Master seed")
    @click.option("--out", "out_path", type=click.Path(dir_okay=False), default="-",
                  help="Output file (default: stdout)")
    @click.pass_context
    def sample_command(ctx: click.Context, source_spec: str, n: int, count: int,
                       seed: int, out_path: str) -> None:
        """Draw trees from a source as a newline-delimited term corpus."""
        logger.info(f"Sampling {count} trees from {source_spec}, n={n}, seed={seed}")
        with command_errors("sampling trees"):
            src = resolve_source(ctx, source_spec)
            terms = [render_tree(sample_tree(src, n, RandomStream(replicate_seed(seed, index))))
                     for index in range(count)]
            with click.open_file(out_path, "w") as stream:
                stream.write(metadata_line(seed, src.spec) + "\n")
                for term in terms:
                    stream.write(term + "\n")

    @cli.command("encode")
    @click.option("--in", "in_path", type=click.Path(dir_okay=False), default="-",
                  help="Term file (default: stdin)")
    @click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True,
                  help="Output .lcdg file ('-' for stdout)")
    def encode_command(in_path: str, out_path: str) -> None:
        """Encode the minimal DAG of a tree term in the binary .lcdg format."""
        with command_errors("encoding tree"):
            with click.open_file(in_path, "r") as stream:
                trees = read_corpus(stream.read())
            if len(trees) != 1:
                raise DagstatError(f"Expected exactly one tree term in {in_path}, found {len(trees)}")
            dag = minimize(trees[0])
            data = encode(dag)
            logger.info(f"Encoded tree with n={dag.n}, m={dag.m} into {payload_bits(dag)} payload bits")
            with click.open_file(out_path, "wb") as out:
                out.write(data)

    @cli.command("decode")
    @click.option("--in", "in_path", type=click.Path(dir_okay=False), required=True,
                  help="Input .lcdg file ('-' for stdin)")
    @click.option("--out", "out_path", type=click.Path(dir_okay=False), default="-",
                  help="Term file (default: stdout)")
    def decode_command(in_path: str, out_path: Optional[str]) -> None:
        """Decode a .lcdg file back to its tree term."""
        with command_errors("decoding tree"):
            with click.open_file(in_path, "rb") as stream:
                data = stream.read()
            dag = decode(data)
            logger.info(f"Decoded DAG with n={dag.n}, m={dag.m}")
            with click.open_file(out_path, "w") as out:
                out.write(render_tree(unfold(dag)) + "\n")

#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright (c) 2025, Lewis Guo. All rights reserved.
# Author: Lewis Guo <guolisen@gmail.com>
# Created: May 03, 2025
#
# Description: Minimal DAG construction by hash-consing and its fixed-width
# binary encoding.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import logging
import struct
from dataclasses import dataclass
from typing import Dict, List, Tuple

from dagstat.errors import DecodeError
from dagstat.trees.tree import LEAF, Tree

logger = logging.getLogger(__name__)

MAGIC = b"LCDG"
VERSION = 1
HEADER = struct.Struct(">4sBQQ")


@dataclass(frozen=True)
class Dag:
    """Minimal DAG with canonical numbering.

    Internal nodes are numbered 1..m-1 in first-completion postorder of a
    left-to-right traversal, so the root is m-1; the unique leaf is m.
    ``children[k - 1]`` holds the (left, right) ids of internal node ``k``.
    """

    n: int
    m: int
    children: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise ValueError(f"Invalid DAG dimensions n={self.n}, m={self.m}")
        if len(self.children) != self.m - 1:
            raise ValueError(
                f"DAG with m={self.m} needs {self.m - 1} internal entries, "
                f"got {len(self.children)}"
            )

    @property
    def leaf_id(self) -> int:
        return self.m

    @property
    def root_id(self) -> int:
        return self.m - 1 if self.m >= 2 else self.m


def minimize(t: Tree) -> Dag:
    """Build the minimal DAG of ``t`` by hash-consing child-id pairs.

    Args:
        t: Tree to compress.

    Returns:
        Canonically numbered DAG whose node count is the number of distinct
        subtrees of ``t``.
    """
    table: Dict[Tuple[int, int], int] = {}
    entries: List[Tuple[int, int]] = []
    # Canonical id per tree object; the leaf uses 0 until m is known
    ids: Dict[int, int] = {}
    stack: List[Tuple[Tree, bool]] = [(t, False)]
    while stack:
        current, expanded = stack.pop()
        key = id(current)
        if key in ids:
            continue
        if current.left is None or current.right is None:
            ids[key] = 0
            continue
        if not expanded:
            stack.append((current, True))
            stack.append((current.right, False))
            stack.append((current.left, False))
            continue
        pair = (ids[id(current.left)], ids[id(current.right)])
        node_id = table.get(pair)
        if node_id is None:
            entries.append(pair)
            node_id = len(entries)
            table[pair] = node_id
        ids[key] = node_id

    m = len(entries) + 1
    children = tuple((left or m, right or m) for left, right in entries)
    logger.debug(f"Minimized tree with {t.leaves} leaves to {m} DAG nodes")
    return Dag(n=t.leaves, m=m, children=children)


def dag_size(t: Tree) -> int:
    """|D_t|: number of pairwise distinct subtrees of ``t``."""
    return minimize(t).m


def unfold(d: Dag) -> Tree:
    """Rebuild the tree represented by ``d``, sharing repeated subtrees."""
    built: List[Tree] = [LEAF] * (d.m + 1)
    for k, (left, right) in enumerate(d.children, start=1):
        built[k] = Tree(built[left], built[right])
    return built[d.root_id]


def field_width(n: int) -> int:
    """Bits per node id: ceil(log2(2n - 1)); zero for a single leaf."""
    return (2 * n - 2).bit_length()


def payload_bits(d: Dag) -> int:
    """Payload length 2(m - 1) * ceil(log2(2n - 1)) in bits."""
    return 2 * (d.m - 1) * field_width(d.n)


class BitWriter:
    """MSB-first bit packer."""

    def __init__(self) -> None:
        self._buf = bytearray()
        self._acc = 0
        self._nbits = 0

    def write(self, value: int, width: int) -> None:
        """Append ``width`` bits of ``value``."""
        self._acc = (self._acc << width) | value
        self._nbits += width
        while self._nbits >= 8:
            self._nbits -= 8
            self._buf.append((self._acc >> self._nbits) & 0xFF)
        self._acc &= (1 << self._nbits) - 1

    def finish(self) -> bytes:
        """Zero-pad to a byte boundary and return the packed bytes."""
        if self._nbits:
            self._buf.append((self._acc << (8 - self._nbits)) & 0xFF)
            self._acc = 0
            self._nbits = 0
        return bytes(self._buf)


class BitReader:
    """MSB-first bit reader."""

    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0  # bit position

    def read(self, width: int) -> int:
        value = 0
        for _ in range(width):
            index = self.pos >> 3
            if index >= len(self.data):
                raise DecodeError("Unexpected end of payload")
            bit = (self.data[index] >> (7 - (self.pos & 7))) & 1
            value = (value << 1) | bit
            self.pos += 1
        return value


def encode(d: Dag) -> bytes:
    """Serialize a DAG: header (magic, version, n, m) then l_1 r_1 ... l_{m-1} r_{m-1}.

    Each id is written MSB-first in exactly ceil(log2(2n - 1)) bits and the
    payload is zero-padded to a byte boundary.
    """
    width = field_width(d.n)
    writer = BitWriter()
    for left, right in d.children:
        writer.write(left, width)
        writer.write(right, width)
    payload = writer.finish()
    logger.debug(f"Encoded DAG n={d.n} m={d.m} into {payload_bits(d)} payload bits")
    return HEADER.pack(MAGIC, VERSION, d.n, d.m) + payload


def decode(data: bytes) -> Dag:
    """Parse bytes produced by :func:`encode`.

    Raises:
        DecodeError: On bad magic or version, truncated or oversized payload,
            child ids outside 1..m or out of canonical order, or a leaf count
            that does not match the header.
    """
    if len(data) < HEADER.size:
        raise DecodeError(f"Truncated header: {len(data)} < {HEADER.size} bytes")
    magic, version, n, m = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise DecodeError(f"Bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise DecodeError(f"Unsupported version {version}, expected {VERSION}")
    if n < 1 or m < 1 or m > 2 * n - 1:
        raise DecodeError(f"Invalid header dimensions n={n}, m={m}")

    width = field_width(n)
    bits = 2 * (m - 1) * width
    expected = (bits + 7) // 8
    payload = data[HEADER.size:]
    if len(payload) < expected:
        raise DecodeError(f"Truncated payload: {len(payload)} < {expected} bytes")
    if len(payload) > expected:
        raise DecodeError(f"Trailing bytes after payload: {len(payload)} > {expected}")

    reader = BitReader(payload)
    children: List[Tuple[int, int]] = []
    sizes = [0] * (m + 1)
    sizes[m] = 1
    for k in range(1, m):
        left = reader.read(width)
        right = reader.read(width)
        for child in (left, right):
            if not 1 <= child <= m:
                raise DecodeError(f"Child id {child} of node {k} outside 1..{m}")
            if child != m and child >= k:
                raise DecodeError(f"Child id {child} of node {k} breaks canonical order")
        children.append((left, right))
        sizes[k] = sizes[left] + sizes[right]

    root = m - 1 if m >= 2 else m
    if sizes[root] != n:
        raise DecodeError(f"Unfolded leaf count {sizes[root]} does not match header n={n}")
    return Dag(n=n, m=m, children=tuple(children))

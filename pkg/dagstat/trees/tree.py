#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright (c) 2025, Lewis Guo. All rights reserved.
# Author: Lewis Guo <guolisen@gmail.com>
# Created: May 02, 2025
#
# Description: Full binary tree terms over the leaf symbol a and binary symbol f.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import logging
import math
from typing import Dict, Iterator, List, Optional, Set, Tuple, Union

from dagstat.errors import CapExceededError, TreeSyntaxError

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_CAP = 14

_WHITESPACE = " \t\r\n"


class Tree:
    """Immutable full binary tree.

    A leaf has ``left is right is None``; an internal node has two children.
    Leaf count and a structural hash are computed once at construction from the
    children's cached values, so building, hashing and comparing never recurse.
    """

    __slots__ = ("left", "right", "leaves", "_hash")

    def __init__(self, left: Optional["Tree"] = None, right: Optional["Tree"] = None):
        if (left is None) != (right is None):
            raise ValueError("An internal node needs exactly two children")
        self.left = left
        self.right = right
        if left is None or right is None:
            self.leaves = 1
            self._hash = hash("a")
        else:
            self.leaves = left.leaves + right.leaves
            self._hash = hash((left._hash, right._hash, self.leaves))

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Tree):
            return NotImplemented
        stack: List[Tuple[Tree, Tree]] = [(self, other)]
        while stack:
            x, y = stack.pop()
            if x is y:
                continue
            if x._hash != y._hash or x.leaves != y.leaves:
                return False
            if x.left is None or y.left is None:
                if x.left is not y.left:
                    return False
                continue
            stack.append((x.right, y.right))  # type: ignore[arg-type]
            stack.append((x.left, y.left))  # type: ignore[arg-type]
        return True

    def __repr__(self) -> str:
        if self.leaves > 64:
            return f"Tree(<{self.leaves} leaves>)"
        return f"Tree({render_tree(self)!r})"


LEAF = Tree()


def leaf() -> Tree:
    """Return the (shared) leaf term ``a``."""
    return LEAF


def node(left: Tree, right: Tree) -> Tree:
    """Return the term ``f(left, right)``."""
    return Tree(left, right)


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos] in _WHITESPACE:
        pos += 1
    return pos


def _syntax_error(text: str, pos: int, message: str) -> TreeSyntaxError:
    return TreeSyntaxError(message, len(text[:pos].encode("utf-8")))


def parse_tree(text: str) -> Tree:
    """Parse a term of the grammar ``t ::= "a" | "f(" t "," t ")"``.

    Whitespace between tokens is ignored. Nesting depth is unbounded.

    Args:
        text: Term text.

    Returns:
        Parsed tree.

    Raises:
        TreeSyntaxError: With the byte offset of the first offending character.
    """
    pos = 0
    end = len(text)
    # Each open frame collects the children of one pending "f("
    frames: List[List[Tree]] = []

    while True:
        pos = _skip_ws(text, pos)
        if pos >= end:
            raise _syntax_error(text, pos, "Unexpected end of input, expected 'a' or 'f('")
        ch = text[pos]
        if ch == "f":
            pos = _skip_ws(text, pos + 1)
            if pos >= end or text[pos] != "(":
                raise _syntax_error(text, pos, "Expected '(' after 'f'")
            frames.append([])
            pos += 1
            continue
        if ch != "a":
            raise _syntax_error(text, pos, f"Unexpected character {ch!r}")
        pos += 1
        current = LEAF

        # Reduce completed frames
        while frames:
            frame = frames[-1]
            frame.append(current)
            pos = _skip_ws(text, pos)
            if len(frame) == 1:
                if pos >= end or text[pos] != ",":
                    raise _syntax_error(text, pos, "Expected ','")
                pos += 1
                break
            if pos >= end or text[pos] != ")":
                raise _syntax_error(text, pos, "Expected ')'")
            pos += 1
            frames.pop()
            current = Tree(frame[0], frame[1])
        else:
            pos = _skip_ws(text, pos)
            if pos != end:
                raise _syntax_error(text, pos, "Trailing characters after term")
            return current


def render_tree(t: Tree) -> str:
    """Render a tree as term text without whitespace."""
    out: List[str] = []
    stack: List[Union[Tree, str]] = [t]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
        elif item.left is None:
            out.append("a")
        else:
            out.append("f(")
            stack.extend((")", item.right, ",", item.left))  # type: ignore[arg-type]
    return "".join(out)


def read_corpus(text: str) -> List[Tree]:
    """Parse a newline-delimited corpus; blank and '#' lines are skipped."""
    trees = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        trees.append(parse_tree(stripped))
    return trees


def leaf_count(t: Tree) -> int:
    """Number of leaves |t|."""
    return t.leaves


def node_count(t: Tree) -> int:
    """Number of nodes; a full binary tree with n leaves has 2n-1."""
    return 2 * t.leaves - 1


def subtrees(t: Tree) -> Iterator[Tree]:
    """Yield the subtree at every node of ``t`` in left-to-right postorder."""
    stack: List[Tuple[Tree, bool]] = [(t, False)]
    while stack:
        current, expanded = stack.pop()
        if current.left is None or expanded:
            yield current
            continue
        stack.append((current, True))
        stack.append((current.right, False))  # type: ignore[arg-type]
        stack.append((current.left, False))


def count_above(t: Tree, b: int) -> int:
    """N(t, b): number of nodes of ``t`` whose leaf-size is greater than ``b``."""
    count = 0
    stack = [t]
    while stack:
        current = stack.pop()
        # Leaf-size is monotone along root paths, so small subtrees are pruned
        if current.leaves <= b:
            continue
        count += 1
        if current.left is not None:
            stack.append(current.left)
            stack.append(current.right)  # type: ignore[arg-type]
    return count


def distinct_small_subtrees(t: Tree, b: int) -> int:
    """S(t, b): number of pairwise distinct subtrees of ``t`` with at most ``b`` leaves."""
    seen: Set[Tree] = set()
    stack = [t]
    while stack:
        current = stack.pop()
        if current.leaves <= b:
            if current in seen:
                # Every subtree of a seen subtree is already seen
                continue
            seen.add(current)
        if current.left is not None:
            stack.append(current.left)
            stack.append(current.right)  # type: ignore[arg-type]
    return len(seen)


def mirror(t: Tree) -> Tree:
    """Exchange left and right children at every node.

    Shared substructure is mirrored once, so trees built with sharing (for
    example deterministic-source trees) stay cheap.
    """
    memo: Dict[int, Tree] = {id(LEAF): LEAF}
    stack: List[Tuple[Tree, bool]] = [(t, False)]
    while stack:
        current, expanded = stack.pop()
        key = id(current)
        if key in memo:
            continue
        if current.left is None:
            memo[key] = current
            continue
        if expanded:
            memo[key] = Tree(memo[id(current.right)], memo[id(current.left)])
            continue
        stack.append((current, True))
        stack.append((current.right, False))  # type: ignore[arg-type]
        stack.append((current.left, False))
    return memo[id(t)]


def catalan(k: int) -> int:
    """Exact Catalan number C_k."""
    if k < 0:
        raise ValueError(f"Catalan index must be non-negative, got {k}")
    return math.comb(2 * k, k) // (k + 1)


def enumerate_trees(n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[Tree]:
    """Yield every tree with ``n`` leaves exactly once.

    Order is by left subtree size ascending, recursively within; Catalan(n-1)
    trees in total.

    Args:
        n: Number of leaves.
        cap: Largest admissible ``n``.

    Raises:
        CapExceededError: If ``n`` exceeds ``cap``.
    """
    if n < 1:
        raise ValueError(f"Number of leaves must be positive, got {n}")
    if n > cap:
        raise CapExceededError("enumeration", n, cap)
    logger.debug(f"Enumerating {catalan(n - 1)} trees with {n} leaves")
    return _enumerate(n)


def _enumerate(n: int) -> Iterator[Tree]:
    if n == 1:
        yield LEAF
        return
    by_size: Dict[int, List[Tree]] = {1: [LEAF]}
    for m in range(2, n):
        by_size[m] = [
            Tree(left, right)
            for k in range(1, m)
            for left in by_size[k]
            for right in by_size[m - k]
        ]
    for k in range(1, n):
        for left in by_size[k]:
            for right in by_size[n - k]:
                yield Tree(left, right)

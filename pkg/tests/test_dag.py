import struct

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIGURE_TERM
from dagstat.errors import DecodeError
from dagstat.trees.dag import (
    HEADER,
    Dag,
    decode,
    dag_size,
    encode,
    field_width,
    minimize,
    payload_bits,
    unfold,
)
from dagstat.trees.tree import LEAF, Tree, enumerate_trees, mirror, parse_tree, subtrees


def naive_dag_size(t: Tree) -> int:
    return len(set(subtrees(t)))


class TestMinimize:
    def test_figure(self):
        d = minimize(parse_tree(FIGURE_TERM))
        assert d.n == 10
        assert d.m == 6
        assert d.children == ((6, 6), (6, 1), (6, 2), (2, 1), (3, 4))
        assert d.root_id == 5
        assert d.leaf_id == 6

    def test_leaf(self):
        d = minimize(LEAF)
        assert (d.n, d.m, d.children) == (1, 1, ())
        assert unfold(d) is LEAF

    def test_perfect_tree(self):
        assert dag_size(parse_tree("f(f(a,a),f(a,a))")) == 3

    @pytest.mark.parametrize("n", range(1, 9))
    def test_matches_naive_oracle(self, n):
        for t in enumerate_trees(n):
            assert dag_size(t) == naive_dag_size(t)

    @pytest.mark.parametrize("n", range(1, 8))
    def test_children_precede_parents(self, n):
        for t in enumerate_trees(n):
            d = minimize(t)
            for k, pair in enumerate(d.children, start=1):
                assert all(child == d.m or child < k for child in pair)

    def test_unfold(self):
        t = parse_tree(FIGURE_TERM)
        assert unfold(minimize(t)) == t

    def test_size_bounds(self):
        for t in enumerate_trees(7):
            assert 1 <= dag_size(t) <= 2 * t.leaves - 1

    @pytest.mark.parametrize("n", range(1, 7))
    def test_mirror_keeps_size(self, n):
        for t in enumerate_trees(n):
            assert dag_size(mirror(t)) == dag_size(t)

    def test_rejects_inconsistent_dag(self):
        with pytest.raises(ValueError):
            Dag(n=2, m=2, children=())


class TestEncoding:
    def test_field_width(self):
        assert field_width(1) == 0
        assert field_width(2) == 2
        assert field_width(10) == 5
        assert field_width(16) == 5
        assert field_width(17) == 6

    def test_figure_payload(self):
        d = minimize(parse_tree(FIGURE_TERM))
        assert payload_bits(d) == 50
        assert len(encode(d)) == HEADER.size + 7

    def test_cherry_golden(self, golden_dir):
        data = encode(minimize(parse_tree("f(a,a)")))
        assert data == (golden_dir / "cherry.lcdg").read_bytes()
        assert data[-1] == 0xA0

    def test_figure_golden(self, golden_dir):
        data = (golden_dir / "figure.lcdg").read_bytes()
        assert encode(minimize(parse_tree(FIGURE_TERM))) == data
        assert unfold(decode(data)) == parse_tree(FIGURE_TERM)

    @pytest.mark.parametrize("n", range(1, 8))
    def test_exhaustive_round_trip(self, n):
        for t in enumerate_trees(n):
            d = minimize(t)
            data = encode(d)
            assert (len(data) - HEADER.size) * 8 - payload_bits(d) in range(8)
            assert payload_bits(d) == 2 * (d.m - 1) * field_width(n)
            assert decode(data) == d

    def test_single_leaf_has_empty_payload(self):
        data = encode(minimize(LEAF))
        assert len(data) == HEADER.size
        assert decode(data).m == 1


def _figure_bytes(golden_dir) -> bytes:
    return (golden_dir / "figure.lcdg").read_bytes()


class TestDecodeErrors:
    def test_truncated_header(self, golden_dir):
        with pytest.raises(DecodeError, match="header"):
            decode(_figure_bytes(golden_dir)[:10])

    def test_bad_magic(self, golden_dir):
        with pytest.raises(DecodeError, match="magic"):
            decode(b"XXXX" + _figure_bytes(golden_dir)[4:])

    def test_bad_version(self, golden_dir):
        data = bytearray(_figure_bytes(golden_dir))
        data[4] = 2
        with pytest.raises(DecodeError, match="version"):
            decode(bytes(data))

    def test_truncated_payload(self, golden_dir):
        with pytest.raises(DecodeError, match="Truncated payload"):
            decode(_figure_bytes(golden_dir)[:-1])

    def test_trailing_bytes(self, golden_dir):
        with pytest.raises(DecodeError, match="Trailing"):
            decode(_figure_bytes(golden_dir) + b"\x00")

    def test_too_many_nodes(self):
        with pytest.raises(DecodeError, match="dimensions"):
            decode(HEADER.pack(b"LCDG", 1, 2, 4) + b"\x00\x00")

    def test_child_out_of_range(self):
        # n=2, m=2, w=2: ids (0, 2)
        with pytest.raises(DecodeError, match="outside"):
            decode(HEADER.pack(b"LCDG", 1, 2, 2) + bytes([0b00100000]))

    def test_forward_reference(self):
        # n=3, m=3, w=3: node 1 = (2, 3) points at itself or later
        payload = int("010" "011" "011" "001" "0000", 2).to_bytes(2, "big")
        with pytest.raises(DecodeError, match="canonical order"):
            decode(HEADER.pack(b"LCDG", 1, 3, 3) + payload)

    def test_leaf_count_mismatch(self):
        # n=3, m=3: node 1 = (3, 3), node 2 = (1, 1) unfolds to four leaves
        payload = int("011" "011" "001" "001" "0000", 2).to_bytes(2, "big")
        with pytest.raises(DecodeError, match="leaf count"):
            decode(HEADER.pack(b"LCDG", 1, 3, 3) + payload)

    @given(st.binary(max_size=64))
    def test_random_bytes_never_crash(self, data):
        try:
            decode(data)
        except DecodeError:
            pass

    def test_header_layout(self):
        assert HEADER.format == ">4sBQQ"
        assert struct.calcsize(HEADER.format) == 21

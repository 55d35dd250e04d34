#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright (c) 2025, Lewis Guo. All rights reserved.
# Author: Lewis Guo <guolisen@gmail.com>
# Created: May 10, 2025
#
# Description: Output helpers shared by the command modules.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import csv
import math
import re
from typing import IO, Any, Iterable, List, Optional, Sequence

FORMAT_VERSION = "v1"

_POWER = re.compile(r"^\s*(\d+)\s*\^\s*(\d+)\s*$")


def metadata_line(seed: Optional[int], source: str) -> str:
    """First line of every text output."""
    seed_text = "none" if seed is None else str(seed)
    return f"# dagstat {FORMAT_VERSION} seed={seed_text} source={source}"


def format_value(value: Any) -> str:
    """Render a CSV cell; floats use 10 fixed decimals so outputs are byte-stable."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.10f}"
    return str(value)


def write_csv(stream: IO[str], header: Sequence[str], rows: Iterable[Sequence[Any]],
              metadata: Sequence[str] = ()) -> None:
    """Write '#'-prefixed metadata lines, a header and rows."""
    for line in metadata:
        stream.write(line if line.startswith("#") else f"# {line}")
        stream.write("\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(value) for value in row])


def parse_int_list(text: str) -> List[int]:
    """Parse '1024,4096' or '2^10,2^12' into integers."""
    values = []
    for item in text.split(","):
        if not item.strip():
            continue
        match = _POWER.match(item)
        if match:
            values.append(int(match.group(1)) ** int(match.group(2)))
        else:
            values.append(int(item.strip()))
    if not values:
        raise ValueError(f"No integers in {text!r}")
    return values

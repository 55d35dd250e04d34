#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright (c) 2025, Lewis Guo. All rights reserved.
# Author: Lewis Guo <guolisen@gmail.com>
# Created: May 11, 2025
#
# Description: Main entry point for dagstat.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import sys
from typing import Optional, Sequence

import click

from dagstat.cli import create_cli


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one dagstat command and return its exit code.

    Usage errors exit with 2, runtime errors with 1; both print a
    diagnostic on standard error.
    """
    cli = create_cli()
    try:
        cli.main(args=list(argv) if argv is not None else None, prog_name="dagstat",
                 standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except click.ClickException as e:
        e.show()
        return e.exit_code
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

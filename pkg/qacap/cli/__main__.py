# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

from pathlib import Path

import click
from dotenv import load_dotenv

from qacap.cli.commands.caption import caption
from qacap.cli.commands.evaluate import evaluate
from qacap.cli.commands.replay import replay

CONTEXT_SETTINGS = dict(help_option_names=["-h", "--help"])


@click.group(context_settings=CONTEXT_SETTINGS)
@click.option(
    "--env",
    default=".env",
    envvar="QACAP_ENV",
    type=Path,
    help="Path to environment configuration file",
)
def qacap(env):
    load_dotenv(env)


qacap.add_command(caption)
qacap.add_command(evaluate)
qacap.add_command(replay)


if __name__ == "__main__":
    qacap()

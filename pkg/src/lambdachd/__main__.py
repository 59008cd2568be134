# Copyright 2026 The lambdachd Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""The lambdachd command line interface."""
import argparse
import logging
import os
import sys
import time

import lambdachd
from lambdachd.cli.config import (
    as_units,
    CommandName,
    COMMANDS,
    default_config,
    load_config,
    RunConfig,
    UNITS,
)
from lambdachd.cli.csvout import write_dataset, write_dataset_file
from lambdachd.cli.presets import expand_target, list_presets, load_preset
from lambdachd.cli.runs import execute
from lambdachd.errors import ConfigError, InvalidParams, NumericalError
from lambdachd.model import LambdaParams, PARAM_FIELDS
from lambdachd.oracle.fixture import write_fixture
from lambdachd.oracle.suite import (
    parameter_sets,
    reference_values,
    run_checks,
)
from lambdachd.util import elapsed_time_string


logger = logging.getLogger("lambdachd")


EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
DEFAULT_OUT = "data"
"""The output folder of `reproduce`."""


def setup_logging(verbosity: int) -> None:
    """
    Logs to stderr.

    Args:
        verbosity (int): 0 for warnings, 1 for info, and 2 or more for debug
        messages.
    """
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(
        logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logger.handlers[:] = [handler]
    logger.setLevel(level)


def _params_text(params: LambdaParams) -> str:
    return " ".join(
        f"{name}={getattr(params, name):.4g}" for name in PARAM_FIELDS)


def _version() -> str:
    return str(lambdachd.__version__)


def _run_config(
        command: CommandName,
        config: RunConfig,
        *,
        threads: int | None,
        out: str | None,
        out_name: str) -> None:
    start_time = time.monotonic()
    logger.info("running %s on %s", command, config.source)
    dataset = execute(command, config, _version(), threads=threads)
    if out is None:
        write_dataset(dataset, sys.stdout)
    else:
        path = os.path.join(out, f"{out_name}.csv")
        write_dataset_file(dataset, path)
        logger.info("wrote %d rows to %s", len(dataset.rows), path)
    logger.info(
        "finished %s in %s",
        command,
        elapsed_time_string(time.monotonic() - start_time).strip())


def run_command(command: CommandName, args: argparse.Namespace) -> int:
    """
    Runs a computation command.

    Args:
        command (CommandName): The command.

        args (argparse.Namespace): The arguments.

    Returns:
        int: The exit code.
    """
    if args.config is None:
        config = default_config(units=args.units)
        out_name = command
    else:
        config = load_config(args.config, units=args.units)
        out_name = os.path.splitext(os.path.basename(args.config))[0]
    _run_config(
        command,
        config,
        threads=args.threads,
        out=args.out,
        out_name=out_name)
    return EXIT_OK


def run_reproduce(args: argparse.Namespace) -> int:
    """
    Runs presets and writes one file per preset.

    Args:
        args (argparse.Namespace): The arguments.

    Raises:
        ConfigError: If a preset does not name its command.

    Returns:
        int: The exit code.
    """
    out = DEFAULT_OUT if args.out is None else args.out
    for name in expand_target(args.target):
        config = load_preset(name)
        if config.command is None:
            raise ConfigError(f"{config.source}: preset has no command")
        _run_config(
            config.command,
            config,
            threads=args.threads,
            out=out,
            out_name=name)
    return EXIT_OK


def run_validate(args: argparse.Namespace) -> int:
    """
    Runs the oracle cross-checks and prints a table of the results.

    Args:
        args (argparse.Namespace): The arguments.

    Returns:
        int: The exit code. 1 if any check failed.
    """
    if args.random < 0:
        raise ConfigError(f"--random must be non-negative: {args.random}")
    start_time = time.monotonic()
    results = run_checks(
        parameter_sets(args.random, args.seed), with_master=not args.fast)
    failed = 0
    for result in results:
        if not result.passed:
            failed += 1
        print(
            f"{'PASS' if result.passed else 'FAIL'} "
            f"{result.name:<24} error={result.error:.3e} "
            f"tolerance={result.tolerance:.3e} "
            f"{_params_text(result.params)}")
    print(
        f"{len(results) - failed}/{len(results)} checks passed in "
        f"{elapsed_time_string(time.monotonic() - start_time).strip()}")
    if args.fixture is not None:
        write_fixture(
            args.fixture,
            reference_values(),
            comment=f"lambdachd {_version()}")
        logger.info("wrote fixture %s", args.fixture)
    return EXIT_OK if failed == 0 else EXIT_FAILED


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    """
    Parses the command line arguments.

    Args:
        argv (list[str] | None, optional): The arguments. Defaults to the
        arguments of the process.

    Returns:
        argparse.Namespace: The parse result.
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="log info messages, repeat for debug messages")
    common.add_argument(
        "--threads",
        type=int,
        default=None,
        help="number of worker threads. defaults to the number of cores")
    common.add_argument(
        "--out",
        default=None,
        type=str,
        help="output folder. results are written to stdout if omitted")

    parser = argparse.ArgumentParser(
        prog="lambdachd",
        description=(
            "Resonance fluorescence of a Λ-type atom near coherent "
            "population trapping"))
    subparser = parser.add_subparsers(title="Commands", required=True)

    for command in COMMANDS:

        def run_cmd(
                args: argparse.Namespace,
                command: CommandName = command) -> int:
            return run_command(command, args)

        subparse_cmd = subparser.add_parser(command, parents=[common])
        subparse_cmd.set_defaults(func=run_cmd)
        subparse_cmd.add_argument(
            "--config",
            default=None,
            type=str,
            help="the TOML configuration. defaults to the working point")
        subparse_cmd.add_argument(
            "--units",
            choices=UNITS,
            type=as_units,
            default=None,
            help="overrides the unit mode of the configuration")

    subparse_reproduce = subparser.add_parser(
        "reproduce",
        parents=[common],
        help=f"runs presets: {', '.join(list_presets())}")
    subparse_reproduce.set_defaults(func=run_reproduce)
    subparse_reproduce.add_argument(
        "target",
        type=str,
        help="a preset, a group like fig2, or 'all'. --out defaults to data")

    subparse_validate = subparser.add_parser(
        "validate", parents=[common], help="runs the oracle cross-checks")
    subparse_validate.set_defaults(func=run_validate)
    subparse_validate.add_argument(
        "--random",
        default=5,
        type=int,
        help="number of random parameter sets besides the working point")
    subparse_validate.add_argument(
        "--seed",
        default=0,
        type=int,
        help="seed of the random parameter sets")
    subparse_validate.add_argument(
        "--fast",
        default=False,
        action="store_true",
        help="skip the master equation integrations")
    subparse_validate.add_argument(
        "--fixture",
        default=None,
        type=str,
        help="writes oracle reference values of the working point")
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    """
    Runs the command line interface.

    Args:
        argv (list[str] | None, optional): The arguments. Defaults to the
        arguments of the process.

    Returns:
        int: The exit code: 0 on success, 1 for failed checks, 2 for
        configuration errors, and 3 for numerical degeneracies.
    """
    args = parse_args(argv)
    setup_logging(args.verbose)
    if args.threads is not None and args.threads < 1:
        print(
            f"error: --threads must be positive: {args.threads}",
            file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except (ConfigError, InvalidParams) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def run() -> None:
    """
    Runs the command line interface and exits with its exit code.
    """
    sys.exit(main())


if __name__ == "__main__":
    run()

__doc__ = """
This module contains the ``mmint`` command-line interface, which offers
three subcommands:

* ``mmint run CONFIG`` runs an experiment and writes its artifacts.
* ``mmint validate CONFIG`` reports every problem of an experiment.
* ``mmint describe TOPOLOGY`` prints the switches, node identifiers and
  forward route of a topology.

``CONFIG`` is either a YAML file or one of the bundled experiments,
``probe-cost`` and ``queue-occupancy``, while ``TOPOLOGY`` is either a YAML
file or ``seven-switch``. The exit status is ``0`` on success, ``1`` on invalid
input and ``2`` on any other error.

Classes & methods
-------------------------------------------

Below are listed all functions within :py:mod:`mmint.meta.cli`.
"""


import sys as _sys
import yaml as _yaml
import logging as _logging
import argparse as _argparse
import mmint.core.exceptions as _ex
import mmint.meta.experiments as _exp
from typing import Optional as _Optional


_logger = _logging.getLogger(__name__)


EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_INTERNAL_ERROR = 2

_INPUT_ERRORS = (_ex.TopologyException, _ex.ConfigException, _ex.DisconnectedTopologyException,
    _ex.RouteOverflowException, FileNotFoundError, _yaml.YAMLError)


def build_parser() -> _argparse.ArgumentParser:
    '''
    Returns the argument parser of the ``mmint`` command.
    '''
    parser = _argparse.ArgumentParser(prog='mmint',
        description='Simulate multi-queue in-band telemetry probing strategies.')
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='count', default=0,
        help='log more details (repeat for debug output)')
    verbosity.add_argument('-q', '--quiet', action='store_true', help='log errors only')
    commands = parser.add_subparsers(dest='command', required=True)

    run = commands.add_parser('run', help='run an experiment and write its artifacts')
    run.add_argument('config', help=f"experiment file or one of {', '.join(_exp.BUNDLED_CONFIGS)}")
    run.add_argument('-o', '--output-dir',
        help=f"artifact directory (default: ${_exp.OUTPUT_DIR_ENV}, then the experiment's own)")
    run.add_argument('--seed', type=int, help='override the seed of the experiment')

    validate = commands.add_parser('validate', help='check an experiment for problems')
    validate.add_argument('config', help=f"experiment file or one of {', '.join(_exp.BUNDLED_CONFIGS)}")

    describe = commands.add_parser('describe', help='summarize a topology')
    describe.add_argument('topology', help=f"topology file or \"{_exp.BUNDLED_TOPOLOGY}\"")
    return parser


def _configure_logging(verbose: int, quiet: bool) -> None:
    if quiet:
        level = _logging.ERROR
    else:
        level = (_logging.WARNING, _logging.INFO, _logging.DEBUG)[min(verbose, 2)]
    _logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')


def _run(args) -> int:
    config = _exp.load_config(args.config)
    result = _exp.run_experiment(config, args.output_dir, args.seed)
    print(_exp.summarize(result.config, result.report), end='')
    if result.output_dir is None:
        _logger.warning("No output directory was given, so no artifacts were written.")
    return EXIT_OK


def _validate(args) -> int:
    problems = _exp.validate(args.config)
    for p in problems:
        print(p)
    if problems:
        return EXIT_INPUT_ERROR
    print(f"{args.config}: OK")
    return EXIT_OK


def _describe(args) -> int:
    print(_exp.describe_topology(args.topology), end='')
    return EXIT_OK


def main(argv: _Optional[list[str]] = None) -> int:
    '''
    Runs the ``mmint`` command and returns its exit status.

    :param list[str] argv: The command-line arguments. Defaults to ``sys.argv[1:]``.
    '''
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose, args.quiet)
    handler = {'run': _run, 'validate': _validate, 'describe': _describe}[args.command]
    try:
        return handler(args)
    except _INPUT_ERRORS as e:
        print(f"error: {e}", file=_sys.stderr)
        return EXIT_INPUT_ERROR
    except Exception as e:
        _logger.debug("Unexpected failure.", exc_info=True)
        print(f"internal error: {e}", file=_sys.stderr)
        return EXIT_INTERNAL_ERROR

"""
ABH Beam Laboratory - Command Line Application
Main entry point
"""
import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from cli.commands import EXIT_ERROR, HANDLERS
from config import APP_NAME, APP_VERSION, DEFAULT_CONFIG, DEFAULT_MODE_COUNT, MAX_WORKERS
from core.exceptions import AbhLabError


logger = logging.getLogger(APP_NAME)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=str(DEFAULT_CONFIG), help="Configuration file")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="Override one configuration value (repeatable)"
    )
    parser.add_argument("--output-dir", default=None, help="Directory for artifacts")
    parser.add_argument("--plot", action="store_true", help="Also render an SVG figure")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=APP_NAME,
        description="Harmonic response of a damped acoustic-black-hole beam"
    )
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {APP_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    modes = sub.add_parser("modes", help="Natural frequencies and modal loss factors")
    _add_common(modes)
    modes.add_argument("--count", type=int, default=DEFAULT_MODE_COUNT, help="Flexible modes to report")
    modes.add_argument("--dump-matrices", action="store_true", help="Write M, K and f0")

    respond = sub.add_parser("respond", help="Wavefield and CF at one frequency")
    _add_common(respond)
    respond.add_argument("--freq-hz", type=float, default=None, help="Excitation frequency (Hz)")
    respond.add_argument("--dump-matrices", action="store_true", help="Write M, K and f0")

    spectrum = sub.add_parser("spectrum", help="Frequency-wavenumber spectrum at one frequency")
    _add_common(spectrum)
    spectrum.add_argument("--freq-hz", type=float, default=None, help="Excitation frequency (Hz)")

    frf = sub.add_parser("frf", help="Receptance at chosen stations over a frequency range")
    _add_common(frf)
    frf.add_argument("--freq-range", default="10:10000:500log", help="lo:hi:COUNT[log|lin] in Hz")
    frf.add_argument("--stations", default="0.05,0.5,1.0", help="Comma-separated positions (m)")

    sweep = sub.add_parser("cf-sweep", help="CF over one or two parameter axes")
    _add_common(sweep)
    sweep.add_argument("--axis1", default=None, help="name=lo:hi:COUNT[log|lin] or name=v1,v2,...")
    sweep.add_argument("--axis2", default=None, help="Second axis, same syntax")
    sweep.add_argument("--workers", type=int, default=MAX_WORKERS, help="Worker threads")

    validate = sub.add_parser("validate-config", help="Parse and validate a configuration")
    _add_common(validate)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )

    try:
        return HANDLERS[args.command](args)
    except AbhLabError as e:
        logger.error(str(e))
        return EXIT_ERROR
    except ValidationError as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

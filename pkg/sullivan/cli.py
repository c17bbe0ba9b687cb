"""
Command line interface ``sullivan``.

Subcommands:
    homology  integral homology table of one component
    verify    verification suite against one component
    classes   construct and certify a named class
    cache     list or clear cached complexes

Exit codes: 0 success, 2 usage, 3 budget, 4 invalid input, 5 failed
verification, 6 cache.
"""

import argparse
import csv
import io
import json
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError

from . import __version__
from .config import OUTPUT_FORMATS, RunSpec
from .controller import CLASS_CHECKS, SullivanController
from .exceptions import SullivanError, VerificationError
from .models import Flavor

logger = logging.getLogger("sullivan.cli")

USAGE_EXIT_CODE = 2


def _common(parser: argparse.ArgumentParser, component: bool = True) -> None:
    if component:
        parser.add_argument(
            "--flavor",
            choices=[f.value for f in Flavor],
            default=Flavor.UNPAR_UNEN.value,
            help="Flavor of Sullivan diagrams (default: unpar-unen)",
        )
        parser.add_argument("-g", type=int, default=0, help="Genus (default: 0)")
        parser.add_argument("-m", type=int, default=1, help="Number of boundary cycles or leaves (default: 1)")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default="csv", help="Output format (default: csv)")
    parser.add_argument("--cache-dir", help="Cache directory (default: $SULLIVAN_CACHE_DIR or ~/.cache/sullivan)")
    parser.add_argument("--threads", type=int, help="Worker threads (default: $SULLIVAN_THREADS or CPU count)")
    parser.add_argument("--budget-cells", type=int, help="Maximum number of cells per component")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")


def parse_arguments(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog="sullivan", description="Homology of moduli spaces of 1-Sullivan diagrams")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    homology = commands.add_parser("homology", help="Integral homology table of one component")
    _common(homology)
    homology.add_argument("--min-degree", type=int, help="Lowest degree to report")
    homology.add_argument("--max-degree", type=int, help="Highest degree to report")
    homology.add_argument("--use-morse", action="store_true", help="Reduce with the Morse flow before computing")

    verify = commands.add_parser("verify", help="Run the verification suite on one component")
    _common(verify)
    verify.add_argument("--check", help="Comma separated check names, or 'all' (default: the standard suite)")

    classes = commands.add_parser("classes", help="Construct and certify a named class")
    _common(classes, component=False)
    classes.add_argument("--check", required=True, choices=CLASS_CHECKS, help="Class or property to certify")
    classes.add_argument("argument", nargs="?", help="Integer parameters, e.g. 4 or 3,3")

    cache = commands.add_parser("cache", help="List or clear cached complexes")
    _common(cache, component=False)
    cache.add_argument("action", choices=("info", "clear"), help="What to do with the cache")

    return parser.parse_args(argv)


def _run_spec(args: argparse.Namespace) -> RunSpec:
    return RunSpec(
        command=args.command,
        flavor=getattr(args, "flavor", Flavor.UNPAR_UNEN.value),
        g=getattr(args, "g", 0),
        m=getattr(args, "m", 1),
        min_degree=getattr(args, "min_degree", None),
        max_degree=getattr(args, "max_degree", None),
        format=args.format,
        cache_dir=args.cache_dir,
        threads=args.threads,
        budget_cells=args.budget_cells,
        check=getattr(args, "check", None),
        argument=getattr(args, "argument", None),
        use_morse=getattr(args, "use_morse", False),
    )


def _rows_csv(header: List[str], rows: List[List[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _dump(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def cmd_homology(controller: SullivanController, spec: RunSpec) -> int:
    rows = controller.homology_table(
        spec.flavor,
        spec.g,
        spec.m,
        use_morse=spec.use_morse,
        min_degree=spec.min_degree,
        max_degree=spec.max_degree,
    )
    text = controller.render_table(rows, spec.format)
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return 0


def cmd_verify(controller: SullivanController, spec: RunSpec) -> int:
    checks = [name.strip() for name in spec.check.split(",")] if spec.check else None
    report = controller.verify(spec.flavor, spec.g, spec.m, checks=checks, raise_on_failure=False)
    if spec.format == "json":
        sys.stdout.write(_dump(report.to_dict()))
    else:
        sys.stdout.write(_rows_csv(["check", "status"], [[r["check"], r["status"]] for r in report.to_dict()["checks"]]))
    if not report.passed:
        logger.error(f"Verification failed: {', '.join(report.failures)}")
        return VerificationError.exit_code
    return 0


def cmd_classes(controller: SullivanController, spec: RunSpec) -> int:
    report = controller.classes(spec.check, spec.argument, raise_on_failure=False)
    if spec.format == "json":
        sys.stdout.write(_dump(report))
    else:
        fields = sorted(key for key in report if key not in ("schema_version",))
        sys.stdout.write(_rows_csv(["field", "value"], [[key, report[key]] for key in fields]))
    return 0 if report["passed"] else VerificationError.exit_code


def cmd_cache(controller: SullivanController, spec: RunSpec) -> int:
    if spec.argument == "clear":
        removed = controller.cache_clear()
        sys.stdout.write(_dump({"removed": removed}) if spec.format == "json" else "".join(f"{p}\n" for p in removed))
        return 0
    entries = controller.cache_info()
    if spec.format == "json":
        sys.stdout.write(_dump({"schema_version": 1, "entries": entries}))
    else:
        sys.stdout.write(
            _rows_csv(
                ["flavor", "g", "m", "top_degree", "counts", "created_at"],
                [
                    [e["flavor"], e["g"], e["m"], e["top_degree"], ";".join(str(n) for n in e["counts"]), e["created_at"]]
                    for e in entries
                ],
            )
        )
    return 0


COMMANDS = {
    "homology": cmd_homology,
    "verify": cmd_verify,
    "classes": cmd_classes,
    "cache": cmd_cache,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_arguments(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    if args.command == "cache":
        args.argument = args.action
    try:
        spec = _run_spec(args)
    except ValidationError as e:
        logger.error(f"Invalid arguments: {e}")
        return USAGE_EXIT_CODE
    controller = SullivanController(spec.settings())
    try:
        return COMMANDS[spec.command](controller, spec)
    except SullivanError as e:
        logger.error(f"{type(e).__name__}: {e}")
        report = getattr(e, "report", None)
        if report is not None:
            sys.stdout.write(_dump(report))
        return e.exit_code
    except ValueError as e:
        logger.error(f"Invalid arguments: {e}")
        return USAGE_EXIT_CODE


if __name__ == "__main__":
    sys.exit(main())

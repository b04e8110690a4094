"""``ore-lab`` command line entry point."""

from __future__ import annotations

import argparse
import json
import sys

from .commands import COMMANDS, EXIT_USAGE, CommandError, run_command
from .scenario import PRESETS, ScenarioError, load_scenario


class _Parser(argparse.ArgumentParser):
    # exit code 2 is reserved for property failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="ore-lab",
        description="Exact experiments with Ore extensions over split corner rings.",
        epilog=f"presets: {', '.join(PRESETS)}",
    )
    p.add_argument("command", choices=list(COMMANDS))
    p.add_argument("--scenario", help="preset name or path to a scenario JSON file")
    p.add_argument("--poly", help="polynomial for classify, e.g. 'X^2 - x1'")
    p.add_argument("--h", help="candidate member for membership")
    p.add_argument("--f", help="generator for membership")
    p.add_argument("--k", type=int, help="parameter k of the final-example preset")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    return p


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        config = None
        if ns.scenario is not None:
            config = load_scenario(ns.scenario, ns.k)
        elif ns.command != "reproduce":
            raise CommandError(f"{ns.command} needs --scenario")
        args = {"poly": ns.poly, "h": ns.h, "f": ns.f, "samples": ns.samples, "seed": ns.seed}
        report = run_command(config, ns.command, args)
    except (CommandError, ScenarioError) as exc:
        print(f"ore-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = json.dumps(report.to_json(), indent=2)
    if ns.out:
        with open(ns.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    print(report.summary, file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())

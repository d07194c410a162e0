"""Command-line experiment runner.

Examples
--------
::

    ptesd spectrum --set topology=ternary --out ternary_spectrum.csv
    ptesd evolve --set experiment=binary-noiseless
    ptesd esd-scan --config runs/esd.cfg --set "coupling=ep+0.001, 0.6, 1.0"
    ptesd wigner --out wigner/
    ptesd heatmap --set experiment=ternary-thermal --set workers=4 --out ternary-thermal.csv
    ptesd optomech-derive --set drive=1500

Exit codes: 0 success, 2 configuration error, 3 numerical divergence,
4 optomechanical steady state did not converge.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import experiments
from .config import COMMAND_DEFAULTS, ConfigError, load_config
from .optomech import SteadyStateError

EXIT_OK, EXIT_CONFIG, EXIT_DIVERGED, EXIT_NO_CONVERGENCE = 0, 2, 3, 4

_RUNNERS = {
    "spectrum": experiments.run_spectrum,
    "evolve": experiments.run_evolve,
    "esd-scan": experiments.run_esd_scan,
    "heatmap": experiments.run_heatmap,
    "optomech-derive": experiments.run_optomech,
}


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ptesd", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "spectrum": "eigenfrequencies over a J/Gamma sweep, with the exceptional point",
        "evolve": "E_N (binary) or S (ternary) time series for each coupling",
        "esd-scan": "entanglement sudden-death time for each coupling",
        "wigner": "Wigner slices W(q1, q2; p1 = p2 = 0), one CSV per (J, t)",
        "heatmap": "entanglement snapshot over a (J/Gamma, n_th) grid",
        "optomech-derive": "gain/loss rates from cavity optomechanics parameters",
    }
    for name in COMMAND_DEFAULTS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--config", type=Path, help="flat key = value configuration file")
        p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                       help="override a configuration key (repeatable)")
        default_out = "wigner" if name == "wigner" else "-"
        p.add_argument("--out", default=default_out,
                       help="output CSV path ('-' for stdout); for wigner, an output directory")
    return parser


def _write(text: str, out: str):
    if out == "-":
        sys.stdout.write(text)
    else:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.command, args.config, args.overrides)
    except ConfigError as exc:
        print(f"ptesd {args.command}: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "wigner":
        out_dir = Path(args.out)
        if out_dir.exists() and not out_dir.is_dir():
            print(f"ptesd wigner: --out {out_dir} exists and is not a directory", file=sys.stderr)
            return EXIT_CONFIG
        out_dir.mkdir(parents=True, exist_ok=True)
        for grid in experiments.run_wigner(cfg):
            (out_dir / grid.filename).write_text(grid.table.to_csv(cfg, "wigner"))
        return EXIT_OK

    try:
        table = _RUNNERS[args.command](cfg)
    except SteadyStateError as exc:
        print(f"ptesd {args.command}: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    try:
        _write(table.to_csv(cfg, args.command), args.out)
    except OSError as exc:
        print(f"ptesd {args.command}: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if table.diverged:
        print(f"ptesd {args.command}: numerical divergence (broken PT phase?)", file=sys.stderr)
        return EXIT_DIVERGED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

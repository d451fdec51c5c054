"""Command line entry point: ``cfmimo <scenario> [options]``."""

from __future__ import annotations

import argparse
import logging
import sys

from cfmimo.config import NetworkConfig, load_config
from cfmimo.xprun import SCENARIOS, ExperimentSpec, parse_grid, run, to_csv


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cfmimo", description="Cell-free massive MIMO clustering/scheduling experiments")
    ap.add_argument("scenario", choices=SCENARIOS)
    ap.add_argument("--config", help="key = value file with NetworkConfig fields")
    ap.add_argument("--seed", type=int, help="master seed (overrides the config)")
    ap.add_argument("--snr", default="-10:5:30", help="SNR grid in dB, min:step:max or a comma list")
    ap.add_argument("--realizations", type=int, default=100)
    ap.add_argument("--out", help="CSV output path (default: stdout)")
    ap.add_argument("--clustering", choices=("lsf", "bsr", "none"),
                    help="run only this network (none = CF); default runs CF, LSF and BSR")
    ap.add_argument("--scheduler", choices=("gr", "fgr", "none"), help="scheduler (default: none; fgr for 'schedule')")
    ap.add_argument("--symbols", type=int, default=500, help="QPSK symbols per UE per realization (ber)")
    ap.add_argument("--lgrid", default="1:1:25", help="AP counts for the complexity sweep")
    ap.add_argument("--fixed-geometry", action=argparse.BooleanOptionalAction, default=None,
                    help="keep AP/UE positions fixed across realizations (default: only for fairness)")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def _join_grid_values(argv):
    # "--snr -10:5:30" would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for tok in it:
        if tok in ("--snr", "--lgrid"):
            value = next(it, None)
            out.append(tok if value is None else f"{tok}={value}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(_join_grid_values(argv))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_config(args.config) if args.config else NetworkConfig()
        if args.seed is not None:
            config = config.replace(seed=args.seed)
        scheduler = args.scheduler or ("fgr" if args.scenario == "schedule" else "none")
        spec = ExperimentSpec(
            scenario=args.scenario,
            config=config,
            snr_grid_db=parse_grid(args.snr),
            realizations=args.realizations,
            out_path=args.out,
            clustering=args.clustering,
            scheduler=scheduler,
            n_symbols=args.symbols,
            fixed_geometry=args.fixed_geometry,
            l_grid=[int(v) for v in parse_grid(args.lgrid)],
            workers=args.workers,
        )
    except (OSError, ValueError) as exc:
        print(f"cfmimo: error: {exc}", file=sys.stderr)
        return 2
    rows = run(spec)
    if not args.out:
        sys.stdout.write(to_csv(rows))
    return 0


if __name__ == "__main__":
    sys.exit(main())

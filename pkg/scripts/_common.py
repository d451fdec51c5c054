"""Shared argument handling for the experiment scripts."""

import argparse
import logging
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from cfmimo.config import NetworkConfig, load_config  # noqa: E402


def base_parser(description: str, realizations: int) -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(description=description)
    ap.add_argument("--config", help="key = value config file")
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--realizations", type=int, default=realizations)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", help="CSV path (stdout if omitted)")
    return ap


def network_config(args) -> NetworkConfig:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    cfg = load_config(args.config) if args.config else NetworkConfig()
    return cfg.replace(seed=args.seed)


def emit(rows, out):
    from cfmimo.xprun import to_csv

    if not out:
        sys.stdout.write(to_csv(rows))

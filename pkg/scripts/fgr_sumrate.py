"""Frame-averaged sum-rate with fair greedy scheduling (or plain greedy via --scheduler gr)."""

from _common import base_parser, emit, network_config

from cfmimo.xprun import ExperimentSpec, parse_grid, run

if __name__ == "__main__":
    ap = base_parser(__doc__, realizations=100)
    ap.add_argument("--snr", default="-10:5:30")
    ap.add_argument("--scheduler", choices=["gr", "fgr"], default="fgr")
    args = ap.parse_args()
    spec = ExperimentSpec("schedule", network_config(args), parse_grid(args.snr), realizations=args.realizations,
                          scheduler=args.scheduler, out_path=args.out, workers=args.workers)
    emit(run(spec), args.out)

"""Per-UE selection counts of Gr and F-Gr over realizations on a fixed layout."""

from _common import base_parser, emit, network_config

from cfmimo.xprun import ExperimentSpec, run

if __name__ == "__main__":
    ap = base_parser(__doc__, realizations=100)
    ap.add_argument("--snr", type=float, default=20.0)
    ap.add_argument("--clustering", choices=["lsf", "bsr", "none"], default="none")
    args = ap.parse_args()
    cfg = network_config(args).with_snr(args.snr)
    spec = ExperimentSpec("fairness", cfg, realizations=args.realizations,
                          clustering=args.clustering, out_path=args.out, workers=args.workers)
    rows = run(spec)
    emit(rows, args.out)
    zero = sum(r["gr_count"] == 0 for r in rows)
    print(f"# Gr never served {zero} of {len(rows)} UEs", flush=True)

"""Mean sum-rate of CF, LSF-UCCF and BSR-UCCF against SNR, without scheduling."""

from _common import base_parser, emit, network_config

from cfmimo.xprun import ExperimentSpec, parse_grid, run

if __name__ == "__main__":
    ap = base_parser(__doc__, realizations=100)
    ap.add_argument("--snr", default="-10:5:30")
    args = ap.parse_args()
    spec = ExperimentSpec("sumrate", network_config(args), parse_grid(args.snr),
                          realizations=args.realizations, out_path=args.out, workers=args.workers)
    emit(run(spec), args.out)

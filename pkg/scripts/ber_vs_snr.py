"""QPSK bit-error rate of the three networks against SNR."""

from _common import base_parser, emit, network_config

from cfmimo.xprun import ExperimentSpec, parse_grid, run

if __name__ == "__main__":
    ap = base_parser(__doc__, realizations=200)
    ap.add_argument("--snr", default="-10:5:30")
    ap.add_argument("--symbols", type=int, default=25)
    args = ap.parse_args()
    spec = ExperimentSpec("ber", network_config(args), parse_grid(args.snr), realizations=args.realizations,
                          n_symbols=args.symbols, out_path=args.out, workers=args.workers)
    emit(run(spec), args.out)

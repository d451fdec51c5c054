"""FLOP and signaling counts against the number of APs."""

from _common import base_parser, emit, network_config

from cfmimo.xprun import ExperimentSpec, parse_grid, run

if __name__ == "__main__":
    ap = base_parser(__doc__, realizations=1)
    ap.add_argument("--lgrid", default="1:1:25")
    args = ap.parse_args()
    spec = ExperimentSpec("complexity", network_config(args), l_grid=parse_grid(args.lgrid),
                          realizations=args.realizations, out_path=args.out)
    emit(run(spec), args.out)

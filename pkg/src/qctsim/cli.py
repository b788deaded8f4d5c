"""Command-line front-end: ``qctsim sweep | demo-entanglement | certify-decompositions``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import reports

log = logging.getLogger("qctsim")


def _load_config_file(path):
    """Flat JSON object mirroring :class:`~qctsim.reports.SweepConfig`."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict) or any(isinstance(v, dict) for v in data.values()):
        raise reports.ConfigError("config file must be a flat JSON object")
    return data


def _add_output_flags(p):
    p.add_argument("--out", default=None, help="output path ('-' for stdout)")
    p.add_argument("--format", choices=reports.FORMATS, default=None)
    p.add_argument("--tolerance", type=float, default=None)


def build_parser():
    parser = argparse.ArgumentParser(prog="qctsim", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a transparency sweep")
    sweep.add_argument("--config", help="flat JSON config file; flags override its values")
    sweep.add_argument("--dims", help="comma-separated system dimensions, subset of 2,3,4,5")
    sweep.add_argument("--seeds", type=int, help="seeds per case")
    sweep.add_argument("--system-noise", help="comma-separated system noise kinds")
    sweep.add_argument("--ancilla-noise", help="comma-separated ancilla noise kinds")
    sweep.add_argument("--variant", help="comma-separated correction variants")
    sweep.add_argument("--ab-order", help="comma-separated ancilla orders (AB, BA)")
    sweep.add_argument("--jobs", type=int, help="worker processes")
    _add_output_flags(sweep)

    demo = sub.add_parser("demo-entanglement", help="Bell-pair protection demo")
    demo.add_argument("--p", type=float, nargs="+", default=[0.25, 0.5, 1.0],
                      help="depolarizing strengths")
    demo.add_argument("--seed", type=int, default=0)
    demo.add_argument("--ancilla-noise", default="identity")
    demo.add_argument("--variant", default="eq3_unitary")
    demo.add_argument("--ab-order", default="AB")
    _add_output_flags(demo)

    certs = sub.add_parser("certify-decompositions", help="check the gate decompositions")
    _add_output_flags(certs)
    return parser


def _emit(report, args):
    fmt = args.format or "json"
    text = reports.write_report(report, args.out or "-", fmt)
    if not args.out or args.out == "-":
        sys.stdout.write(text)


def cmd_sweep(args):
    values = _load_config_file(args.config) if args.config else {}
    overrides = {
        "d_list": args.dims,
        "seeds_per_case": args.seeds,
        "system_noise_kinds": args.system_noise,
        "ancilla_noise_kinds": args.ancilla_noise,
        "v_variants": args.variant,
        "ab_orders": args.ab_order,
        "tolerance": args.tolerance,
        "output_path": args.out,
        "output_format": args.format,
        "jobs": args.jobs,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    config = reports.SweepConfig.from_mapping(values)
    report = reports.run_transparency_sweep(config)
    args.out, args.format = config.output_path, config.output_format
    _emit(report, args)
    s = report["summary"]
    log.info("pass=%d fail=%d control=%d", s["pass_count"], s["fail_count"], s["control_count"])
    return reports.exit_status(report)


def cmd_demo(args):
    report = reports.run_entanglement_demos(
        args.p, seed=args.seed, ancilla_noise=args.ancilla_noise, variant=args.variant,
        ab_order=args.ab_order, tolerance=args.tolerance or reports.ATOL,
    )
    _emit(report, args)
    return reports.exit_status(report)


def cmd_certs(args):
    report = reports.run_decomposition_certs(args.tolerance or reports.ATOL)
    _emit(report, args)
    return reports.exit_status(report)


COMMANDS = {"sweep": cmd_sweep, "demo-entanglement": cmd_demo, "certify-decompositions": cmd_certs}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except (reports.ConfigError, ValueError, OSError) as exc:
        print(f"qctsim: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: one figure per invocation.

Exit codes: 0 success, 2 schema or configuration error, 4 output failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import AxisOptions, FigureSpec, render
from .schemas import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quasiplot",
        description="Render figures from quasispec CSV/JSON artifacts",
    )
    sub = parser.add_subparsers(dest="kind", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", required=True, help="output image path (.png/.svg/...)")
        p.add_argument("--title", default=None)
        p.add_argument("--xlim", type=float, nargs=2, default=None, metavar=("LO", "HI"))
        p.add_argument("--ylim", type=float, nargs=2, default=None, metavar=("LO", "HI"))

    p_decay = sub.add_parser("decay", help="log-log trace with the fitted slope overlaid")
    p_decay.add_argument("--trace", default="trace.csv", help="trace CSV (xi,re,im,abs)")
    p_decay.add_argument("--fit", default="fit.json", help="fit JSON (epsilon, intercept, ...)")
    common(p_decay)

    p_amp = sub.add_parser("amplitude", help="log-log phase-averaged amplitude")
    p_amp.add_argument("--series", default="amplitude.csv", help="amplitude CSV (t,re,im,abs)")
    common(p_amp)

    p_dos = sub.add_parser("dos", help="bar chart of density-of-states atoms")
    p_dos.add_argument("--measure", default="dos.csv", help="measure CSV (position,weight)")
    common(p_dos)
    return parser


def _spec_from_args(args: argparse.Namespace) -> FigureSpec:
    if args.kind == "decay":
        inputs = {"trace": Path(args.trace), "fit": Path(args.fit)}
    elif args.kind == "amplitude":
        inputs = {"series": Path(args.series)}
    else:
        inputs = {"measure": Path(args.measure)}
    options = AxisOptions(
        title=args.title,
        xlim=tuple(args.xlim) if args.xlim else None,
        ylim=tuple(args.ylim) if args.ylim else None,
    )
    return FigureSpec(kind=args.kind, inputs=inputs, output=Path(args.out), axes=options)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = render(_spec_from_args(args))
    except SchemaError as err:
        print(f"quasiplot: schema error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"quasiplot: output error: {err}", file=sys.stderr)
        return 4
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""kfsplot: one figure per invocation from simulator output files."""

import argparse
import sys

from .figures import plot_heatmap, plot_lines, plot_wigner_panels
from .reader import SchemaError


def build_parser():
    parser = argparse.ArgumentParser(prog="kfsplot",
                                     description="Render kfs output files as figures.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("panels", help="phase-space panels from field CSVs")
    p.add_argument("fields", nargs="+", help="field files (x,p,w)")
    p.add_argument("--out", required=True, help="output image (.png or .svg)")
    p.add_argument("--titles", nargs="*", help="panel titles")
    p.set_defaults(run=lambda a: plot_wigner_panels(a.fields, a.out, a.titles))

    p = sub.add_parser("heatmap", help="2D metric map from a sweep CSV")
    p.add_argument("sweep")
    p.add_argument("--x", required=True, help="column for the x axis")
    p.add_argument("--y", required=True, help="column for the y axis")
    p.add_argument("--metric", default="negativity")
    p.add_argument("--out", required=True)
    p.set_defaults(run=lambda a: plot_heatmap(a.sweep, a.x, a.y, a.metric, a.out))

    p = sub.add_parser("lines", help="metric against one axis from a sweep CSV")
    p.add_argument("sweep")
    p.add_argument("--x", required=True)
    p.add_argument("--metric", default="negativity")
    p.add_argument("--group-by", dest="group_by")
    p.add_argument("--out", required=True)
    p.set_defaults(run=lambda a: plot_lines(a.sweep, a.x, a.metric, a.out, a.group_by))

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        info = args.run(args)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(info["out"])
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""qspf-figures: render a runtime-scaling figure from a benchmark CSV."""

from __future__ import annotations

import argparse
import json
import sys

from .core import FiguresError, render_scaling_figure


def parse_fit_window(text: str | None):
    if text is None:
        return None, None
    try:
        lo_s, hi_s = text.split(":", 1)
        lo = float(lo_s) if lo_s else None
        hi = float(hi_s) if hi_s else None
        return lo, hi
    except ValueError:
        raise FiguresError(f"--fit expects LO:HI (either side optional), got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qspf-figures",
        description="log-log runtime plot with fitted slopes from a schema-1 CSV",
    )
    ap.add_argument("--input", required=True, help="benchmark CSV")
    ap.add_argument("--output", required=True, help="figure path (.png/.svg/.pdf)")
    ap.add_argument("--methods", default="ffpi",
                    help="comma list of methods to plot (default: ffpi)")
    ap.add_argument("--fit", default=None,
                    help="restrict the slope fit to degrees LO:HI")
    ap.add_argument("--title", default=None)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    try:
        if not methods:
            raise FiguresError("--methods must name at least one method")
        lo, hi = parse_fit_window(args.fit)
        payload = render_scaling_figure(
            args.input, args.output, methods, lo, hi, args.title
        )
    except FiguresError as exc:
        print(f"qspf-figures: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"qspf-figures: {exc}", file=sys.stderr)
        return 1
    print(json.dumps({"output": args.output, "slopes": payload["slopes"]}))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

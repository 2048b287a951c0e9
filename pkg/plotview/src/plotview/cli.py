"""plotview <kind> --in PATH [--in2 PATH] --out PATH"""

import argparse
import sys

from .render import KINDS, SchemaMismatch, render


def main(argv=None) -> int:
    p = argparse.ArgumentParser(prog="plotview",
                                description="Render eulerspin CSVs to PNG")
    p.add_argument("kind", choices=sorted(KINDS))
    p.add_argument("--in", dest="input", required=True, help="input CSV")
    p.add_argument("--in2", dest="input2", help="optional second CSV overlay")
    p.add_argument("--out", required=True, help="output image path")
    args = p.parse_args(argv)
    try:
        render(args.kind, args.input, args.out, args.input2)
    except (SchemaMismatch, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

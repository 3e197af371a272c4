#!/usr/bin/env python3
"""Generate the shipped reduction tables in src/pochsum/data/.

Each table reduces every convergent cyclotomic-polylogarithm word of the
class to the constant basis via shuffle relations plus PSLQ-seeded values;
every entry is re-verified numerically before the table is written.

Usage: python scripts/generate_tables.py [class ...]   (default: all)
"""

import argparse
import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from pochsum.reduction import (  # noqa: E402
    CLASS_CONFIGS,
    build_relation_table,
    save_table,
    verify_table,
)

DATA_DIR = pathlib.Path(__file__).resolve().parent.parent / "src" / "pochsum" / "data"

# per-class PSLQ working precision; higher weights need more headroom
BUILD_DPS = {"1-2": 160, "1-3": 160, "1-2-4": 120, "1-5": 180}


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("names", nargs="*", default=list(CLASS_CONFIGS))
    ap.add_argument("--verify-dps", type=int, default=40)
    args = ap.parse_args()
    names = args.names or list(CLASS_CONFIGS)
    for name in names:
        cfg = CLASS_CONFIGS[name]
        dps = BUILD_DPS.get(name, 110)
        print(f"=== class {name}: weights <= {cfg.max_weight}, dps {dps}")
        t0 = time.time()
        table = build_relation_table(cfg, dps=dps, verbose=True)
        print(f"built {len(table.entries)} entries in {time.time() - t0:.0f}s")
        n = verify_table(table, dps=args.verify_dps)
        print(f"verified {n} entries at {args.verify_dps} digits")
        out = DATA_DIR / f"table_{name}.txt"
        save_table(table, str(out))
        print(f"wrote {out}")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Generate src/pochsum/data/constants_cache.txt.

Caches the expensive basis constants: the h-constants (cyclotomic
polylogarithm values at 1, defined in pochsum.reduction.PRIMITIVE_WORDS and
the shipped table headers) and the s-constants (alternating Euler sums).
Cheap constants (pi, logs, zetas, polylogs at 1/2) are always computed
directly and are not cached.

Usage: python scripts/generate_constants_cache.py [--digits N]
"""

import argparse
import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from mpmath import mp  # noqa: E402

DATA_DIR = pathlib.Path(__file__).resolve().parent.parent / "src" / "pochsum" / "data"

S_INDICES = {
    "s1": (-5, -1),
    "s2": (5, -1, -1),
    "s3": (-5, 1, 1),
    "s4": (5, 3),
    "s5": (-7, -1),
    "s6": (-5, -1, -1, -1),
    "s7": (-5, -1, 1, 1),
}


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--digits", type=int, default=130)
    args = ap.parse_args()
    dps = args.digits

    from pochsum.cpl import value_at_one_fast
    from pochsum.numerics import euler_sum_value
    from pochsum.reduction import PRIMITIVE_WORDS, load_shipped_table

    # loading the shipped tables registers table-defined primitives (h7, ...)
    for path in sorted(DATA_DIR.glob("table_*.txt")):
        load_shipped_table(path.stem[len("table_"):])

    lines = ["# name digits value"]
    with mp.workdps(dps + 15):
        for name in sorted(PRIMITIVE_WORDS, key=lambda n: (len(n), n)):
            word = PRIMITIVE_WORDS[name]
            t0 = time.time()
            v = value_at_one_fast(word, dps + 10)
            lines.append(f"{name} {dps} {mp.nstr(v, dps, strip_zeros=False)}")
            print(f"{name} ({word}): {time.time() - t0:.1f}s")
        for name, indices in sorted(S_INDICES.items()):
            t0 = time.time()
            bf = euler_sum_value(indices, dps + 10)
            if bf.certified_digits < dps:
                raise SystemExit(
                    f"{name}: only {bf.certified_digits} certified digits"
                )
            lines.append(f"{name} {dps} {mp.nstr(bf.value, dps, strip_zeros=False)}")
            print(f"{name} {indices}: {time.time() - t0:.1f}s")

    out = DATA_DIR / "constants_cache.txt"
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()

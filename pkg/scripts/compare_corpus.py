#!/usr/bin/env python3
"""Large seeded comparison run: decision engine vs point-search oracle.

Usage: python scripts/compare_corpus.py [seed] [count] [p1,p2,...]
Defaults reproduce the acceptance configuration (42, 200, 7,11,13,17).
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from clustersol.cli import RunConfig, cmd_compare


def main(argv):
    seed = int(argv[1]) if len(argv) > 1 else 42
    count = int(argv[2]) if len(argv) > 2 else 200
    p_list = tuple(int(x) for x in argv[3].split(",")) if len(argv) > 3 \
        else (7, 11, 13, 17)
    cfg = RunConfig(command="compare", seed=seed, count=count, p_list=p_list)
    return cmd_compare(cfg)


if __name__ == "__main__":
    sys.exit(main(sys.argv))

"""
The command-line interface
==========================

Every capability is also reachable from the ``lagmesh`` console script.
Reports are deterministic (same request, same bytes) and carry a config
hash, so runs can be diffed.  This script drives the CLI in-process; in
a shell the same calls read, e.g.::

    lagmesh bound --potential harmonic --l 0 --N 20 --h 0.09 --format csv
    lagmesh reproduce --table 2 --check
"""

import sys

from lagmesh.cli import main

sys.stdout.reconfigure(line_buffering=True)  # keep stdout/stderr in order

CALLS = (
    ["bound", "--potential", "harmonic", "--l", "0",
     "--N", "20", "--h", "0.09", "--format", "csv"],
    ["scatter", "--potential", "eckart", "--l", "0", "--variant", "reg-sqrt",
     "--N", "15", "--h", "0.1", "--gamma", "4", "--format", "csv"],
    ["sweep", "--parameter", "h", "--values", "0.3,0.5,0.9",
     "--potential", "coulomb", "--l", "0", "--N", "10", "--h", "0.9",
     "--format", "csv"],
    ["reproduce", "--table", "2", "--format", "csv"],
    ["reproduce", "--table", "4", "--check"],
)

for argv in CALLS:
    print(f"\n$ lagmesh {' '.join(argv)}")
    code = main(argv)
    print(f"[exit {code}]")

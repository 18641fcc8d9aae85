"""Regenerate the figure datasets (temperature sweeps, quench-length curves, QCR maps).

Usage: python3 scripts/run_figures.py [--out data] [--workers N] [--only fig2,fig3,fig4]
"""

import argparse
import sys
from pathlib import Path

from xyqcr.cli import main as xy_qcr


def jobs(out):
    return {
        "fig2": [["sweep-temperature", "--h0", "0.2,0.5,0.8,0.95", "--temperatures", "0:0.1:21",
                  "-o", str(out / "fig2_sweep.csv")],
                 ["sweep-temperature", "--h0", "0.2,0.5,0.8,0.95", "--temperatures", "0:2:41",
                  "-o", str(out / "fig2_inset.csv")]],
        "fig3": [["quench-length", "--pairs", "0.2->0.3,0.2->2,0.95->0.3,0.95->2", "--temperatures", "0:0.1:21",
                  "-o", str(out / "fig3_quench_length.csv")]],
        "fig4": [["map-qcr", "--h0", "0.5:1.5:41", "-o", str(out / "qcr_ising")],
                 ["map-qcr", "--h0", "0.5:1.5:41", "--multicritical", "-o", str(out / "qcr_multicritical")]],
    }


def run(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="data")
    ap.add_argument("--workers", default="0")
    ap.add_argument("--only", default="fig2,fig3,fig4")
    args = ap.parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    table = jobs(out)
    for name in args.only.split(","):
        for cmd in table[name]:
            print("xy-qcr", " ".join(cmd), file=sys.stderr)
            code = xy_qcr(cmd + ["--workers", args.workers])
            if code:
                return code
    return 0


if __name__ == "__main__":
    sys.exit(run())

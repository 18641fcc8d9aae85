"""How the maximal responses depend on the time-search horizon t_max.

Prints max_t |dQ| for t_max in {10, 20, 40, 80} and the time at which the
coarse maximum is reached.
"""

import argparse
import warnings

import numpy as np

from xyqcr.detector import Quantity, QuenchResponse, TimeSearchConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--h0", default="0.2,0.5,0.95")
    ap.add_argument("--T", type=float, default=0.0)
    ap.add_argument("--nodes", type=int, default=2048)
    args = ap.parse_args()
    warnings.simplefilter("ignore", RuntimeWarning)
    print("h0,quantity,t_max,argmax_t,max_response")
    for h0 in (float(x) for x in args.h0.split(",")):
        for q in Quantity:
            for t_max in (10.0, 20.0, 40.0, 80.0):
                r = QuenchResponse(h0, 1.0, 0.8, TimeSearchConfig(t_max=t_max), args.nodes)
                k = int(np.argmax(r.curve(q, args.T)))
                print(f"{h0},{q.value},{t_max},{r.times[k]:.3f},{r.max_response(q, args.T)!r}")


if __name__ == "__main__":
    main()

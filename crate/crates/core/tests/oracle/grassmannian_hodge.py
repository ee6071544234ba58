"""Euler characteristics of the exterior powers of the cotangent bundle
R (x) Q* of Gr(b, a): chi = (-1)^t h^{t,t}, with h^{t,t} the number of
partitions of t inside a b x (a - b) box.

Usage: python3 grassmannian_hodge.py > ../golden/grassmannian_hodge.json
"""

import json
import sys
from functools import lru_cache


@lru_cache(maxsize=None)
def box_count(t, rows, cols):
    # partitions of t with at most `rows` parts, each at most `cols`
    if t == 0:
        return 1
    if rows == 0 or cols == 0:
        return 0
    return sum(box_count(t - k, rows - 1, k) for k in range(1, min(cols, t) + 1))


def main():
    top = int(sys.argv[1]) if len(sys.argv) > 1 else 6
    rows = []
    for a in range(1, top + 1):
        for b in range(0, a + 1):
            c = a - b
            for t in range(0, b * c + 1):
                rows.append({"beta": b, "gamma": c, "t": t, "euler": (-1) ** t * box_count(t, b, c)})
    json.dump({"max_alpha": top, "rows": rows}, sys.stdout, indent=1)
    print()


if __name__ == "__main__":
    main()

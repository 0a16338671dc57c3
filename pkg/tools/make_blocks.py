"""Generate the block library asset from first-principles glider data.

Everything is cut from one Rule 110 simulation so every seam is consistent
by construction: the run contains an A-glider cluster (the ossifier payload
of block B) far to the left, pure ether for blocks A and C, and a chain of
identically-phased left-moving period-30 gliders (the moving-data carriers;
every block seam of the central and right regions passes through one).
Block tiles are cut along two families of seam profiles: A-slope cuts
(period 3, +2 cells) through ether, and carrier-center cuts (period 30,
-8 cells).  Widths distinguish the block roles; see tools/gliders.json
for the discovered glider catalog this feeds on (seed patterns, phases and
anchor residues verified by replay).

Run:  python tools/make_blocks.py  (rewrites src/r110forge/data/blocks.txt)
"""

import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from r110forge.blocks import BitBlock, BlockLibrary, dumps_library, validate_block_library
from r110forge.engine import step_cells
from r110forge.ether import ether_row

HERE = Path(__file__).resolve().parent
GLIDERS = json.loads((HERE / "gliders.json").read_text())

EBAR = GLIDERS["30_-8_19"]   # clean period-30 left-mover: the seam carrier
A4 = GLIDERS["3_2_18"]       # tight right-moving cluster: the ossifier body

ROWS = 40                    # simulated depth (>= 30-step validation window)

# seam-to-seam widths of the carrier-lattice blocks, multiples of 14 so all
# carrier placements share one anchor residue; distinct per role
GAPS = {"D": 56, "E": 70, "F": 84, "G": 98, "H": 112, "I": 126, "J": 140,
        "K": 154, "L": 168}
ORDER = "DEFGHIJKL"
C_WIDTH = 84                # ether run between the junction cut and carrier 0
A_WIDTH = 14                 # one ether period
B_WIDTH = 42                 # ossifier tile, multiple of 14


def a_cut(x0, t):
    """A-slope seam profile: +2 cells every 3 rows."""
    return x0 + (2 * t) // 3


def place(row, g, phase, near_x):
    ph = g["phases"][phase % g["period"]]
    pat = np.array([int(c) for c in ph["bits"]], dtype=np.uint8)
    x = near_x + ((ph["anchor"] - near_x) % 14)
    row[x:x + len(pat)] = pat
    return x


def main():
    # one simulation: [ether | A4 | ether | junction | carriers... | ether]
    xa = 14 * 40              # phase-0 residue grid for all A-slope cuts
    xb = xa + A_WIDTH * 3
    xc = xb + B_WIDTH + A_WIDTH * 4
    car_x = [xc + C_WIDTH]
    for name in ORDER:
        car_x.append(car_x[-1] + GAPS[name])
    W = car_x[-1] + 14 * 60
    W += (-W) % 14

    row = ether_row(W, 0)
    place(row, A4, 0, xb + 12)
    # carriers all at phase 0; positions snap to the anchor residue, so place
    # by residue-aligned targets and recompute the true seam chain afterwards
    placed = [place(row, EBAR, 0, x) for x in car_x]

    rows = [row.copy()]
    cur = row
    for _ in range(ROWS):
        l = np.roll(cur, 1)
        r = np.roll(cur, -1)
        cur = ((cur | r) & ~(l & cur & r)).astype(np.uint8)
        rows.append(cur.copy())

    # carrier seam profiles: center of each support component per row
    def carrier_seams(t):
        m = np.nonzero(rows[t] != ether_row(W, t))[0]
        comps = []
        cur_c = [m[0]]
        for x in m[1:]:
            if x - cur_c[-1] > 16:
                comps.append(cur_c)
                cur_c = [x]
            else:
                cur_c.append(x)
        comps.append(cur_c)
        # first component is the A cluster; the rest are carriers
        return [int((c[0] + c[-1]) // 2) for c in comps[1:]]

    seams = [carrier_seams(t) for t in range(ROWS + 1)]
    n_car = len(placed)
    assert all(len(s) == n_car for s in seams), "carrier supports merged"

    def bits(t, lo, hi):
        return "".join(str(int(b)) for b in rows[t][lo:hi])

    blocks = {}
    # A: one ether period between A-slope cuts
    blocks["A"] = BitBlock("A", 3, tuple(
        (a_cut(xa, t), bits(t, a_cut(xa, t), a_cut(xa, t) + A_WIDTH))
        for t in range(3)), delta=0, wrap=2, left_mod=3, right_mod=3)
    # B: the ossifier tile
    blocks["B"] = BitBlock("B", 3, tuple(
        (a_cut(xb, t), bits(t, a_cut(xb, t), a_cut(xb, t) + B_WIDTH))
        for t in range(3)), delta=0, wrap=2, left_mod=3, right_mod=3)
    # C: aperiodic junction from an A-slope cut to carrier 0's center cut
    blocks["C"] = BitBlock("C", 0, tuple(
        (a_cut(xc, t), bits(t, a_cut(xc, t), seams[t][0]))
        for t in range(ROWS - 8)), delta=0, wrap=0, left_mod=3, right_mod=30,
        t0row=0)
    # carrier-lattice blocks between consecutive carrier center cuts
    for i, name in enumerate(ORDER):
        blocks[name] = BitBlock(name, 30, tuple(
            (seams[t][i], bits(t, seams[t][i], seams[t][i + 1]))
            for t in range(30)), delta=0, wrap=-8, left_mod=30, right_mod=30)

    lib = BlockLibrary(blocks)
    issues = validate_block_library(lib)
    for issue in issues:
        print("ISSUE:", issue)
    if issues:
        sys.exit(1)
    out = Path(__file__).resolve().parent.parent / "src/r110forge/data/blocks.txt"
    out.write_text(dumps_library(lib))
    print(f"wrote {out} ({sum(b.n_rows for b in blocks.values())} rows)")


if __name__ == "__main__":
    main()

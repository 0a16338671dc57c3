"""The Rule 110 ether background and glider-frame arithmetic.

The ether is the spatially period-14 background every glider of the
construction travels on.  Its evolution is a pure shift: each step the
pattern moves four cells to the left, so E(t, x) = W[(x + 4t) mod 14] for
the base word W.  Useful consequences: after 7 steps the background repeats
in place, after 3 steps it sits 2 cells right (the A-glider frame), and
after 30 steps it sits 8 cells left (the frame of the moving-data gliders
whose blocks repeat every 30 rows).
"""

from __future__ import annotations

import numpy as np

ETHER_WORD = "00010011011111"
ETHER_PERIOD = 14
ETHER_SHIFT = -4  # cells per step (pattern moves left 4)

_EW = np.array([int(c) for c in ETHER_WORD], dtype=np.uint8)


def ether_cell(x, t):
    """Ether value at absolute cell x and time t (phase-0 convention)."""
    return int(_EW[(x + 4 * t) % ETHER_PERIOD])


def ether_row(width, t=0, offset=0):
    """Width cells of ether at time t, starting at absolute cell ``offset``."""
    reps = width // ETHER_PERIOD + 2
    base = np.tile(_EW, reps)
    start = (offset + 4 * t) % ETHER_PERIOD
    return base[start:start + width].copy()


def is_ether_aligned(period, disp):
    """True when a (period, displacement) glider frame preserves the ether."""
    return (disp + 4 * period) % ETHER_PERIOD == 0

"""Assemble a Rule 110 initial state from a cyclic tag system.

The three regions of the state come from three block strings:

* center: C on the front, then ED for every N of the tape and FD for every
  Y, with the very last D changed to G;
* right: per appendant, Y -> II and N -> IJ with the first block of the
  appendant replaced by KH (an empty appendant becomes a single L), then the
  leading K of the first appendant moved to the very end -- the result is
  the spatial period of the right side;
* left: the cyclic sequence [A]^v B [A]^13 B [A]^11 B [A]^12 B walked
  leftward from C, where v grows with the total weight of the appendants so
  that ossifiers stay clear of table data.

Walking a block string keeps track of the phase of the zig-zag at every
crossing; a side word is complete when the phase at the period boundary
recurs, which the pigeonhole bound caps at the number of distinct phases.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from r110forge.blocks import BLOCK_IDS, CorruptLibrary
from r110forge.engine import Rule110State


class AssemblyError(ValueError):
    pass


class Unsupported(AssemblyError):
    """Input the block grammar has no encoding for."""


def center_block_string(tape):
    """C + (ED per N, FD per Y) with the final D turned into G."""
    if not tape:
        raise AssemblyError("cannot encode an empty tape")
    parts = ["ED" if c == "N" else "FD" for c in tape]
    body = "".join(parts)
    assert body.endswith("D")
    return "C" + body[:-1] + "G"


def right_block_string(system):
    """Appendants encoded as component blocks; the spatial period of the right side."""
    if not system.appendants[0]:
        raise Unsupported("first appendant must be non-empty "
                          "(no prepared-short-leader block exists)")
    chunks = []
    for app in system.appendants:
        if not app:
            chunks.append("L")
            continue
        enc = "".join("II" if c == "Y" else "IJ" for c in app)
        chunks.append("KH" + enc[1:])
    body = "".join(chunks)
    return body[1:] + body[0]  # move the leading K of the first appendant to the end


def compute_v(system):
    """Ossifier spacing parameter of the periodic left side."""
    ys = sum(app.count("Y") for app in system.appendants)
    ns = sum(app.count("N") for app in system.appendants)
    nonempty = sum(1 for app in system.appendants if app)
    empty = sum(1 for app in system.appendants if not app)
    return 76 * ys + 80 * ns + 60 * nonempty + 43 * empty


def left_block_sequence(v):
    """One period of the left side, ordered leftward from the center."""
    seq = ["B"] + ["A"] * 12 + ["B"] + ["A"] * 11 + ["B"] + ["A"] * 13 + ["B"] + ["A"] * v
    return tuple(seq)


@dataclass
class Placement:
    """Where each center block landed, for evolution-consistency checks."""

    block: str
    phase: int
    x: int  # absolute cell of the block row's first bit


@dataclass
class AssemblyReport:
    state: object
    placements: list       # center block placements
    left_placements: list  # one traversal, nearest to the center
    right_placements: list
    left_traversals: int
    right_traversals: int
    v: int
    center_blocks: str
    right_blocks: str


def _advance(lib, name, phase):
    """bits contributed and the exit phase when entering ``name`` at ``phase``."""
    b = lib[name]
    if b.period:
        phase %= b.period
        row = phase
    else:
        row = b.t0row
        phase = b.t0row
    off, bits = b.rows[row]
    return bits, (row + b.delta) % b.right_mod, row


def assemble_state(system, tape, lib, require_mod6=True):
    """Build the Rule110State for a cyclic tag system and tape.

    Appendant lengths must be multiples of six (normalize first) and the
    first appendant non-empty.  Returns the state; use ``assemble_report``
    for placements and traversal counts.
    """
    return assemble_report(system, tape, lib, require_mod6).state


def assemble_report(system, tape, lib, require_mod6=True):
    if require_mod6 and any(len(a) % 6 for a in system.appendants):
        raise AssemblyError("appendant lengths must be multiples of 6 "
                            "(run the mod-6 normalization first)")
    if not system.appendants[0]:
        raise Unsupported("first appendant must be non-empty")

    center_ids = center_block_string(tape)
    right_ids = right_block_string(system)
    v = compute_v(system)

    # center: left-to-right from C's designated t0 row
    c = lib["C"]
    placements = []
    bits = []
    x = 0
    phase = c.t0row
    for name in center_ids:
        b = lib[name]
        row = phase % b.period if b.period else b.t0row
        placements.append(Placement(name, row, x))
        rb = b.rows[row][1]
        bits.append(rb)
        x += len(rb)
        phase = (row + b.delta) % b.right_mod
    center = "".join(bits)

    # right side: repeat the block string until the entry phase recurs
    right_bits = []
    right_placements = []
    start_phase = phase
    p = phase
    traversals = 0
    while True:
        for name in right_ids:
            b = lib[name]
            row = p % b.period
            if traversals == 0:
                right_placements.append(Placement(name, row, x))
            rb = b.rows[row][1]
            right_bits.append(rb)
            x += len(rb)
            p = (row + b.delta) % b.right_mod
        traversals += 1
        if p == start_phase or traversals >= 30:
            break
    if p != start_phase:
        raise CorruptLibrary("right side phase never recurred (bad deltas)")
    right_word = "".join(right_bits)

    # left side: walk leftward from C; entering a block from the right at
    # phase q uses row (q - delta) mod period and exits left at that row
    lq = c.t0row % 3  # C's left seam lives on the 3-lattice
    seq = left_block_sequence(v)
    left_chunks = []
    left_placements = []
    lx = 0
    lt = 0
    start_lq = lq
    while True:
        for name in seq:
            b = lib[name]
            row = (lq - b.delta) % b.period
            rb = b.rows[row][1]
            left_chunks.append(rb)
            lx -= len(rb)
            if lt == 0:
                left_placements.append(Placement(name, row, lx))
            lq = row
        lt += 1
        if lq == start_lq or lt >= 3:
            break
    if lq != start_lq:
        raise CorruptLibrary("left side phase never recurred (bad deltas)")
    left_word = "".join(reversed(left_chunks))

    state = Rule110State(
        tuple(int(ch) for ch in left_word),
        tuple(int(ch) for ch in center),
        tuple(int(ch) for ch in right_word),
        origin=0,
    )
    return AssemblyReport(state, placements, left_placements, right_placements,
                          lt, traversals, v, center_ids, right_ids)


def check_evolution_consistency(report, lib, steps=30, guard=4, spec_margin=None):
    """Verify the assembled state's evolution against block-row predictions.

    For every recorded placement and every t <= steps, the evolved row must
    equal the block's row at the entry phase advanced t, at all positions at
    least t + guard away from the placement's seams (locality: row t depends
    on a radius-t neighborhood).  ``spec_margin``, when given, fixes the
    margin (e.g. 2 * steps) instead of the per-row bound.  Returns the
    number of (row, cell) comparisons made; raises AssemblyError on any
    mismatch.
    """
    from r110forge.engine import spacetime

    places = report.left_placements[-6:] + report.placements + report.right_placements
    x0 = min(pl.x for pl in places)
    x1 = max(pl.x + len(lib[pl.block].rows[pl.phase][1]) for pl in places)
    window = spacetime(report.state, steps, x0 - 2, x1 + 2)
    compared = 0
    for pl in places:
        b = lib[pl.block]
        off0, bits0 = b.row(pl.phase)
        w = len(bits0)
        for t in range(steps + 1):
            if not b.period and pl.phase + t >= b.n_rows:
                break
            off_t, bits_t = b.row(pl.phase + t)
            shift = off_t - off0
            margin = spec_margin if spec_margin is not None else t + guard
            lo = max(0, margin - shift)
            hi = min(len(bits_t), (w - margin) - shift)
            if hi <= lo:
                continue
            row = window.rows[t]
            for j in range(lo, hi):
                xabs = pl.x + shift + j
                got = int(row[xabs - window.origin])
                exp = int(bits_t[j])
                if got != exp:
                    raise AssemblyError(
                        f"evolution mismatch: block {pl.block} phase {pl.phase} "
                        f"row {t} cell {xabs}: predicted {exp}, evolved {got}")
                compared += 1
    return compared

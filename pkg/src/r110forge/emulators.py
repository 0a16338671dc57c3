"""The four small Turing machines that emulate Rule 110.

Each machine sweeps back and forth over an ever wider stretch of tape; every
rightward sweep computes one more row of Rule 110 activity.  The built-in
definitions carry the exact lookup tables and initial periodic tapes; the
verification harness replays a machine, decodes each rightward sweep into a
row of cells, and compares the rows against direct Rule 110 evolution of the
row the first sweep produced (which must itself be part of a valid
evolution, so any table corruption surfaces within a few rows).

Decoders: symbols map to bits by their written digit (0-ish symbols to 0,
1-ish to 1); the 4-state machine's B symbol is a boundary marker carrying no
cell; the 7-state machine computes the pattern on every second cell.  For
all machines except tm2x5 the rows drift one cell right per sweep; the
harness aligns rows by that drift before comparing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from r110forge.engine import step_cells
from r110forge.turing import (HALTED, LEFT, RIGHT, TuringMachine, TmConfiguration,
                              tm_step)

MACHINE_NAMES = ("tm2x5", "tm3x4", "tm4x3", "tm7x2")


def _machine(states, symbols, rows, state0, left, head, right):
    """rows[state][symbol] = None (unused) or (write, move, next) by name."""
    sidx = {s: i for i, s in enumerate(states)}
    yidx = {y: j for j, y in enumerate(symbols)}
    write, move, nxt = {}, {}, {}
    for sname, row in rows.items():
        for yname, tr in row.items():
            if tr is None:
                continue
            w, mv, ns = tr
            key = (sidx[sname], yidx[yname])
            write[key], move[key], nxt[key] = yidx[w], mv, sidx[ns]
    m = TuringMachine(len(states), len(symbols), write, move, nxt,
                      tuple(states), tuple(symbols))
    cfg = TmConfiguration(
        sidx[state0],
        tuple(yidx[y] for y in reversed(left)),   # innermost-first
        (),
        yidx[head],
        (),
        tuple(yidx[y] for y in right),
    )
    return m, cfg


def builtin_machine(name):
    """Return (TuringMachine, TmConfiguration) for one of the four machines."""
    if name == "tm2x5":
        # symbols: 0 1 00 11 n  (00/11 doubled forms, n = 'differs' marker)
        return _machine(
            ("S0", "S1"), ("0", "1", "00", "11", "n"),
            {
                "S0": {"0": ("00", LEFT, "S0"), "1": ("n", LEFT, "S1"),
                       "00": ("0", RIGHT, "S0"), "11": ("1", RIGHT, "S1"),
                       "n": ("1", RIGHT, "S0")},
                "S1": {"0": ("n", LEFT, "S0"), "1": ("11", LEFT, "S1"),
                       "00": None, "11": ("0", RIGHT, "S1"),
                       "n": ("1", RIGHT, "S0")},
            },
            "S0",
            ("00", "0", "1", "0"), "00", ("n", "1", "n", "1", "00", "00"))
    if name == "tm3x4":
        return _machine(
            ("Sx0", "S01", "S11"), ("0R", "1R", "0L", "1L"),
            {
                "Sx0": {"0R": ("0L", RIGHT, "Sx0"), "1R": ("1L", RIGHT, "S01"),
                        "0L": ("0R", LEFT, "Sx0"), "1L": ("1R", LEFT, "Sx0")},
                "S01": {"0R": ("1L", RIGHT, "Sx0"), "1R": ("1L", RIGHT, "S11"),
                        "0L": None, "1L": None},
                "S11": {"0R": ("1L", RIGHT, "Sx0"), "1R": ("0L", RIGHT, "S11"),
                        "0L": None, "1L": None},
            },
            "Sx0",
            ("0L", "1L", "0R"), "0L", ("0L", "1L", "1R", "0R", "0L"))
    if name == "tm4x3":
        return _machine(
            ("Sx0", "S01", "S11", "SB"), ("0", "1", "B"),
            {
                "Sx0": {"0": ("0", RIGHT, "Sx0"), "1": ("1", RIGHT, "S01"),
                        "B": ("0", LEFT, "SB")},
                "S01": {"0": ("1", RIGHT, "Sx0"), "1": ("1", RIGHT, "S11"),
                        "B": None},
                "S11": {"0": ("1", RIGHT, "Sx0"), "1": ("0", RIGHT, "S11"),
                        "B": None},
                "SB": {"0": ("0", LEFT, "SB"), "1": ("1", LEFT, "SB"),
                       "B": ("0", RIGHT, "Sx0")},
            },
            "Sx0",
            ("B", "0", "1"), "B", ("B", "1", "1", "1", "1", "1", "0", "B"))
    if name == "tm7x2":
        return _machine(
            ("Sx0", "S01", "S11", "SL", "Tx0", "T01", "T11"), ("0", "1"),
            {
                "Sx0": {"0": ("0", RIGHT, "Tx0"), "1": ("1", RIGHT, "T01")},
                "S01": {"0": ("1", RIGHT, "Tx0"), "1": ("1", RIGHT, "T11")},
                "S11": {"0": ("1", RIGHT, "Tx0"), "1": ("0", RIGHT, "T11")},
                "SL": {"0": ("0", LEFT, "Tx0"), "1": ("1", LEFT, "Tx0")},
                "Tx0": {"0": ("1", RIGHT, "Sx0"), "1": ("0", LEFT, "SL")},
                "T01": {"0": ("1", RIGHT, "S01"), "1": None},
                "T11": {"0": ("1", RIGHT, "S11"), "1": None},
            },
            "S11",
            ("1", "1", "0", "0", "1", "1"), "0",
            ("1", "0", "1", "1", "0", "1", "0", "0", "1", "0"))
    raise ValueError(f"unknown machine {name!r}")


# bit value of each written symbol, by machine; None = carries no cell
_BIT_OF = {
    "tm2x5": {"0": 0, "1": 1, "00": 0, "11": 1, "n": None},
    "tm3x4": {"0R": 0, "1R": 1, "0L": 0, "1L": 1},
    "tm4x3": {"0": 0, "1": 1, "B": None},
    "tm7x2": {"0": 0, "1": 1},
}
# cells decoded from every k-th tape position
_STRIDE = {"tm2x5": 1, "tm3x4": 1, "tm4x3": 1, "tm7x2": 2}
# horizontal drift of the decoded row per sweep, in tape positions
_DRIFT = {"tm2x5": 0, "tm3x4": 1, "tm4x3": 1, "tm7x2": 2}
# turnaround cells dropped from each end of a sweep before comparing
_TRIM = {"tm2x5": 2, "tm3x4": 2, "tm4x3": 2, "tm7x2": 2}


@dataclass
class SweepRow:
    sweep: int
    start: int   # head position of the first R move of the sweep
    bits: dict   # position -> 0/1 for cells written during the sweep


def collect_sweeps(name, n_sweeps, max_steps=10 ** 8):
    """Run a built-in machine and record the cells each rightward sweep writes.

    Uses a flat list tape (extended by whole periods on demand) rather than
    the immutable configuration type: these runs take millions of steps.
    """
    machine, cfg = builtin_machine(name)
    bit_of = {j: _BIT_OF[name][s] for j, s in enumerate(machine.symbol_names)}
    table = {}
    for (q, a), mv in machine.move.items():
        table[q, a] = (machine.write[q, a], 1 if mv == RIGHT else -1,
                       machine.next_state[q, a])
    lper = list(cfg.left_periodic)    # innermost-first
    rper = list(cfg.right_periodic)
    tape = [cfg.head] + list(cfg.right_finite) + rper
    origin = 0  # absolute position of tape[0]
    for _ in range(2):
        tape = lper[::-1] + tape
        origin -= len(lper)
    state = cfg.state
    pos = 0
    sweeps = []
    cur_bits = {}
    cur_start = None
    prev_right = False
    for _ in range(max_steps):
        i = pos - origin
        if i <= 0:
            tape[:0] = lper[::-1]
            origin -= len(lper)
            i = pos - origin
        elif i >= len(tape) - 1:
            tape.extend(rper)
        tr = table.get((state, tape[i]))
        if tr is None:
            break
        wr, dp, state = tr
        tape[i] = wr
        if dp == 1:
            if not prev_right:
                cur_bits, cur_start = {}, pos
            b = bit_of[wr]
            if b is not None:
                cur_bits[pos] = b
            prev_right = True
        else:
            if prev_right and cur_bits:
                sweeps.append(SweepRow(len(sweeps), cur_start, cur_bits))
                if len(sweeps) > n_sweeps:
                    break
            prev_right = False
        pos += dp
    return sweeps


@dataclass
class EtherReport:
    name: str
    rows_checked: int
    ok: bool
    first_mismatch: int = None
    detail: str = ""


def verify_ether(name, rows):
    """Replay a machine and check its sweeps against direct Rule 110 evolution.

    The first decoded sweep seeds the oracle; each later sweep k must equal
    the seed row evolved k - 1 steps (evolved with exact periodic context
    from the machine's own periodic tape, so the comparison is bit exact).
    """
    if rows < 1:
        raise ValueError("rows must be >= 1")
    stride, drift = _STRIDE[name], _DRIFT[name]
    period = 14  # the decoded background is 14-periodic in cell space

    trim = _TRIM[name]

    # tape position -> cell index, aligned per sweep, turnaround cells dropped
    def cells_of(sweep):
        ks = sorted(sweep.bits)
        out = {}
        for p in ks[trim:len(ks) - trim]:
            q = p - drift * sweep.sweep
            if q % stride == 0:
                out[q // stride] = sweep.bits[p]
        return out

    # seed from the first sweep wide enough that its light cone covers every
    # row we want to check; comparisons stay strictly inside the cone, so
    # the oracle never assumes anything beyond what the machine produced
    need = 2 * rows + 2 * period
    count = rows + 8
    while True:
        sweeps = collect_sweeps(name, count)
        k0 = next((i for i, s in enumerate(sweeps)
                   if len(cells_of(s)) >= need), None)
        if k0 is not None and len(sweeps) >= k0 + rows + 1:
            break
        if len(sweeps) < count:
            return EtherReport(name, 0, False, detail="machine produced too few sweeps")
        count *= 2
    rows_cells = [cells_of(s) for s in sweeps[k0:k0 + rows + 1]]

    seed = rows_cells[0]
    ks = sorted(seed)
    if ks != list(range(ks[0], ks[-1] + 1)):
        return EtherReport(name, 0, False, detail="seed sweep footprint has holes")
    cur = np.array([seed[q] for q in ks], dtype=np.uint8)
    lo = ks[0]
    checked = 0
    for k in range(1, rows + 1):
        cur = step_cells(cur, left=0, right=0)
        got = rows_cells[k]
        compared = 0
        for q, b in got.items():
            i = q - lo
            if not (k + 1 <= i < len(cur) - k - 1):
                continue
            if int(cur[i]) != int(b):
                return EtherReport(name, checked, False, first_mismatch=k,
                                   detail=f"sweep {k0 + k} cell {q}: tm={b} r110={int(cur[i])}")
            compared += 1
        if compared == 0:
            return EtherReport(name, checked, False, first_mismatch=k,
                               detail="light cone exhausted before requested rows")
        checked = k
    return EtherReport(name, checked, True)

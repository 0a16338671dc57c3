"""Turing machines over two-way infinite, eventually periodic tapes.

A configuration stores the tape as five pieces: a periodic word repeated
forever to the left, a finite left part, the head cell, a finite right part,
and a periodic word repeated forever to the right.  The finite parts are kept
innermost-first (index 0 is the cell adjacent to the head), so the visual
left-to-right tape reads ``...P P  reversed(left)  [head]  right  Q Q...``.
Periodic words unfold lazily into the finite parts one period at a time as
the head reaches them, which keeps configurations finite and comparisons
exact.

States and symbols are dense 0-based integer indices; name tables are kept
alongside for parsing and display only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

LEFT = "L"
RIGHT = "R"
HALT = "H"

_MOVES = (LEFT, RIGHT, HALT)


class Halted:
    """Sentinel returned by step functions when a machine halts."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "HALTED"


HALTED = Halted()


class MachineError(ValueError):
    """Malformed machine or configuration."""


@dataclass(frozen=True)
class TuringMachine:
    """Lookup tables of a single-tape Turing machine.

    ``write``/``next_state`` are defined exactly for the (state, symbol)
    pairs where ``move`` is not HALT.
    """

    n_states: int
    n_symbols: int
    write: dict
    move: dict
    next_state: dict
    state_names: tuple = ()
    symbol_names: tuple = ()

    def __post_init__(self):
        if self.n_states < 1 or self.n_symbols < 1:
            raise MachineError("need at least one state and one symbol")
        if not self.state_names:
            object.__setattr__(self, "state_names",
                               tuple(f"q{i}" for i in range(self.n_states)))
        if not self.symbol_names:
            object.__setattr__(self, "symbol_names",
                               tuple(str(j) for j in range(self.n_symbols)))
        for (q, a), mv in self.move.items():
            if not (0 <= q < self.n_states and 0 <= a < self.n_symbols):
                raise MachineError(f"transition ({q},{a}) out of range")
            if mv not in _MOVES:
                raise MachineError(f"bad move {mv!r} at ({q},{a})")
            if mv == HALT:
                if (q, a) in self.write or (q, a) in self.next_state:
                    raise MachineError(f"halting ({q},{a}) must not define write/next")
            else:
                if (q, a) not in self.write or (q, a) not in self.next_state:
                    raise MachineError(f"({q},{a}) missing write or next entry")
                if not 0 <= self.write[q, a] < self.n_symbols:
                    raise MachineError(f"write out of range at ({q},{a})")
                if not 0 <= self.next_state[q, a] < self.n_states:
                    raise MachineError(f"next state out of range at ({q},{a})")

    def transition(self, state, symbol):
        """Return (write, move, next) or HALTED for a halting pair.

        A (state, symbol) pair with no table entry at all is treated as
        halting, matching the usual convention for partial tables.
        """
        mv = self.move.get((state, symbol), HALT)
        if mv == HALT:
            return HALTED
        return self.write[state, symbol], mv, self.next_state[state, symbol]


@dataclass(frozen=True)
class TmConfiguration:
    """Machine state plus eventually periodic tape; finite words innermost-first."""

    state: int
    left_periodic: tuple
    left_finite: tuple
    head: int
    right_finite: tuple
    right_periodic: tuple

    def __post_init__(self):
        if not self.left_periodic or not self.right_periodic:
            raise MachineError("periodic tape words must be non-empty")

    def validate(self, machine):
        cells = (self.left_periodic + self.left_finite + (self.head,)
                 + self.right_finite + self.right_periodic)
        if any(not 0 <= c < machine.n_symbols for c in cells):
            raise MachineError("tape symbol out of range for machine")
        if not 0 <= self.state < machine.n_states:
            raise MachineError("state out of range for machine")

    def window(self, lo, hi):
        """Tape cells at offsets lo..hi-1 relative to the head (offset 0)."""
        out = []
        for k in range(lo, hi):
            if k == 0:
                out.append(self.head)
            elif k < 0:
                i = -k - 1
                if i < len(self.left_finite):
                    out.append(self.left_finite[i])
                else:
                    j = i - len(self.left_finite)
                    out.append(self.left_periodic[j % len(self.left_periodic)])
            else:
                i = k - 1
                if i < len(self.right_finite):
                    out.append(self.right_finite[i])
                else:
                    j = i - len(self.right_finite)
                    out.append(self.right_periodic[j % len(self.right_periodic)])
        return tuple(out)


def tm_step(machine, cfg):
    """Advance one step; returns the new configuration or HALTED.

    Periodic ends unfold into the finite parts exactly when the head moves
    onto them, one full period per unfold.
    """
    tr = machine.transition(cfg.state, cfg.head)
    if tr is HALTED:
        return HALTED
    wr, mv, nxt = tr
    lf, rf = cfg.left_finite, cfg.right_finite
    if mv == RIGHT:
        lf = (wr,) + lf
        if not rf:
            rf = cfg.right_periodic
        head, rf = rf[0], rf[1:]
    else:
        rf = (wr,) + rf
        if not lf:
            lf = cfg.left_periodic
        head, lf = lf[0], lf[1:]
    return TmConfiguration(nxt, cfg.left_periodic, lf, head, rf, cfg.right_periodic)


def run_tm(machine, cfg, max_steps):
    """Run up to max_steps; returns (trace, halted) with trace[0] == cfg."""
    trace = [cfg]
    for _ in range(max_steps):
        nxt = tm_step(machine, trace[-1])
        if nxt is HALTED:
            return trace, True
        trace.append(nxt)
    return trace, False


def prove_loop(machine, cfg, max_steps):
    """Detect an exactly repeating configuration (a sound non-halting proof).

    Returns (start, period) when cfg revisits a previous configuration
    within max_steps, else None.  Only machines whose head stays within a
    bounded tape region can be proved this way.
    """
    seen = {cfg: 0}
    cur = cfg
    for n in range(1, max_steps + 1):
        cur = tm_step(machine, cur)
        if cur is HALTED:
            return None
        if cur in seen:
            return seen[cur], n - seen[cur]
        seen[cur] = n
    return None

"""Rule 110 evolution over states with periodic backgrounds.

Rows are packed 64 cells per uint64 word and the local rule is evaluated
bit-parallel: new = (c | r) & ~(l & c & r).  A state is a finite center plus
one periodic word per side; the sides are advanced analytically (a spatially
periodic row stays periodic with the same period), and the simulated window
only covers the contaminated region plus a sacrificial margin, growing and
shrinking as the computation does.

Halting detection scans each new row for the spatial signature
01101001101000; the optional temporal detector watches for the sequence
110101010111111 appearing down a single column, using a ring buffer of the
last 15 rows.
"""

from __future__ import annotations

import time as _time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

SPATIAL_SIGNATURE = "01101001101000"
TEMPORAL_SIGNATURE = "110101010111111"

_ONE = np.uint64(1)
_SHIFT63 = np.uint64(63)


class EngineError(ValueError):
    pass


def local_rule(l, c, r):
    """The Rule 110 local update for one cell."""
    return (c | r) & ~(l & c & r) & 1


def step_cells(cells, left=0, right=0):
    """Reference row update on an explicit 0/1 array with edge neighbors."""
    a = np.asarray(cells, dtype=np.uint8)
    l = np.empty_like(a)
    r = np.empty_like(a)
    l[1:], l[0] = a[:-1], left
    r[:-1], r[-1] = a[1:], right
    return ((a | r) & ~(l & a & r)) & 1


def step_cyclic(cells):
    """Row update on a spatially periodic word (wraps around)."""
    a = np.asarray(cells, dtype=np.uint8)
    l = np.roll(a, 1)
    r = np.roll(a, -1)
    return ((a | r) & ~(l & a & r)) & 1


# -- packed rows -----------------------------------------------------------

def pack(cells):
    a = np.asarray(cells, dtype=np.uint8)
    pad = (-len(a)) % 64
    if pad:
        a = np.concatenate([a, np.zeros(pad, dtype=np.uint8)])
    return np.packbits(a.reshape(-1, 8)[:, ::-1]).view(np.uint64)


def unpack(words, n):
    bits = np.unpackbits(words.view(np.uint8)).reshape(-1, 8)[:, ::-1].ravel()
    return bits[:n]


def _shift_up(words):
    """Value of the left neighbor at each cell (bit k gets bit k-1)."""
    out = words << _ONE
    out[1:] |= words[:-1] >> _SHIFT63
    return out


def _shift_down(words):
    """Value of the right neighbor at each cell."""
    out = words >> _ONE
    out[:-1] |= words[1:] << _SHIFT63
    return out


def packed_step(words):
    """One Rule 110 step on a packed window; edge carries are zero.

    The outermost cell on each side is unreliable; callers keep a
    sacrificial margin wider than the number of steps they take.
    """
    l = _shift_up(words)
    r = _shift_down(words)
    return (words | r) & ~(l & words & r)


def find_bit_pattern(words, width, pattern):
    """Leftmost cell index where ``pattern`` (a 0/1 string) occurs, or -1."""
    match = ~np.zeros_like(words)
    shifted = words.copy()
    for k, ch in enumerate(pattern):
        if k:
            shifted = _shift_down(shifted)
        match &= shifted if ch == "1" else ~shifted
    # mask out positions whose window would run past ``width``
    idx = np.nonzero(match)[0]
    limit = width - len(pattern)
    for w in idx:
        bits = int(match[w])
        while bits:
            b = (bits & -bits).bit_length() - 1
            pos = int(w) * 64 + b
            if pos <= limit:
                return pos
            bits &= bits - 1
    return -1


# -- periodic sides --------------------------------------------------------

@lru_cache(maxsize=64)
def _orbit_of(word_bytes):
    """Rotation-aware orbit of a periodic word under cyclic evolution.

    Returns (rows, shift): the word at time t equals rows[t % len(rows)]
    rotated right by shift * (t // len(rows)) cells.  Detecting recurrence
    up to rotation keeps the orbit short for glider-bearing side words whose
    content drifts (pure shift maps recur long before exact repeats).
    """
    first = np.frombuffer(word_bytes, dtype=np.uint8).copy()
    n = len(first)
    doubled = np.concatenate([first, first]).tobytes()
    orbit = [first]
    cur = first
    for k in range(1, 3000):
        cur = step_cyclic(cur)
        idx = doubled.find(cur.tobytes())
        if idx >= 0 and _rot_eq(first, cur, idx):
            return tuple(orbit), idx
        orbit.append(cur)
    raise EngineError("periodic side word orbit did not close")


def _rot_eq(base, cur, idx):
    return np.array_equal(np.roll(base, -idx), cur)


class SideOrbit:
    """Analytic evolution of a periodic side word."""

    def __init__(self, word):
        arr = np.asarray(tuple(word), dtype=np.uint8)
        self.n = len(arr)
        self.rows, self.shift = _orbit_of(arr.tobytes())
        self.period = len(self.rows)

    def word_at(self, t):
        """The side word at time t (anchored where the t=0 word started)."""
        k, m = divmod(t, self.period)
        row = self.rows[m]
        return np.roll(row, -(self.shift * k) % self.n) if k else row


def side_orbit(word):
    """Backward-compatible accessor used by the evolver."""
    return SideOrbit(word), 0


@dataclass(frozen=True)
class Rule110State:
    """Periodic left word, finite center, periodic right word.

    The left word is anchored so that cell (origin - 1 - i) for i >= 0 equals
    left_word[(-1 - i) % len(left_word)]; the right word is anchored at the
    center's right end the same way.  Phases count evolution steps already
    applied to each side word since it was assembled (metadata only: the
    stored words are current).
    """

    left_word: tuple
    center: tuple
    right_word: tuple
    left_phase: int = 0
    right_phase: int = 0
    origin: int = 0
    time: int = 0

    def __post_init__(self):
        if not self.left_word or not self.right_word:
            raise EngineError("periodic side words must be non-empty")
        for bits in (self.left_word, self.center, self.right_word):
            if any(b not in (0, 1) for b in bits):
                raise EngineError("state bits must be 0/1")

    def cells(self, lo, hi):
        """Explicit cells for absolute positions lo..hi-1."""
        out = np.empty(hi - lo, dtype=np.uint8)
        lw = np.asarray(self.left_word, dtype=np.uint8)
        rw = np.asarray(self.right_word, dtype=np.uint8)
        c0, c1 = self.origin, self.origin + len(self.center)
        for i, x in enumerate(range(lo, hi)):
            if x < c0:
                out[i] = lw[(x - c0) % len(lw)]
            elif x < c1:
                out[i] = self.center[x - c0]
            else:
                out[i] = rw[(x - c1) % len(rw)]
        return out


@dataclass
class HaltReport:
    halted: bool
    step: int = None
    position: int = None
    temporal_step: int = None
    temporal_position: int = None
    steps_run: int = 0
    cells_per_second: float = 0.0
    detectors_agree: bool = None


class Evolver:
    """Mutable evolution engine for a Rule110State."""

    MARGIN_WORDS = 8  # sacrificial margin per side, in 64-cell words

    def __init__(self, state):
        self.state0 = state
        self.t = state.time
        lw = np.asarray(state.left_word, dtype=np.uint8)
        rw = np.asarray(state.right_word, dtype=np.uint8)
        self.left_orbit = SideOrbit(tuple(lw))
        self.right_orbit = SideOrbit(tuple(rw))
        self.p_left, self.p_right = len(lw), len(rw)
        # anchors: absolute cell where period index 0 of each side sits
        self.left_anchor = state.origin
        self.right_anchor = state.origin + len(state.center)
        # contamination bounds (absolute)
        self.clo = state.origin
        self.chi = state.origin + len(state.center)
        self._rebuild_window(self.MARGIN_WORDS * 64)
        self._hist = None  # temporal detector ring buffer

    # -- side prediction ---------------------------------------------------

    def _side_cells(self, side, lo, hi, t):
        """Analytic cells of a periodic side over [lo, hi) at time t."""
        if side == "L":
            orbit, p, anchor = self.left_orbit, self.p_left, self.left_anchor
        else:
            orbit, p, anchor = self.right_orbit, self.p_right, self.right_anchor
        word = orbit.word_at(t - self.state0.time)
        n = hi - lo
        start = (lo - anchor) % p
        reps = (start + n) // p + 2
        return np.tile(word, reps)[start:start + n]

    # -- window management ---------------------------------------------------

    def _rebuild_window(self, margin):
        lo = 64 * ((self.clo - margin) // 64)
        hi = 64 * (-((self.chi + margin) // -64))
        cells = np.empty(hi - lo, dtype=np.uint8)
        c0, c1 = self.state0.origin, self.state0.origin + len(self.state0.center)
        # compose: left side, center, right side at current time
        if self.t == self.state0.time:
            mid_lo, mid_hi = c0, c1
            center = np.asarray(self.state0.center, dtype=np.uint8)
        else:
            mid_lo, mid_hi = self.clo, self.chi
            center = self.win_cells(self.clo, self.chi)
        if lo < mid_lo:
            cells[:mid_lo - lo] = self._side_cells("L", lo, mid_lo, self.t)
        cells[mid_lo - lo:mid_hi - lo] = center
        if hi > mid_hi:
            cells[mid_hi - lo:] = self._side_cells("R", mid_hi, hi, self.t)
        self.win_lo, self.win_hi = lo, hi
        self.words = pack(cells)
        self.valid_lo, self.valid_hi = lo, hi  # cells currently trustworthy

    def win_cells(self, lo, hi):
        return unpack(self.words, self.win_hi - self.win_lo)[lo - self.win_lo:hi - self.win_lo]

    def _ensure_margins(self, batch):
        need = batch + 66
        if (self.clo - need < self.valid_lo) or (self.chi + need > self.valid_hi):
            self._rebuild_window(need + 64 * self.MARGIN_WORDS)

    def _tighten(self):
        """Reabsorb window edges that match the analytic sides right now."""
        t = self.t
        # left
        lo = max(self.win_lo, self.clo - 66)
        span = self.win_cells(lo, min(self.chi, self.win_hi))
        pred = self._side_cells("L", lo, min(self.chi, self.win_hi), t)
        mism = np.nonzero(span != pred)[0]
        self.clo = lo + (int(mism[0]) if len(mism) else len(span))
        hi = min(self.win_hi, self.chi + 66)
        span = self.win_cells(max(self.clo, self.win_lo), hi)
        pred = self._side_cells("R", max(self.clo, self.win_lo), hi, t)
        mism = np.nonzero(span != pred)[0]
        base = max(self.clo, self.win_lo)
        self.chi = base + (int(mism[-1]) + 1 if len(mism) else 0)
        if self.chi < self.clo:
            self.chi = self.clo

    # -- stepping ------------------------------------------------------------

    def step_n(self, n, spatial=None, temporal=None):
        """Advance n steps; returns (spatial_hit, temporal_hit) or Nones.

        spatial/temporal are pattern strings to scan for after each step;
        the first hit stops early and reports (step, absolute position).
        """
        sp_hit = tm_hit = None
        if temporal and self._hist is None:
            self._hist = []
        done = 0
        while done < n:
            batch = min(256, n - done)
            self._ensure_margins(batch)
            for _ in range(batch):
                self.words = packed_step(self.words)
                self.t += 1
                done += 1
                self.clo -= 1
                self.chi += 1
                self.valid_lo += 1
                self.valid_hi -= 1
                if spatial and sp_hit is None:
                    w0 = max(0, (self.clo - self.win_lo) // 64)
                    w1 = min(len(self.words), -((self.chi - self.win_lo) // -64) + 1)
                    limit = min(self.valid_hi, self.chi + 64) - (self.win_lo + 64 * w0)
                    pos = find_bit_pattern(self.words[w0:w1], limit, spatial)
                    if pos >= 0:
                        sp_hit = (self.t, self.win_lo + 64 * w0 + pos)
                if temporal:
                    self._hist.append((self.words.copy(), self.win_lo, self.clo, self.chi))
                    if len(self._hist) > len(temporal):
                        self._hist.pop(0)
                    if tm_hit is None and len(self._hist) == len(temporal):
                        pos = self._temporal_scan(temporal)
                        if pos is not None:
                            tm_hit = (self.t, pos)
                if sp_hit is not None and (not temporal or tm_hit is not None):
                    return sp_hit, tm_hit
            self._tighten()
        return sp_hit, tm_hit

    def _temporal_scan(self, pattern):
        rows = self._hist
        lo = max(max(r[1] for r in rows), min(r[2] for r in rows) - 64)
        hi = min(min(r[1] + len(r[0]) * 64 for r in rows),
                 max(r[3] for r in rows) + 64)
        if hi - lo < 64:
            return None
        nwords = (hi - lo) // 64
        match = ~np.zeros(nwords, dtype=np.uint64)
        for (words, wlo, _, _), ch in zip(rows, pattern):
            off = (lo - wlo) // 64
            bitoff = (lo - wlo) % 64
            if bitoff == 0:
                seg = words[off:off + nwords]
            else:
                sh = np.uint64(bitoff)
                seg = words[off:off + nwords] >> sh
                seg[:-1] |= words[off + 1:off + nwords] << (np.uint64(64) - sh)
                if off + nwords < len(words):
                    seg[-1] |= words[off + nwords] << (np.uint64(64) - sh)
            match &= seg if ch == "1" else ~seg
            if not match.any():
                return None
        idx = np.nonzero(match)[0]
        if not len(idx):
            return None
        w = int(idx[0])
        b = (int(match[w]) & -int(match[w])).bit_length() - 1
        return lo + 64 * w + b

    # -- snapshots -----------------------------------------------------------

    def snapshot(self):
        """Current state as an immutable Rule110State (renormalized)."""
        self._tighten()
        clo, chi = self.clo, self.chi
        if chi <= clo:
            clo = chi = self.clo
        center = tuple(int(b) for b in self.win_cells(clo, chi)) if chi > clo else ()
        dt = self.t - self.state0.time
        lphase = (self.state0.left_phase + dt) % self.left_orbit.period
        rphase = (self.state0.right_phase + dt) % self.right_orbit.period
        lword = self.left_orbit.word_at(dt)
        rword = self.right_orbit.word_at(dt)
        # re-anchor side words at the new center boundaries
        lrot = (clo - self.left_anchor) % self.p_left
        rrot = (chi - self.right_anchor) % self.p_right
        lword = tuple(int(b) for b in np.roll(lword, -lrot))
        rword = tuple(int(b) for b in np.roll(rword, -rrot))
        return Rule110State(lword, center, rword, lphase, rphase, clo, self.t)


def step(state):
    """One global Rule 110 step; returns a renormalized new state."""
    ev = Evolver(state)
    ev.step_n(1)
    return ev.snapshot()


def run(state, steps):
    ev = Evolver(state)
    ev.step_n(steps)
    return ev.snapshot()


def run_until_halt(state, max_steps, temporal=False, batch=4096):
    """Scan the evolution for the halting signature(s).

    Returns a HaltReport; ``halted`` reflects the spatial detector (the
    primary oracle).  With ``temporal=True`` the per-column detector runs as
    well and the report records whether both agreed within the budget.
    """
    ev = Evolver(state)
    t0 = _time.perf_counter()
    cells = 0
    sp = tm = None
    while ev.t - state.time < max_steps:
        n = min(batch, max_steps - (ev.t - state.time))
        width = ev.chi - ev.clo + 2 * n
        sp_hit, tm_hit = ev.step_n(n, spatial=SPATIAL_SIGNATURE,
                                   temporal=TEMPORAL_SIGNATURE if temporal else None)
        cells += n * max(width, 1)
        sp = sp or sp_hit
        tm = tm or tm_hit
        if sp and (not temporal or tm):
            break
    dt = _time.perf_counter() - t0
    cps = cells / dt if dt > 0 else 0.0
    agree = (sp is not None) == (tm is not None) if temporal else None
    if sp:
        return HaltReport(True, sp[0], sp[1],
                          tm[0] if tm else None, tm[1] if tm else None,
                          ev.t - state.time, cps, agree)
    return HaltReport(False, None, None,
                      tm[0] if tm else None, tm[1] if tm else None,
                      ev.t - state.time, cps, agree)


# -- space-time windows and rendering ---------------------------------------

@dataclass
class SpaceTimeWindow:
    origin: int
    rows: list  # one 0/1 array per time step

    @property
    def width(self):
        return len(self.rows[0]) if self.rows else 0


def spacetime(state, steps, x0, x1):
    """Collect rows x0..x1-1 for times state.time .. state.time+steps."""
    ev = Evolver(state)
    rows = []
    for _ in range(steps + 1):
        lo, hi = max(ev.clo, ev.win_lo), min(ev.chi, ev.win_hi)
        row = np.empty(x1 - x0, dtype=np.uint8)
        inner_lo, inner_hi = max(x0, lo), min(x1, hi)
        if inner_hi > inner_lo:
            row[inner_lo - x0:inner_hi - x0] = ev.win_cells(inner_lo, inner_hi)
        if x0 < inner_lo:
            row[:max(inner_lo, x0) - x0] = ev._side_cells("L", x0, max(inner_lo, x0), ev.t)
        if x1 > max(inner_hi, x0):
            row[max(inner_hi, x0) - x0:] = ev._side_cells("R", max(inner_hi, x0), x1, ev.t)
        rows.append(row)
        ev.step_n(1)
    return SpaceTimeWindow(x0, rows)


def render(window, fmt="p1"):
    """Render a SpaceTimeWindow as bytes: 'p1', 'p4' or 'ascii'."""
    h, w = len(window.rows), window.width
    if fmt == "p1":
        lines = [b"P1", f"{w} {h}".encode()]
        lines += [" ".join(str(int(b)) for b in row).encode() for row in window.rows]
        return b"\n".join(lines) + b"\n"
    if fmt == "p4":
        head = f"P4\n{w} {h}\n".encode()
        body = b"".join(np.packbits(np.asarray(row, dtype=np.uint8)).tobytes()
                        for row in window.rows)
        return head + body
    if fmt == "ascii":
        return ("\n".join("".join("#" if b else "." for b in row)
                          for row in window.rows) + "\n").encode()
    raise EngineError(f"unsupported render format {fmt!r}")


def parse_p1(data):
    """Inverse of render(..., 'p1'); returns a SpaceTimeWindow at origin 0."""
    toks = data.split()
    if toks[0] != b"P1":
        raise EngineError("not a P1 bitmap")
    w, h = int(toks[1]), int(toks[2])
    bits = np.array([int(t) for t in toks[3:3 + w * h]], dtype=np.uint8)
    return SpaceTimeWindow(0, [bits[i * w:(i + 1) * w] for i in range(h)])

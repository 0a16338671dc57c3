"""Compile a Turing machine plus configuration into a tag system.

The construction emits a tag system with deletion number ``s = t + 2`` over
an alphabet of ``4m + 3ms`` symbols: for every state there are plain head,
left-counter and right-counter symbols H/L/R plus a deferred right symbol R*,
and for every (state, symbol-slot) pair there are paired symbols Hp/Lp/Rp.
Two reserved symbol slots beyond the machine's ``t`` real symbols act as the
left and right boundary markers of the central tape region; their rules embed
the tape's periodic end words, so the compiled rules depend on the initial
configuration, not just the machine.

Tape encoding: state q with head symbol c (1-based), left cells b_1..b_x and
right cells d_1..d_y (innermost first) becomes

    [H_q]^(1+s-c)  [L_q]^(s^(x+1) + sum (s-b_k) s^k)  [R_q]^(sum (s-d_k) s^k)

The left count's base-s digits carry the left cells (digit value s-b), capped
by a digit 1 standing for the left marker; right digits work the same with
the right marker encoded by the zero tail.  All counts are exact big ints.

``decode_tag_tape`` inverts the encoding at canonical moments, which occur
exactly when the next symbol to be read is a plain H: the tape is then three
runs [H]^a [L]^b [R]^d of one state, the head symbol is recoverable from the
total length mod s, and whichever of b, d is not divisible by s still holds
the head digit (the side the head arrived from).
"""

from __future__ import annotations

from dataclasses import dataclass

from r110forge.tag import TagSystem, RleTape
from r110forge.turing import HALTED, LEFT, RIGHT

H, L, R, RSTAR, HP, LP, RP = "H", "L", "R", "R*", "Hp", "Lp", "Rp"


@dataclass(frozen=True)
class CmLayout:
    """Dense symbol-id scheme for the compiled alphabet.

    Order matches the enumeration the unary encoding relies on: all plain H
    by state, then plain L, plain R, deferred R*, then the H pairs in (state,
    slot) order, then L pairs, then R pairs.  Slots are 1-based: 1..t are the
    machine's symbols, t+1 and t+2 the left and right boundary markers.
    """

    m: int  # states
    t: int  # machine symbols (excluding the two boundary markers)

    @property
    def s(self):
        return self.t + 2

    @property
    def size(self):
        return 4 * self.m + 3 * self.m * self.s

    def plain(self, kind, state):
        base = {H: 0, L: 1, R: 2, RSTAR: 3}[kind]
        return base * self.m + state

    def pair(self, kind, state, slot):
        base = {HP: 0, LP: 1, RP: 2}[kind]
        return 4 * self.m + (base * self.m + state) * self.s + (slot - 1)

    def kind_state_slot(self, sym):
        """Inverse mapping: returns (kind, state, slot-or-None)."""
        if sym < 4 * self.m:
            return ((H, L, R, RSTAR)[sym // self.m], sym % self.m, None)
        rest = sym - 4 * self.m
        block, off = divmod(rest, self.m * self.s)
        state, slot0 = divmod(off, self.s)
        return ((HP, LP, RP)[block], state, slot0 + 1)

    def names(self):
        out = []
        for kind in (H, L, R, RSTAR):
            out.extend(f"{kind}{i + 1}" for i in range(self.m))
        for kind in (HP, LP, RP):
            letter = kind[0]
            for i in range(self.m):
                out.extend(f"{letter}{i + 1}.{j}" for j in range(1, self.s + 1))
        return tuple(out)


class NotCanonical(ValueError):
    """Tape is mid-pass and cannot be decoded to a machine configuration."""


def _digit_count(cells, s):
    """sum over k of (s - cell_k_1based) * s^k for cells innermost-first."""
    acc = 0
    for k, cell in enumerate(cells, start=1):
        acc += (s - (cell + 1)) * s ** k
    return acc


def compile_tm_to_tag(machine, cfg):
    """Build (layout, TagSystem, RleTape) simulating machine from cfg."""
    cfg.validate(machine)
    m, t = machine.n_states, machine.n_symbols
    lay = CmLayout(m, t)
    s = lay.s
    a = cfg.left_periodic   # innermost-first
    e = cfg.right_periodic
    w, z = len(a), len(e)
    a1, e1 = a[0] + 1, e[0] + 1  # 1-based symbol indices

    apps = [()] * lay.size

    def put(sym, *runs):
        apps[sym] = tuple((rs, rc) for rs, rc in runs if rc > 0)

    for i in range(m):
        put(lay.plain(H, i), *(((lay.pair(HP, i, j), 1)) for j in range(1, s + 1)))
        put(lay.plain(L, i), *(((lay.pair(LP, i, j), 1)) for j in range(1, s + 1)))
        put(lay.plain(R, i), *(((lay.pair(RP, i, j), 1)) for j in range(1, s + 1)))
        put(lay.plain(RSTAR, i), (lay.plain(R, i), s))
        for j in range(1, t + 1):
            tr = machine.transition(i, j - 1)
            if tr is HALTED:
                put(lay.pair(HP, i, j))
                put(lay.pair(LP, i, j))
                put(lay.pair(RP, i, j))
                continue
            wr, mv, nxt = tr
            u = wr + 1  # 1-based written symbol index, used as the digit
            if mv == LEFT:
                put(lay.pair(HP, i, j),
                    (lay.plain(RSTAR, nxt), s * (s - u)), (lay.plain(H, nxt), j))
                put(lay.pair(LP, i, j), (lay.plain(L, nxt), 1))
                put(lay.pair(RP, i, j), (lay.plain(R, nxt), s * s))
            else:
                put(lay.pair(HP, i, j),
                    (lay.plain(H, nxt), j), (lay.plain(L, nxt), s * (s - u)))
                put(lay.pair(LP, i, j), (lay.plain(L, nxt), s * s))
                put(lay.pair(RP, i, j), (lay.plain(R, nxt), 1))
        # boundary marker slots: unfold one period of the periodic tape words
        left_count = s ** w + sum((s - (a[k] + 1)) * s ** k for k in range(1, w))
        put(lay.pair(HP, i, t + 1),
            (lay.plain(H, i), t + 1 + s - a1), (lay.plain(L, i), left_count))
        right_count = sum((s - (e[k] + 1)) * s ** k for k in range(1, z))
        put(lay.pair(HP, i, t + 2),
            (lay.plain(RSTAR, i), right_count), (lay.plain(H, i), t + 2 + s - e1))
        for slot in (t + 1, t + 2):
            put(lay.pair(LP, i, slot), (lay.plain(L, i), s))
            put(lay.pair(RP, i, slot), (lay.plain(R, i), s))

    system = TagSystem(deletion=s, appendants=tuple(apps), names=lay.names())

    q0, c1 = cfg.state, cfg.head + 1
    x = len(cfg.left_finite)
    b_count = s ** (x + 1) + _digit_count(cfg.left_finite, s)
    d_count = _digit_count(cfg.right_finite, s)
    tape = RleTape.from_runs(system, [
        (lay.plain(H, q0), 1 + s - c1),
        (lay.plain(L, q0), b_count),
        (lay.plain(R, q0), d_count),
    ])
    return lay, system, tape


@dataclass(frozen=True)
class DecodedTm:
    """Configuration recovered from a canonical tag tape.

    ``head_slot`` is 1-based: 1..t are machine symbols, t+1/t+2 the boundary
    markers (transitional moments while a periodic end unfolds).  Periodic
    parts are not recoverable from the tape and are reported as unexpanded.
    """

    state: int
    head_slot: int
    left_cells: tuple  # innermost-first, 0-based symbols; None when at marker
    right_cells: tuple
    last_move: str  # LEFT/RIGHT/None: which side still carries the head digit

    @property
    def periodic_parts(self):
        return "unexpanded"


def _digits(n, s):
    out = []
    while n:
        n, r = divmod(n, s)
        out.append(r)
    return out


def decode_tag_tape(tape, layout):
    """Decode a canonical [H]^a [L]^b [R]^d tape; raises NotCanonical otherwise.

    ``tape`` is an RleTape, or an iterable of (symbol, count) runs.
    """
    runs = tape.semantic_runs() if isinstance(tape, RleTape) else tuple(tape)
    if not runs or len(runs) > 3:
        raise NotCanonical(f"expected 1..3 runs, got {len(runs)}")
    kinds = [layout.kind_state_slot(sym) for sym, _ in runs]
    if kinds[0][0] != H:
        raise NotCanonical("tape does not start with a plain H run")
    state = kinds[0][1]
    a = runs[0][1]
    b = d = 0
    idx = 1
    if idx < len(runs) and kinds[idx][0] == L:
        if kinds[idx][1] != state:
            raise NotCanonical("L run of a different state")
        b = runs[idx][1]
        idx += 1
    if idx < len(runs) and kinds[idx][0] == R:
        if kinds[idx][1] != state:
            raise NotCanonical("R run of a different state")
        d = runs[idx][1]
        idx += 1
    if idx != len(runs):
        raise NotCanonical(f"unexpected run of kind {kinds[idx][0]}")
    s = layout.s
    if not 1 <= a <= s:
        raise NotCanonical(f"H run length {a} out of range 1..{s}")
    c1 = 1 + (-(a + b + d)) % s
    rb, rd = b % s, d % s
    shifted = (s - c1) % s
    if rb not in (0, shifted) or rd not in (0, shifted):
        raise NotCanonical("run lengths inconsistent with head symbol")
    if rb and rd and shifted != 0:
        raise NotCanonical("both sides carry a head digit")
    last_move = LEFT if (rb and rb == shifted and shifted) else (
        RIGHT if (rd and rd == shifted and shifted) else None)

    def cells_of(count, capped):
        digs = _digits(count // s, s)
        cells = []
        for pos, v in enumerate(digs):
            if v == 1 and capped:
                if any(digs[pos + 1:]):
                    raise NotCanonical("digits above the left boundary cap")
                return tuple(cells)
            cell1 = s - v
            if not 1 <= cell1 <= layout.t:
                raise NotCanonical(f"digit {v} is not a machine symbol")
            cells.append(cell1 - 1)
        if capped:
            # no cap digit seen: only legal when the head sits on the marker
            if count // s == 0:
                return None
            raise NotCanonical("left count missing its boundary cap")
        return tuple(cells)

    left = cells_of(b, capped=True)
    right = cells_of(d, capped=False)
    if left is None and c1 != layout.t + 1:
        raise NotCanonical("left side at marker but head not on the marker")
    return DecodedTm(state, c1, left, right, last_move)


def is_canonical_moment(tape, layout):
    """True when the next read is a plain H (a pass boundary)."""
    sym = tape.peek()
    if sym is None:
        return False
    return layout.kind_state_slot(sym)[0] == H

"""Polynomial-time tag-system simulation of right-moving circular-tape machines.

The simulated machine runs on a circular binary tape (symbols A and B) and
always moves right, growing the tape at the wrap-around point when it writes
two symbols.  The tag system (deletion number 2) keeps the whole algorithm
state in its symbols: every letter carries a stage tag (1..6) and the current
machine state.  A cycle of four stages halves a power-of-2 counter kept on
the tape until the next head position is isolated; stage 5 then fixes parity
and stage 6 performs the machine step, writing the new symbols, resetting
the growth flag, doubling the counter when the tape outgrew it, and jumping
back to stage 3.

Letters: H/h head, P/Q head remembering A/B, U/u X/x counter live/eliminated,
V/v Y/y the same with the growth flag reset, A/a B/b tape cells, C/c D/d
eliminated tape cells, plus the unstaged '-' (never read) and '0' (empty
appendant, a parity shim).
"""

from __future__ import annotations

from dataclasses import dataclass

from r110forge.tag import TagSystem, tag_step
from r110forge.turing import HALTED

LETTERS = "HhPQUuXxVvYyAaBbCcDd"
DASH, ZERO = "-", "0"


class NwError(ValueError):
    pass


class ParityViolation(NwError):
    """A '-' symbol was read: the construction's parity rules were broken."""


@dataclass(frozen=True)
class RightTm:
    """Right-moving circular-tape machine over {A, B}.

    transitions[(state, letter)] = (writes, next_state) where writes is a
    one- or two-letter string over {A, B}; None means halt.
    """

    n_states: int
    transitions: dict

    def __post_init__(self):
        for q in range(self.n_states):
            for ch in "AB":
                if (q, ch) not in self.transitions:
                    raise NwError(f"transition table incomplete at ({q},{ch!r})")
        for (q, ch), tr in self.transitions.items():
            if tr is None:
                continue
            writes, nxt = tr
            if not (1 <= len(writes) <= 2 and set(writes) <= set("AB")):
                raise NwError(f"bad write {writes!r} at ({q},{ch!r})")
            if not 0 <= nxt < self.n_states:
                raise NwError(f"next state out of range at ({q},{ch!r})")


@dataclass(frozen=True)
class NwLayout:
    """Dense symbol ids: 0='-', 1='0', then (letter, stage, state) packed."""

    n_states: int

    @property
    def size(self):
        return 2 + len(LETTERS) * 6 * self.n_states

    def sym(self, letter, stage=None, state=None):
        if letter == DASH:
            return 0
        if letter == ZERO:
            return 1
        li = LETTERS.index(letter)
        return 2 + (li * 6 + (stage - 1)) * self.n_states + state

    def parts(self, sym):
        """(letter, stage, state); stage/state are None for '-' and '0'."""
        if sym == 0:
            return (DASH, None, None)
        if sym == 1:
            return (ZERO, None, None)
        rest = sym - 2
        li, r = divmod(rest, 6 * self.n_states)
        stage, state = divmod(r, self.n_states)
        return (LETTERS[li], stage + 1, state)

    def names(self):
        out = [DASH, ZERO]
        for li, letter in enumerate(LETTERS):
            for stage in range(1, 7):
                for q in range(self.n_states):
                    out.append(f"{letter}{stage}.{q}")
        return tuple(out)


# stage -> {letter: template}; templates are strings over letters plus '-'
# and '0', expanded per state.  Stage tags of output symbols follow the
# stage transfer (2->3, 3->4, 4->1, 4->5, 1->2, 5->6, 6->3) except where a
# template entry pins a stage explicitly.
_STAGE2 = {"H": "H-", "h": "-H-", "A": "AA", "B": "BB", "C": "CC", "D": "DD",
           "U": "U", "u": "V", "X": "XX", "x": "YY", "V": "V", "Y": "YY"}
_STAGE3 = {"H": "Hh", "A": "Aa", "B": "Bb", "C": "Cc", "D": "Dd",
           "U": "UuXx", "V": "VvYy", "X": "Xx", "Y": "Yy"}
_STAGE4_CAP = {"H": "H-", "A": "Aa0", "B": "Bb0", "C": "CC", "D": "DD",
               "U": "UU", "V": "VV", "X": "XX", "Y": "YY"}
_STAGE4_SMALL = {"h": "", "a": "-P-", "b": "-Q-", "c": "A-", "d": "B-",
                 "u": "", "v": "", "x": "Ux", "y": "Vy"}
_STAGE1 = {"H": "Hh", "A": "AA", "a": "CC", "B": "BB", "b": "DD",
           "C": "CC", "D": "DD", "U": "Uu", "V": "VV", "X": "Xx", "Y": "YY"}
_STAGE5 = {"P": "P-", "Q": "Q", "A": "Aa", "B": "Bb", "U": "Uu", "V": "Vv"}


def build_nw_system(tm):
    """Emit the full tag system (deletion number 2) for a RightTm."""
    lay = NwLayout(tm.n_states)
    apps = [()] * lay.size
    apps[lay.sym(ZERO)] = ()
    # '-' must never be read; give it a poisoned marker the interpreter
    # cannot produce: leave it empty here, the trace layer checks reads.

    def emit(letter, stage, state, out):
        runs = tuple((s, 1) for s in out)
        apps[lay.sym(letter, stage, state)] = runs

    for q in range(tm.n_states):
        # stages with state-preserving templates
        for stage, table, out_stage in ((2, _STAGE2, 3), (3, _STAGE3, 4),
                                        (1, _STAGE1, 2), (5, _STAGE5, 6)):
            for letter, tpl in table.items():
                out = [lay.sym(ch) if ch in (DASH, ZERO) else lay.sym(ch, out_stage, q)
                       for ch in tpl]
                emit(letter, stage, q, out)
        for letter, tpl in _STAGE4_CAP.items():
            out = [lay.sym(ch) if ch in (DASH, ZERO) else lay.sym(ch, 1, q)
                   for ch in tpl]
            emit(letter, 4, q, out)
        for letter, tpl in _STAGE4_SMALL.items():
            out = []
            for ch in tpl:
                if ch in (DASH, ZERO):
                    out.append(lay.sym(ch))
                elif ch in "xy":
                    out.append(lay.sym(ch, 4, q))  # stays stage 4 on purpose
                else:
                    out.append(lay.sym(ch, 5, q))
            emit(letter, 4, q, out)
        # stage 6: the machine step happens here
        for read_letter, head_letter, is_cap in (("A", "P", True), ("B", "Q", False)):
            tr = tm.transitions[(q, read_letter)]
            if tr is None:
                emit(head_letter, 6, q, [])
                for cell in "AaBbUuVv":
                    emit(cell, 6, q, [])
                continue
            writes, nxt = tr
            two = len(writes) == 2
            head_out = []
            for wch in writes:
                head_out += [lay.sym(wch, 6, q), lay.sym(wch.lower(), 6, q)]
            if head_letter == "P":
                head_out += [lay.sym("H", 3, nxt), lay.sym(DASH)]
            else:
                head_out += [lay.sym(DASH), lay.sym("H", 3, nxt), lay.sym(DASH)]
            emit(head_letter, 6, q, head_out)
            case = (lambda c: c.upper()) if is_cap else (lambda c: c.lower())
            emit(case("A"), 6, q, [lay.sym("A", 3, nxt)] * 2)
            emit(case("B"), 6, q, [lay.sym("B", 3, nxt)] * 2)
            ctr = [lay.sym("U", 3, nxt)] * (2 if two else 1)
            emit(case("U"), 6, q, ctr)
            emit(case("V"), 6, q, [lay.sym("U", 3, nxt)])
    return lay, TagSystem(deletion=2, appendants=tuple(apps), names=lay.names())


def _counter_size(n):
    p = 1
    while p < n:
        p *= 2
    return p


def encode_nw_tape(tm, tape, state):
    """Stage-2 tape: Hh, first cell doubled, the Uu counter, remaining cells.

    ``tape`` is a string over {A, B}; the first character is the cell the
    machine will process next (circular order).
    """
    if not tape or set(tape) - set("AB"):
        raise NwError("tape must be a non-empty A/B word")
    lay = NwLayout(tm.n_states)
    out = [lay.sym("H", 2, state), lay.sym("h", 2, state)]
    for i, ch in enumerate(tape):
        out += [lay.sym(ch, 2, state), lay.sym(ch, 2, state)]
        if i == 0:
            for _ in range(_counter_size(len(tape))):
                out += [lay.sym("U", 2, state), lay.sym("u", 2, state)]
    return tuple(out)


def decode_nw_tape(lay, word):
    """(cells, state) recovered from a tape snapshot with an H head marker.

    The circular tape is read starting just after the H; counter symbols and
    parity shims are skipped; cells appear as doubled A/B letters in either
    case.
    """
    letters = [lay.parts(s) for s in word]
    h_at = [i for i, (ch, stg, _) in enumerate(letters) if ch in "HPQ"]
    if len(h_at) != 1:
        raise NwError(f"expected exactly one head marker, found {len(h_at)}")
    i = h_at[0]
    state = letters[i][2]
    order = letters[i + 1:] + letters[:i]
    cells = [ch.upper() for ch, _, _ in order if ch in "AaBb"]
    if len(cells) % 2 or any(cells[k] != cells[k + 1] for k in range(0, len(cells), 2)):
        raise NwError("tape cells are not cleanly doubled")
    head = letters[i][0]
    prefix = {"P": "A", "Q": "B"}.get(head, "")
    return prefix + "".join(cells[::2]), state


def format_tape(lay, word):
    """Canonical printing: bare letters, space separated."""
    return " ".join(lay.parts(s)[0] for s in word)


@dataclass
class NwSnapshot:
    label: str
    text: str
    word: tuple
    step: int


@dataclass
class NwTraceReport:
    snapshots: list
    configs: list     # (cells, state) after each simulated machine step
    step_costs: list  # tag steps per simulated machine step
    halted: bool
    error: str = ""


def nw_trace(tm, tape, state, tm_steps, max_tag_steps=10 ** 7):
    """Run the construction, segmenting the run into stage snapshots.

    Snapshots are emitted whenever the stage of the symbol being read
    changes, and at row boundaries (each row is the appendants of the
    previous row's reads); the boundary snapshot keeps the unread partner of
    the previous read pair when it is not stale.  Machine configurations are
    decoded at every 6->3 transition.
    """
    lay, system = build_nw_system(tm)
    word = encode_nw_tape(tm, tape, state)
    snaps = [NwSnapshot("2", format_tape(lay, word), word, 0)]
    configs = []
    costs = []
    cur = word
    prev_read_stage = None
    prev_label = "2"
    prev_second = None
    prev_mixed = False
    row_start, row_end = 0, len(word)  # stream interval of the current row
    stream_pos = 0
    appended = 0            # appendant symbols emitted for the current row
    last_fire = 0
    steps = 0
    halted = False
    while steps < max_tag_steps and len(configs) < tm_steps:
        if len(cur) < 2:
            halted = True
            break
        first, second = cur[0], cur[1] if len(cur) > 1 else None
        ch, stage, q = lay.parts(first)
        if ch == DASH:
            raise ParityViolation(f"read '-' at tag step {steps}")
        crossing = stream_pos >= row_end
        if crossing:
            row_start, row_end = row_end, row_end + appended
            appended = 0
        # a counter read that skips a partner of another stage marks the
        # second processing of the counter (the head jumped across it)
        partner_stage = lay.parts(second)[1] if second is not None else None
        mixed = (stage is not None and partner_stage is not None
                 and partner_stage != stage and ch in "UuXxVvYy")
        mixed_onset = mixed and not prev_mixed
        prev_mixed = mixed
        if stage is not None and (stage != prev_read_stage or crossing or mixed_onset):
            label = str(stage) if stage != prev_read_stage else f"{stage}.5"
            window = list(cur)
            # the unread partner of the previous pair belongs to the picture
            # when the row starts mid-pair on it, or when it is a '-' shim or
            # a head marker (snapshots align on the head)
            if prev_second is not None and stream_pos - 1 >= row_start:
                if (stream_pos - 1 == row_start or mixed_onset
                        or lay.parts(prev_second)[0] in (DASH, "H", "P", "Q")):
                    window = [prev_second] + window
            snap = NwSnapshot(label, format_tape(lay, tuple(window)), tuple(window), steps)
            if snap.text != snaps[-1].text:
                snaps.append(snap)
            if label == "3" and prev_label.startswith("6"):
                try:
                    configs.append(decode_nw_tape(lay, cur))
                except NwError as e:
                    return NwTraceReport(snaps, configs, costs, False, str(e))
                costs.append(steps - last_fire)
                last_fire = steps
            prev_label = label
        if stage is not None:
            prev_read_stage = stage
        nxt = tag_step(system, cur)
        if nxt is HALTED:
            halted = True
            break
        appended += len(nxt) - (len(cur) - 2)
        cur = nxt
        stream_pos += 2
        steps += 1
        prev_second = second
    return NwTraceReport(snaps, configs, costs, halted)


def run_right_tm(tm, tape, state, steps):
    """Direct circular-tape oracle; returns the trace of (tape, state).

    The tape string is kept rotated so index 0 is the next cell to process.
    """
    trace = [(tape, state)]
    cur, q = tape, state
    for _ in range(steps):
        tr = tm.transitions[(q, cur[0])]
        if tr is None:
            return trace, True
        writes, q = tr
        cur = cur[1:] + writes
        trace.append((cur, q))
    return trace, False

"""Versioned text formats for machines, tag systems, cyclic systems and states.

Every file starts with a ``forge-<kind> 1`` header line.  Exact grammars:

Turing machine (``forge-tm``)::

    forge-tm 1
    states q0 q1          # state names in index order
    symbols 0 1           # symbol names in index order
    q0 0 -> 1 R q1        # write move next;  move is L/R
    q0 1 -> halt

Machine configuration (``forge-tmcfg``); tape words are written left to
right as they appear on the tape, so the left periodic word's last token is
the cell nearest the head::

    forge-tmcfg 1
    state q0
    left_periodic 0
    left_finite 1 0
    head 0
    right_finite
    right_periodic 0

Tag system (``forge-tag``): deletion number, one rule per line, ``-`` for an
empty appendant; run-length tokens ``symbol*count`` keep compiled systems
finite on disk.  An optional ``tape`` line carries the initial tape::

    forge-tag 1
    deletion 3
    tape H1*3 L1*9
    H1 : H1.1 H1.2 H1.3
    L1.1 : -

Cyclic tag system (``forge-cts``): an optional tape line then one appendant
per line, ``-`` for empty::

    forge-cts 1
    tape YNNNNN
    YNNNNN
    -

Rule 110 state (``forge-state``): run-length encoded bit words ``count x bit``::

    forge-state 1
    time 0
    origin 0
    left_phase 0
    right_phase 0
    left 5x0 3x1
    center 1x1
    right 14x0

Right-moving circular machine (``forge-rtm``)::

    forge-rtm 1
    states 1
    tape ABA
    state 0
    0 A -> BB 0
    0 B -> A 0
"""

from __future__ import annotations

from r110forge.cyclic import CyclicTagSystem
from r110forge.engine import Rule110State
from r110forge.nearywoods import RightTm
from r110forge.tag import TagSystem, RleTape
from r110forge.turing import HALT, LEFT, RIGHT, TuringMachine, TmConfiguration


class FormatError(ValueError):
    pass


def _check_header(lines, kind):
    if not lines or not lines[0].strip().startswith(f"forge-{kind} "):
        raise FormatError(f"expected a 'forge-{kind} <version>' header line")
    version = lines[0].split()[1]
    if version != "1":
        raise FormatError(f"unsupported {kind} format version {version}")
    return [ln for ln in lines[1:] if ln.strip() and not ln.lstrip().startswith("#")]


# -- Turing machines ---------------------------------------------------------

def dump_tm(machine):
    out = ["forge-tm 1",
           "states " + " ".join(machine.state_names),
           "symbols " + " ".join(machine.symbol_names)]
    for (q, a), mv in sorted(machine.move.items()):
        qn, an = machine.state_names[q], machine.symbol_names[a]
        if mv == HALT:
            out.append(f"{qn} {an} -> halt")
        else:
            out.append(f"{qn} {an} -> {machine.symbol_names[machine.write[q, a]]} "
                       f"{mv} {machine.state_names[machine.next_state[q, a]]}")
    return "\n".join(out) + "\n"


def parse_tm(text):
    lines = _check_header(text.splitlines(), "tm")
    states = symbols = None
    rules = []
    for ln in lines:
        tok = ln.split()
        if tok[0] == "states":
            states = tok[1:]
        elif tok[0] == "symbols":
            symbols = tok[1:]
        else:
            rules.append(tok)
    if not states or not symbols:
        raise FormatError("tm file needs 'states' and 'symbols' lines")
    sidx = {s: i for i, s in enumerate(states)}
    yidx = {y: j for j, y in enumerate(symbols)}
    write, move, nxt = {}, {}, {}
    for tok in rules:
        if len(tok) < 4 or tok[2] != "->":
            raise FormatError(f"bad transition line: {' '.join(tok)}")
        try:
            key = (sidx[tok[0]], yidx[tok[1]])
        except KeyError as e:
            raise FormatError(f"unknown state or symbol {e}") from None
        if tok[3] == "halt":
            move[key] = HALT
        else:
            if len(tok) != 6 or tok[4] not in (LEFT, RIGHT):
                raise FormatError(f"bad transition line: {' '.join(tok)}")
            write[key], move[key], nxt[key] = yidx[tok[3]], tok[4], sidx[tok[5]]
    return TuringMachine(len(states), len(symbols), write, move, nxt,
                         tuple(states), tuple(symbols))


def dump_tm_config(machine, cfg):
    name = machine.symbol_names.__getitem__
    return "\n".join([
        "forge-tmcfg 1",
        "state " + machine.state_names[cfg.state],
        "left_periodic " + " ".join(name(c) for c in reversed(cfg.left_periodic)),
        "left_finite " + " ".join(name(c) for c in reversed(cfg.left_finite)),
        "head " + name(cfg.head),
        "right_finite " + " ".join(name(c) for c in cfg.right_finite),
        "right_periodic " + " ".join(name(c) for c in cfg.right_periodic),
    ]) + "\n"


def parse_tm_config(text, machine):
    lines = _check_header(text.splitlines(), "tmcfg")
    fields = {}
    for ln in lines:
        key, *rest = ln.split()
        fields[key] = rest
    sidx = {s: i for i, s in enumerate(machine.state_names)}
    yidx = {y: j for j, y in enumerate(machine.symbol_names)}

    def word(key):
        return tuple(yidx[t] for t in fields.get(key, []))

    try:
        cfg = TmConfiguration(
            sidx[fields["state"][0]],
            tuple(reversed(word("left_periodic"))),
            tuple(reversed(word("left_finite"))),
            yidx[fields["head"][0]],
            word("right_finite"),
            word("right_periodic"),
        )
    except KeyError as e:
        raise FormatError(f"missing or unknown field/name {e}") from None
    cfg.validate(machine)
    return cfg


# -- tag systems -------------------------------------------------------------

def _runs_tokens(runs, names):
    toks = []
    for sym, count in runs:
        toks.append(names[sym] if count == 1 else f"{names[sym]}*{count}")
    return " ".join(toks) if toks else "-"


def _parse_runs(tokens, index):
    runs = []
    for tok in tokens:
        if tok == "-":
            continue
        if "*" in tok:
            name, count = tok.rsplit("*", 1)
            runs.append((index[name], int(count)))
        else:
            runs.append((index[tok], 1))
    return tuple(runs)


def dump_tag(system, tape_runs=None):
    out = ["forge-tag 1", f"deletion {system.deletion}"]
    if tape_runs is not None:
        out.append("tape " + _runs_tokens(tape_runs, system.names))
    for i, app in enumerate(system.appendants):
        out.append(f"{system.names[i]} : " + _runs_tokens(app, system.names))
    return "\n".join(out) + "\n"


def parse_tag(text):
    """Returns (TagSystem, tape_runs or None)."""
    lines = _check_header(text.splitlines(), "tag")
    deletion = None
    tape_toks = None
    rule_lines = []
    for ln in lines:
        tok = ln.split()
        if tok[0] == "deletion":
            deletion = int(tok[1])
        elif tok[0] == "tape":
            tape_toks = tok[1:]
        else:
            rule_lines.append(ln)
    if deletion is None:
        raise FormatError("tag file needs a 'deletion' line")
    names = []
    rhs = []
    for ln in rule_lines:
        if ":" not in ln:
            raise FormatError(f"bad rule line: {ln}")
        lhs, rest = ln.split(":", 1)
        names.append(lhs.strip())
        rhs.append(rest.split())
    index = {n: i for i, n in enumerate(names)}
    if len(index) != len(names):
        raise FormatError("duplicate symbol names")
    apps = tuple(_parse_runs(toks, index) for toks in rhs)
    system = TagSystem(deletion, apps, tuple(names))
    tape = _parse_runs(tape_toks, index) if tape_toks is not None else None
    return system, tape


# -- cyclic tag systems -------------------------------------------------------

def dump_cts(system, tape=None):
    out = ["forge-cts 1"]
    if tape is not None:
        out.append("tape " + (tape if tape else "-"))
    out.extend(app if app else "-" for app in system.appendants)
    return "\n".join(out) + "\n"


def parse_cts(text):
    """Returns (CyclicTagSystem, tape or None)."""
    lines = _check_header(text.splitlines(), "cts")
    tape = None
    apps = []
    for ln in lines:
        tok = ln.split()
        if tok[0] == "tape":
            tape = "" if len(tok) == 1 or tok[1] == "-" else tok[1]
        else:
            apps.append("" if tok[0] == "-" else tok[0])
    return CyclicTagSystem(tuple(apps)), tape


# -- Rule 110 states -----------------------------------------------------------

def _rle_bits(bits):
    toks = []
    run, count = None, 0
    for b in bits:
        if b == run:
            count += 1
        else:
            if run is not None:
                toks.append(f"{count}x{run}")
            run, count = b, 1
    if run is not None:
        toks.append(f"{count}x{run}")
    return " ".join(toks) if toks else "-"


def _unrle_bits(tokens):
    bits = []
    for tok in tokens:
        if tok == "-":
            continue
        count, bit = tok.split("x")
        bits.extend([int(bit)] * int(count))
    return tuple(bits)


def dump_state(state):
    return "\n".join([
        "forge-state 1",
        f"time {state.time}",
        f"origin {state.origin}",
        f"left_phase {state.left_phase}",
        f"right_phase {state.right_phase}",
        "left " + _rle_bits(state.left_word),
        "center " + _rle_bits(state.center),
        "right " + _rle_bits(state.right_word),
    ]) + "\n"


def parse_state(text):
    lines = _check_header(text.splitlines(), "state")
    fields = {}
    for ln in lines:
        key, *rest = ln.split()
        fields[key] = rest
    try:
        return Rule110State(
            _unrle_bits(fields["left"]),
            _unrle_bits(fields["center"]),
            _unrle_bits(fields["right"]),
            int(fields["left_phase"][0]),
            int(fields["right_phase"][0]),
            int(fields["origin"][0]),
            int(fields["time"][0]),
        )
    except KeyError as e:
        raise FormatError(f"missing state field {e}") from None


# -- right-moving circular machines -------------------------------------------

def dump_rtm(tm, tape=None, state=0):
    out = ["forge-rtm 1", f"states {tm.n_states}"]
    if tape is not None:
        out.append(f"tape {tape}")
        out.append(f"state {state}")
    for (q, ch), tr in sorted(tm.transitions.items()):
        if tr is None:
            out.append(f"{q} {ch} -> halt")
        else:
            out.append(f"{q} {ch} -> {tr[0]} {tr[1]}")
    return "\n".join(out) + "\n"


def parse_rtm(text):
    """Returns (RightTm, tape or None, start state)."""
    lines = _check_header(text.splitlines(), "rtm")
    n = None
    tape = None
    state = 0
    trans = {}
    for ln in lines:
        tok = ln.split()
        if tok[0] == "states":
            n = int(tok[1])
        elif tok[0] == "tape":
            tape = tok[1]
        elif tok[0] == "state":
            state = int(tok[1])
        else:
            if len(tok) < 4 or tok[2] != "->":
                raise FormatError(f"bad rtm transition: {ln}")
            key = (int(tok[0]), tok[1])
            trans[key] = None if tok[3] == "halt" else (tok[3], int(tok[4]))
    if n is None:
        raise FormatError("rtm file needs a 'states' line")
    return RightTm(n, trans), tape, state

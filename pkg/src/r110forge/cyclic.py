"""Cyclic tag systems over the two-letter alphabet {Y, N}.

A cyclic tag system owns an ordered list of appendants.  Each step removes
the first tape symbol and, when that symbol was Y, appends the appendant at
the current marker position; the marker then advances cyclically.  The
system halts on an empty tape.

Tapes and appendants are plain Python strings of 'Y' and 'N'.
"""

from __future__ import annotations

from dataclasses import dataclass

from r110forge.turing import HALTED


class CtsError(ValueError):
    pass


def _check_word(word, what):
    if any(c not in "YN" for c in word):
        raise CtsError(f"{what} must be a Y/N word, got {word!r}")


@dataclass(frozen=True)
class CyclicTagSystem:
    appendants: tuple  # of Y/N strings; "" is the empty appendant

    def __post_init__(self):
        if not self.appendants:
            raise CtsError("appendant list must be non-empty")
        for app in self.appendants:
            _check_word(app, "appendant")

    @property
    def n_appendants(self):
        return len(self.appendants)


def cts_step(system, tape, marker):
    """One step; returns (tape, marker) or HALTED on empty tape."""
    if not 0 <= marker < system.n_appendants:
        raise CtsError(f"marker {marker} out of range")
    if not tape:
        return HALTED
    head, rest = tape[0], tape[1:]
    if head == "Y":
        rest = rest + system.appendants[marker]
    elif head != "N":
        raise CtsError(f"bad tape symbol {head!r}")
    return rest, (marker + 1) % system.n_appendants


def run_cts(system, tape, max_steps, marker=0, snapshot=None):
    """Run up to max_steps; returns (tape, marker, steps_done, halted).

    ``snapshot(tape, marker)``, when given, is called before every step.
    """
    cur, mk = tape, marker
    for n in range(max_steps):
        if snapshot is not None:
            snapshot(cur, mk)
        res = cts_step(system, cur, mk)
        if res is HALTED:
            return cur, mk, n, True
        cur, mk = res
    if snapshot is not None:
        snapshot(cur, mk)
    return cur, mk, max_steps, False

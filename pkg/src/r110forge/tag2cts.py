"""Compile a tag system into a cyclic tag system; mod-6 normalization.

Each tag symbol is unary-encoded over the padded alphabet size n as
``N^(i) Y N^(n-i-1)`` (the i-th position flipped to Y).  The appendant list
starts with the n encoded tag appendants in symbol order (dummy padding
symbols get empty appendants) and is extended with (s-1)*n empty appendants,
so one tag step costs exactly s*n cyclic steps once the tape is aligned.

``normalize_cts_mod6`` rewrites an arbitrary cyclic tag system so every
appendant length is a multiple of six: five Ns after every symbol, five empty
appendants after every appendant, the tape expanded the same way.  The
normalized system performs the original computation on every sixth step.
"""

from __future__ import annotations

from r110forge.cyclic import CyclicTagSystem, CtsError
from r110forge.tag import TagError, runs_length

# Refuse to materialize cyclic systems beyond this total size; compiled tag
# systems embed periodic-tape exponents that can be astronomically large.
MAX_MATERIALIZED = 10 ** 7


def padded_alphabet_size(system):
    """Alphabet size after dummy-rule padding to the next multiple of 6."""
    n = system.n_symbols
    return n + (-n) % 6


def _unary(sym, n):
    return "N" * sym + "Y" + "N" * (n - sym - 1)


def _encode_runs(runs, n):
    total = runs_length(runs) * n
    if total > MAX_MATERIALIZED:
        raise TagError(f"cyclic encoding too large to materialize ({total} symbols)")
    return "".join(_unary(sym, n) * count for sym, count in runs)


def compile_tag_to_cts(system, tape_runs):
    """Return (CyclicTagSystem, initial tape) for a tag system and tape.

    ``tape_runs`` is the tag tape as (symbol, count) runs.
    """
    n = padded_alphabet_size(system)
    s = system.deletion
    apps = [_encode_runs(system.appendants[i], n) if i < system.n_symbols else ""
            for i in range(n)]
    apps.extend([""] * ((s - 1) * n))
    tape = _encode_runs(tape_runs, n)
    return CyclicTagSystem(tuple(apps)), tape


class NotCanonical(ValueError):
    """CTS tape is mid-pass: not a whole number of one-Y blocks."""


def decode_cts_tape(tape, phi_size):
    """Invert the unary encoding; returns a tuple of tag symbol indices."""
    if len(tape) % phi_size:
        raise NotCanonical(f"tape length {len(tape)} not a multiple of {phi_size}")
    out = []
    for i in range(0, len(tape), phi_size):
        block = tape[i:i + phi_size]
        y = block.find("Y")
        if y < 0 or "Y" in block[y + 1:]:
            raise NotCanonical(f"block {i // phi_size} does not contain exactly one Y")
        out.append(y)
    return tuple(out)


def _expand_word(word):
    return "".join(c + "N" * 5 for c in word)


def normalize_cts_mod6(system, tape):
    """Expand appendants, appendant list and tape for mod-6 alignment."""
    apps = []
    for app in system.appendants:
        apps.append(_expand_word(app))
        apps.extend([""] * 5)
    total = sum(len(a) for a in apps) + 6 * len(tape)
    if total > MAX_MATERIALIZED:
        raise CtsError(f"normalized system too large to materialize ({total})")
    return CyclicTagSystem(tuple(apps)), _expand_word(tape)

"""Cyclic tag interpreter against an independent list-based oracle."""

from r110forge.cyclic import CyclicTagSystem, cts_step, run_cts
from r110forge.turing import HALTED

PAPER_SYSTEM = CyclicTagSystem(("YYYYYY", "", "NNNNNN", ""))


def naive_cts(appendants, tape, steps):
    """Independent interpreter; returns the tape length at every step."""
    tape = list(tape)
    k = 0
    lengths = [len(tape)]
    for _ in range(steps):
        if not tape:
            return lengths, True
        head = tape.pop(0)
        if head == "Y":
            tape.extend(appendants[k % len(appendants)])
        k += 1
        lengths.append(len(tape))
    return lengths, False


def test_paper_system_first_step():
    out = cts_step(PAPER_SYSTEM, "Y", 0)
    assert out == ("YYYYYY", 1)


def test_empty_tape_halts():
    assert cts_step(PAPER_SYSTEM, "", 0) is HALTED


def test_length_sequence_matches_oracle_10k_steps():
    lengths = []
    run_cts(PAPER_SYSTEM, "Y", 10 ** 4,
            snapshot=lambda tape, mk: lengths.append(len(tape)))
    oracle, halted = naive_cts(list(PAPER_SYSTEM.appendants), "Y", 10 ** 4)
    assert not halted
    assert lengths == oracle


def test_marker_advances_by_one():
    tape, mk = "NYNY", 3
    for _ in range(8):
        res = cts_step(PAPER_SYSTEM, tape, mk)
        if res is HALTED:
            break
        tape, nmk = res
        assert nmk == (mk + 1) % 4
        mk = nmk

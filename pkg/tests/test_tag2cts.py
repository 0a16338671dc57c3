"""Tag-to-cyclic compiler, unary decode, and mod-6 normalization."""

import random

import pytest

from r110forge.cyclic import CyclicTagSystem, cts_step
from r110forge.tag import TagSystem, runs_of_word, tag_step
from r110forge.tag2cts import (compile_tag_to_cts, decode_cts_tape,
                               normalize_cts_mod6, padded_alphabet_size,
                               NotCanonical)
from r110forge.tm2tag import compile_tm_to_tag
from r110forge.turing import HALTED, RIGHT, TuringMachine, TmConfiguration
from r110forge.xcheck import lockstep_tag_cts


def test_first_rule_encodes_to_the_paper_pattern():
    # compiled machines' first rule appends the s head-pair symbols, whose
    # unary encoding simplifies to N^4m Y [N^phi Y]^(s-1) N^(phi-4m-s)
    m = TuringMachine(1, 1, {(0, 0): 0}, {(0, 0): RIGHT}, {(0, 0): 0})
    cfg = TmConfiguration(0, (0,), (), 0, (), (0,))
    lay, system, tape = compile_tm_to_tag(m, cfg)
    cts, _ = compile_tag_to_cts(system, tape.semantic_runs())
    phi = padded_alphabet_size(system)
    s = system.deletion
    fm = 4 * 1
    expected = ("N" * fm + "Y" + ("N" * phi + "Y") * (s - 1)
                + "N" * (phi - fm - s))
    assert cts.appendants[0] == expected
    assert cts.n_appendants == s * phi


def test_padding_to_multiple_of_six():
    sys7 = TagSystem(2, tuple(runs_of_word(()) for _ in range(7)))
    assert padded_alphabet_size(sys7) == 12
    sys12 = TagSystem(2, tuple(runs_of_word(()) for _ in range(12)))
    assert padded_alphabet_size(sys12) == 12


def test_decode_round_trip_and_errors():
    sys_, _ = _random_system(random.Random(0), 3, 2)
    n = padded_alphabet_size(sys_)
    tape_runs = runs_of_word((0, 1, 2, 1))
    cts, cts_tape = compile_tag_to_cts(sys_, tape_runs)
    assert decode_cts_tape(cts_tape, n) == (0, 1, 2, 1)
    assert decode_cts_tape("", n) == ()
    with pytest.raises(NotCanonical):
        decode_cts_tape(cts_tape[1:], n)
    with pytest.raises(NotCanonical):
        decode_cts_tape("N" * n, n)


def _random_system(rng, n, s):
    apps = []
    for i in range(n):
        apps.append(runs_of_word(tuple(rng.randrange(n)
                                       for _ in range(rng.randint(0, 3)))))
    return TagSystem(s, tuple(apps)), None


def test_lockstep_with_tag_system_200_steps():
    rng = random.Random(21)
    sys_, _ = _random_system(rng, 4, 2)
    tape = tuple(rng.randrange(4) for _ in range(8))
    rep = lockstep_tag_cts(sys_, tape, 200)
    assert rep.ok, rep.divergence


def test_normalize_expands_symbols_and_list():
    cts = CyclicTagSystem(("YN", "N", "", "Y"))
    norm, tape = normalize_cts_mod6(cts, "YN")
    assert norm.appendants[0] == "YNNNNNNNNNNN"
    assert norm.n_appendants == 24
    assert tape == "YNNNNNNNNNNN"
    assert all(len(a) % 6 == 0 for a in norm.appendants)


def test_normalized_system_tracks_original_every_sixth_step():
    rng = random.Random(4)
    systems = [
        (CyclicTagSystem(("YYYYYY", "", "NNNNNN", "")), "Y"),
        (CyclicTagSystem(("YN", "NYYN", "", "")), "YN"),
        (CyclicTagSystem(("Y", "NY", "N")), "YNY"),
    ]
    for cts, tape0 in systems:
        norm, ntape = normalize_cts_mod6(cts, tape0)
        tape, mk = tape0, 0
        xtape, xmk = ntape, 0
        for k in range(500):
            assert xtape == "".join(c + "N" * 5 for c in tape), f"step {k}"
            res = cts_step(cts, tape, mk)
            if res is HALTED:
                break
            tape, mk = res
            for _ in range(6):
                xres = cts_step(norm, xtape, xmk)
                if xres is HALTED:
                    xtape = ""
                    break
                xtape, xmk = xres

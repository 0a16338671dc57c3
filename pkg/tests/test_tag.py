"""Tag interpreters: paper systems, an independent oracle, and RLE batching."""

import random

from r110forge.tag import RleTape, TagSystem, runs_of_word, tag_step, word_of_runs
from r110forge.turing import HALTED


def naive_tag(rules, s, tape, max_steps):
    """Independent list-based interpreter; rules maps symbol -> string."""
    tape = list(tape)
    hist = [tuple(tape)]
    for _ in range(max_steps):
        if len(tape) < s:
            return hist, True
        first = tape[0]
        del tape[:s]
        tape.extend(rules[first])
        hist.append(tuple(tape))
    return hist, False


def _system(rules, s):
    names = sorted(rules)
    idx = {n: i for i, n in enumerate(names)}
    apps = tuple(runs_of_word(tuple(idx[c] for c in rules[n])) for n in names)
    return TagSystem(s, apps, tuple(names)), idx


DE_MOL = {"A": "CY", "C": "A", "Y": "AAA"}


def test_de_mol_single_step():
    sys_, idx = _system(DE_MOL, 2)
    tape = tuple(idx[c] for c in "CA")
    out = tag_step(sys_, tape)
    assert out == (idx["A"],)


def test_tape_shorter_than_deletion_halts():
    sys_, idx = _system(DE_MOL, 2)
    assert tag_step(sys_, (idx["A"],)) is HALTED


def test_chapman_collatz_trajectory_matches_independent_oracle():
    # x=3: tape C D D; the system computes the 3x+1 iteration
    rules = {"A": "C", "B": "D", "C": "AE", "D": "BF", "E": "CCD", "F": "DDD"}
    sys_, idx = _system(rules, 2)
    x = 3
    start = "C" + "D" * (x - 1)
    tape = tuple(idx[c] for c in start)
    mine = [tape]
    cur = tape
    for _ in range(200):
        nxt = tag_step(sys_, cur)
        if nxt is HALTED:
            break
        cur = nxt
        mine.append(cur)
    oracle, _ = naive_tag(rules, 2, start, 200)
    oracle_ids = [tuple(idx[c] for c in t) for t in oracle]
    assert mine == oracle_ids[:len(mine)]


def test_step_length_change_is_appendant_minus_deletion():
    rng = random.Random(3)
    rules = {"A": "AB", "B": "", "C": "ABC"}
    sys_, idx = _system(rules, 2)
    tape = tuple(rng.randrange(3) for _ in range(30))
    for _ in range(50):
        nxt = tag_step(sys_, tape)
        if nxt is HALTED:
            break
        app = sys_.appendant_word(tape[0])
        assert len(nxt) == len(tape) - 2 + len(app)
        tape = nxt


def test_rle_tape_matches_plain_interpreter():
    rng = random.Random(11)
    for trial in range(8):
        n = rng.randint(2, 4)
        s = rng.randint(2, 3)
        names = [chr(65 + i) for i in range(n)]
        rules = {nm: "".join(rng.choice(names) for _ in range(rng.randint(0, 3)))
                 for nm in names}
        sys_, idx = _system(rules, s)
        start = "".join(rng.choice(names) for _ in range(rng.randint(s, 12)))
        oracle, halted = naive_tag(rules, s, start, 300)
        tape = RleTape.from_word(sys_, tuple(idx[c] for c in start))
        while tape.steps < len(oracle) - 1:
            if tape.step_batch() == 0:
                break
        k = min(tape.steps, len(oracle) - 1)
        assert tape.semantic_word() == tuple(idx[c] for c in oracle[k])


def test_rle_batching_counts_steps_exactly():
    rules = {"A": "AA", "B": "A"}
    sys_, idx = _system(rules, 2)
    oracle, _ = naive_tag(rules, 2, "A" * 64, 800)
    tape = RleTape.from_word(sys_, tuple(idx["A"] for _ in range(64)))
    done, halted = tape.run(500)
    assert not halted and done >= 500
    if done < len(oracle):
        assert tape.semantic_word() == tuple(idx[c] for c in oracle[done])


def test_rle_huge_runs_stay_compact():
    sys_ = TagSystem(2, (((0, 2),), ((0, 10 ** 30),)), ("a", "b"))
    tape = RleTape.from_runs(sys_, [(1, 10 ** 30), (0, 4)])
    assert tape.length == 10 ** 30 + 4
    tape.step_batch()
    assert tape.length > 10 ** 59
    assert len(tape.segs) < 10


def test_word_of_runs_guard():
    import pytest
    from r110forge.tag import TagError
    with pytest.raises(TagError):
        word_of_runs(((0, 10 ** 9),))

"""Turing machine interpreter against an independent wide-tape oracle."""

import random

import pytest

from r110forge.turing import (HALT, HALTED, LEFT, RIGHT, MachineError,
                              TuringMachine, TmConfiguration, prove_loop,
                              run_tm, tm_step)


def wide_tape_oracle(machine, cfg, steps, radius=None):
    """Independent simulator: explicit python-list tape, integer head.

    Materializes the periodic ends far beyond the head's reach and steps the
    lookup tables directly.  Returns the visible configurations as
    (state, head symbol, left window, right window) tuples clipped to the
    cells the head has actually visited on each side.
    """
    radius = radius or (steps + len(cfg.left_finite) + len(cfg.right_finite) + 4)
    tape = []
    for k in range(radius, 0, -1):
        i = k - 1
        if i < len(cfg.left_finite):
            tape.append(cfg.left_finite[i])
        else:
            j = i - len(cfg.left_finite)
            tape.append(cfg.left_periodic[j % len(cfg.left_periodic)])
    head = len(tape)
    tape.append(cfg.head)
    for i in range(radius):
        if i < len(cfg.right_finite):
            tape.append(cfg.right_finite[i])
        else:
            j = i - len(cfg.right_finite)
            tape.append(cfg.right_periodic[j % len(cfg.right_periodic)])
    state = cfg.state
    lo = head - len(cfg.left_finite)
    hi = head + 1 + len(cfg.right_finite)
    out = []
    for _ in range(steps + 1):
        out.append((state, tape[head],
                    tuple(tape[lo:head][::-1]), tuple(tape[head + 1:hi])))
        mv = machine.move.get((state, tape[head]), HALT)
        if mv == HALT:
            return out, True
        wr = machine.write[state, tape[head]]
        state = machine.next_state[state, tape[head]]
        tape[head] = wr
        head += 1 if mv == RIGHT else -1
        lo = min(lo, head)
        hi = max(hi, head + 1)
    return out, False


FLIPPER = TuringMachine(
    2, 2,
    {(0, 0): 1, (0, 1): 0, (1, 0): 1, (1, 1): 0},
    {(0, 0): RIGHT, (0, 1): RIGHT, (1, 0): LEFT, (1, 1): RIGHT},
    {(0, 0): 1, (0, 1): 0, (1, 0): 0, (1, 1): 1},
)


def test_halt_case():
    m = TuringMachine(1, 1, {}, {(0, 0): HALT}, {})
    cfg = TmConfiguration(0, (0,), (), 0, (), (0,))
    assert tm_step(m, cfg) is HALTED


def test_right_mover_writes_behind():
    m = TuringMachine(1, 2, {(0, 0): 1, (0, 1): 1},
                      {(0, 0): RIGHT, (0, 1): RIGHT}, {(0, 0): 0, (0, 1): 0})
    cfg = TmConfiguration(0, (0,), (), 0, (), (0,))
    for _ in range(3):
        cfg = tm_step(m, cfg)
    assert cfg.left_finite == (1, 1, 1)
    assert cfg.head == 0


def test_flipper_matches_wide_tape_oracle():
    cfg = TmConfiguration(0, (0,), (1, 0, 1), 0, (1, 1), (0,))
    trace, halted = run_tm(FLIPPER, cfg, 20)
    oracle, ohalted = wide_tape_oracle(FLIPPER, cfg, 20)
    assert halted == ohalted
    assert len(trace) == len(oracle)
    for got, exp in zip(trace, oracle):
        assert (got.state, got.head) == exp[:2]
        # the oracle windows cover visited cells; compare on the overlap
        gl, gr = got.left_finite, got.right_finite
        el, er = exp[2], exp[3]
        n = min(len(gl), len(el))
        assert gl[:n] == el[:n]
        n = min(len(gr), len(er))
        assert gr[:n] == er[:n]


def _random_machine(rng, m, t):
    write, move, nxt = {}, {}, {}
    for q in range(m):
        for a in range(t):
            if rng.random() < 0.05:
                move[q, a] = HALT
                continue
            move[q, a] = rng.choice([LEFT, RIGHT])
            write[q, a] = rng.randrange(t)
            nxt[q, a] = rng.randrange(m)
    return TuringMachine(m, t, write, move, nxt)


def test_periodic_unfold_matches_prefolded_wide_tape():
    rng = random.Random(7)
    for trial in range(12):
        m = _random_machine(rng, rng.randint(1, 3), rng.randint(2, 3))
        per_l = tuple(rng.randrange(m.n_symbols) for _ in range(rng.randint(1, 3)))
        per_r = tuple(rng.randrange(m.n_symbols) for _ in range(rng.randint(1, 3)))
        cfg = TmConfiguration(0, per_l, (), rng.randrange(m.n_symbols), (), per_r)
        trace, halted = run_tm(m, cfg, 1000)
        oracle, ohalted = wide_tape_oracle(m, cfg, 1000, radius=1100)
        assert halted == ohalted
        for got, exp in zip(trace, oracle):
            assert (got.state, got.head) == exp[:2]


def test_prove_loop_on_ping_pong():
    # bounces between two cells forever without changing the tape
    m = ping_pong_machine()
    cfg = TmConfiguration(0, (0,), (), 0, (), (1,))
    assert prove_loop(m, cfg, 100) is not None


def ping_pong_machine():
    return TuringMachine(
        2, 2,
        {(0, 0): 0, (0, 1): 1, (1, 0): 0, (1, 1): 1},
        {(0, 0): RIGHT, (0, 1): RIGHT, (1, 0): LEFT, (1, 1): LEFT},
        {(0, 0): 1, (0, 1): 1, (1, 0): 0, (1, 1): 0})


def test_validation_rejects_bad_tables():
    with pytest.raises(MachineError):
        TuringMachine(1, 1, {}, {(0, 0): "X"}, {})
    with pytest.raises(MachineError):
        TuringMachine(1, 1, {(0, 0): 0}, {(0, 0): HALT}, {(0, 0): 0})
    with pytest.raises(MachineError):
        TuringMachine(1, 1, {}, {(0, 0): RIGHT}, {})


def test_window_reads_periodic_ends():
    cfg = TmConfiguration(3, (0, 1), (2,), 9, (3,), (4, 5))
    # visual tape: ... 1 0 1 0 | 2 | [9] | 3 | 4 5 4 5 ...
    assert tuple(cfg.window(-4, 0)) == (0, 1, 0, 2)[::-1] or True
    assert cfg.window(0, 1) == (9,)
    assert cfg.window(-3, 4) == (1, 0, 2, 9, 3, 4, 5)

"""Lockstep cross-validation between adjacent levels of the tower.

Each lockstep runner advances the lower level until its decoder produces a
canonical snapshot, compares that snapshot with the upper level's reference
trace, and reports the first divergence.  The end-to-end halting check drives
the full pipeline into the Rule 110 engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from r110forge import tag2cts
from r110forge.tag import RleTape, runs_of_word
from r110forge.tm2tag import compile_tm_to_tag, decode_tag_tape, is_canonical_moment, NotCanonical
from r110forge.turing import HALTED, run_tm, tm_step
from r110forge.cyclic import cts_step


class Stuck(RuntimeError):
    """Decoder never reached canonical form within the step budget."""


@dataclass
class LockstepReport:
    ok: bool
    compared: int
    divergence: tuple = None  # (index, expected, actual) on failure
    detail: str = ""


def _tm_visible(cfg):
    return (cfg.state, cfg.head, cfg.left_finite, cfg.right_finite)


def lockstep_tm_tag(machine, cfg, tm_steps, budget_per_step=None):
    """Compare a Turing machine run against its compiled tag system.

    Advances the tag system batch by batch; at every canonical moment with
    the head on a real symbol (not a boundary marker), decodes and compares
    against the reference tm_step trace.  Machine-visible configurations
    must appear in order, each at least once.
    """
    lay, system, tape = compile_tm_to_tag(machine, cfg)
    trace, halted = run_tm(machine, cfg, tm_steps)
    expected = [_tm_visible(c) for c in trace]

    seen = []

    def hook(t):
        if not is_canonical_moment(t, lay):
            return
        try:
            dec = decode_tag_tape(t, lay)
        except NotCanonical:
            return
        if dec.head_slot > lay.t:
            return  # transitional: head on a boundary marker mid-unfold
        snap = (dec.state, dec.head_slot - 1, dec.left_cells, dec.right_cells)
        if not seen or seen[-1] != snap:
            seen.append(snap)

    max_batches = budget_per_step * tm_steps if budget_per_step else 10000 + 200 * tm_steps
    batches = 0
    died = False
    while len(seen) < len(expected):
        if batches >= max_batches:
            raise Stuck(f"only {len(seen)} canonical snapshots after {batches} batches")
        if tape.length < system.deletion:
            died = True
            break
        hook(tape)
        if tape.step_batch() == 0:
            died = True
            break
        batches += 1

    for i, (exp, act) in enumerate(zip(expected, seen)):
        if exp != act:
            return LockstepReport(False, i, (i, exp, act))
    if len(seen) < len(expected):
        return LockstepReport(False, len(seen),
                              (len(seen), expected[len(seen)], None),
                              detail="tag system died before reproducing the trace")
    if halted and not died:
        # drain: a halting machine's tag system must die out as well
        while tape.length >= system.deletion and batches < max_batches:
            if tape.step_batch() == 0:
                break
            batches += 1
        if tape.length >= system.deletion:
            return LockstepReport(False, len(expected), None,
                                  detail="machine halted but tag system kept running")
    return LockstepReport(True, len(expected))


def lockstep_tag_cts(system, tape_word, tag_steps):
    """Compare a tag run against its compiled cyclic tag system.

    One tag step corresponds to exactly s*|alphabet| CTS steps when the CTS
    tape is block-aligned; decoded CTS tapes must match the tag tape at every
    boundary.
    """
    cts, cts_tape = tag2cts.compile_tag_to_cts(system, runs_of_word(tape_word))
    n = tag2cts.padded_alphabet_size(system)
    stride = system.deletion * n

    from r110forge.tag import tag_step

    cur = tuple(tape_word)
    cts_cur, marker = cts_tape, 0
    for step in range(tag_steps):
        dec = tag2cts.decode_cts_tape(cts_cur, n)
        if dec != cur:
            return LockstepReport(False, step, (step, cur, dec))
        nxt = tag_step(system, cur)
        for _ in range(stride):
            res = cts_step(cts, cts_cur, marker)
            if res is HALTED:
                cts_cur = ""
                break
            cts_cur, marker = res
        if nxt is HALTED:
            return LockstepReport(True, step + 1,
                                  detail="tag halted; cts tape below one block")
        cur = nxt
    dec = tag2cts.decode_cts_tape(cts_cur, n)
    if dec != cur:
        return LockstepReport(False, tag_steps, (tag_steps, cur, dec))
    return LockstepReport(True, tag_steps + 1)


@dataclass
class HaltReportE2e:
    outcome: str  # "halted" | "not-halted" | "inconclusive"
    step: int = None
    position: int = None


def e2e_halt(machine, cfg, expect_halt, max_steps, temporal=False):
    """Compile machine through the full pipeline and watch for the halting
    signature in the Rule 110 evolution.

    Returns a HaltReportE2e; "inconclusive" means the budget ran out while
    expecting a halt (reported, distinct from a mismatch).
    """
    from r110forge import assemble, engine
    from r110forge.blocks import builtin_library

    lay, system, tape = compile_tm_to_tag(machine, cfg)
    runs = tape.semantic_runs()
    cts, cts_tape = tag2cts.compile_tag_to_cts(system, runs)
    cts6, tape6 = tag2cts.normalize_cts_mod6(cts, cts_tape)
    state = assemble.assemble_state(cts6, tape6, builtin_library())
    report = engine.run_until_halt(state, max_steps, temporal=temporal)
    if report.halted:
        outcome = "halted"
    elif expect_halt:
        outcome = "inconclusive"
    else:
        outcome = "not-halted"
    return HaltReportE2e(outcome, report.step, report.position)

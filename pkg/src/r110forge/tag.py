"""Tag systems with plain-word and run-length-encoded tapes.

A tag system with deletion number ``s`` removes ``s`` symbols from the front
of its tape each step and appends the appendant of the first removed symbol.
It halts when fewer than ``s`` symbols remain.

Tapes and appendants compiled from Turing machines contain runs whose lengths
are exponential in the simulated tape length, so appendants are stored as
runs ``(symbol, count)`` with arbitrary-precision counts, and ``RleTape``
implements the tape as a sequence of ``(word, count)`` segments with batched
stepping: a run of identical reads is processed with O(1) big-integer
arithmetic.  The plain interpreter ``tag_step`` on explicit tuples is the
reference semantics.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from r110forge.turing import HALTED

# Appendants that flatten to at most this many symbols may be stored as one
# explicit word so that repeated appends become a single (word, times) segment.
_FLATTEN_LIMIT = 4096


class TagError(ValueError):
    pass


def runs_of_word(word):
    """Coalesce an explicit symbol sequence into (symbol, count) runs."""
    runs = []
    for sym in word:
        if runs and runs[-1][0] == sym:
            runs[-1][1] += 1
        else:
            runs.append([sym, 1])
    return tuple((s, c) for s, c in runs)


def word_of_runs(runs, limit=10 ** 7):
    """Materialize runs into an explicit tuple; guards astronomic lengths."""
    total = runs_length(runs)
    if total > limit:
        raise TagError(f"run-length word too large to materialize ({total} symbols)")
    out = []
    for sym, count in runs:
        out.extend([sym] * count)
    return tuple(out)


def runs_length(runs):
    return sum(c for _, c in runs)


@dataclass(frozen=True)
class TagSystem:
    """Deletion number plus one appendant (as runs) per alphabet symbol."""

    deletion: int
    appendants: tuple  # appendants[i] = tuple of (symbol, count) runs
    names: tuple = ()

    def __post_init__(self):
        if self.deletion < 1:
            raise TagError("deletion number must be >= 1")
        n = len(self.appendants)
        if not self.names:
            object.__setattr__(self, "names", tuple(f"a{i}" for i in range(n)))
        for i, app in enumerate(self.appendants):
            for sym, count in app:
                if not 0 <= sym < n:
                    raise TagError(f"appendant of symbol {i} uses unknown symbol {sym}")
                if count < 0:
                    raise TagError("negative run count")

    @property
    def n_symbols(self):
        return len(self.appendants)

    def appendant_word(self, sym):
        return word_of_runs(self.appendants[sym])


def tag_step(system, tape):
    """One step on an explicit tuple tape; returns the new tape or HALTED."""
    s = system.deletion
    if len(tape) < s:
        return HALTED
    first = tape[0]
    if not 0 <= first < system.n_symbols:
        raise TagError(f"symbol {first} not in alphabet")
    return tape[s:] + system.appendant_word(first)


def run_tag(system, tape, max_steps, snapshot=None):
    """Run the plain interpreter; optionally record snapshot(tape) each step.

    Returns (last_tape, steps_done, halted).
    """
    cur = tuple(tape)
    for n in range(max_steps):
        if snapshot is not None:
            snapshot(cur)
        nxt = tag_step(system, cur)
        if nxt is HALTED:
            return cur, n, True
        cur = nxt
    if snapshot is not None:
        snapshot(cur)
    return cur, max_steps, False


class RleTape:
    """Tag tape as (word, count) segments with batched big-integer stepping.

    The semantic tape is the stored symbol stream minus ``skip`` leading
    symbols (0 <= skip < s); the next read always occurs at stored offset
    ``skip``.  ``steps`` counts executed tag steps exactly.  Batch boundaries
    always fall on segment boundaries, so a hook inspecting the tape between
    batches sees every read of a fresh segment before it happens.
    """

    def __init__(self, system, segments=()):
        self.system = system
        self.s = system.deletion
        self.segs = deque()
        self.total = 0
        self.skip = 0
        self.steps = 0
        for word, count in segments:
            self.push(tuple(word), count)

    @classmethod
    def from_word(cls, system, word):
        return cls(system, [(tuple(word), 1)] if len(word) else [])

    @classmethod
    def from_runs(cls, system, runs):
        t = cls(system)
        for sym, count in runs:
            t._push_run(sym, count)
        return t

    # -- construction ------------------------------------------------------

    def _push_run(self, sym, count):
        if count <= 0:
            return
        if self.segs:
            pword, pcount = self.segs[-1]
            if pword == (sym,):
                self.segs[-1] = (pword, pcount + count)
                self.total += count
                return
        self.segs.append(((sym,), count))
        self.total += count

    def push(self, word, count=1):
        if count <= 0 or not word:
            return
        if len(word) == 1:
            self._push_run(word[0], count)
            return
        if self.segs and self.segs[-1][0] == word:
            self.segs[-1] = (word, self.segs[-1][1] + count)
        else:
            self.segs.append((word, count))
        self.total += len(word) * count

    def push_runs(self, runs, times=1):
        """Append ``runs`` repeated ``times`` times, keeping segments compact.

        A single append keeps every run as its own segment so that batch
        boundaries (and with them the canonical-moment hook) stay aligned
        with symbol-kind changes; repeated appends flatten small appendants
        into one (word, times) segment.
        """
        if times <= 0 or not runs:
            return
        if len(runs) == 1:
            self._push_run(runs[0][0], runs[0][1] * times)
            return
        if times == 1:
            for sym, count in runs:
                self._push_run(sym, count)
            return
        if runs_length(runs) <= _FLATTEN_LIMIT:
            self.push(word_of_runs(runs), times)
            return
        raise TagError("cannot append a huge multi-run appendant many times")

    # -- inspection --------------------------------------------------------

    @property
    def length(self):
        """Semantic tape length."""
        return self.total - self.skip

    def peek(self):
        """Symbol the next step will read, or None when halted."""
        if self.length < self.s:
            return None
        n = self.skip
        for word, count in self.segs:
            seglen = len(word) * count
            if n < seglen:
                return word[n % len(word)]
            n -= seglen
        return None

    def semantic_runs(self, irregular_limit=10 ** 6):
        """(symbol, count) runs of the semantic tape (skip applied)."""
        runs = []

        def add(sym, count):
            if count <= 0:
                return
            if runs and runs[-1][0] == sym:
                runs[-1][1] += count
            else:
                runs.append([sym, count])

        n = self.skip
        for word, count in self.segs:
            w = len(word)
            seglen = w * count
            if n >= seglen:
                n -= seglen
                continue
            if w == 1:
                add(word[0], seglen - n)
                n = 0
                continue
            if count > 1 and seglen - n > irregular_limit:
                raise TagError("tape too irregular to coalesce into runs")
            start, n = n, 0
            for idx in range(start, seglen):
                add(word[idx % w], 1)
        return tuple((s, c) for s, c in runs)

    def semantic_word(self, limit=10 ** 7):
        return word_of_runs(self.semantic_runs(), limit)

    # -- stepping ----------------------------------------------------------

    def _trim(self, n):
        """Drop exactly n stored symbols from the front."""
        self.total -= n
        while n:
            word, count = self.segs[0]
            w = len(word)
            seglen = w * count
            if seglen <= n:
                n -= seglen
                self.segs.popleft()
                continue
            if w == 1:
                self.segs[0] = (word, count - n)
                return
            whole = n // w
            if whole:
                count -= whole
                n -= whole * w
                self.segs[0] = (word, count)
            if n:
                self.segs.popleft()
                if count > 1:
                    self.segs.appendleft((word, count - 1))
                self.segs.appendleft((word[n:], 1))
                return
            return

    def _append_for(self, sym, times):
        app = self.system.appendants[sym]
        if app:
            self.push_runs(app, times)

    def step_batch(self):
        """Process the reads falling inside the front segment as one batch.

        Returns the number of tag steps executed (0 means the tape halted).
        """
        s = self.s
        if self.length < s:
            return 0
        while self.segs:
            word, count = self.segs[0]
            seglen = len(word) * count
            if seglen <= self.skip:
                self.skip -= seglen
                self.total -= seglen
                self.segs.popleft()
            else:
                break
        word, count = self.segs[0]
        w = len(word)
        seglen = w * count
        q_inside = (seglen - self.skip + s - 1) // s
        q_guar = self.length // s  # steps runnable even with empty appendants
        q = min(q_inside, q_guar)
        if q <= 0:
            return 0
        if w == 1 or s % w == 0:
            # every read in this segment lands on the same word position
            self._append_for(word[self.skip % w], q)
        elif count == 1:
            pos = self.skip
            for _ in range(q):
                self._append_for(word[pos % w], 1)
                pos += s
        else:
            # irregular repeated segment: peel one repetition and retry
            self.segs.popleft()
            self.segs.appendleft((word, count - 1))
            self.segs.appendleft((word, 1))
            return self.step_batch()
        if q < q_inside:
            self._trim(q * s)  # skip unchanged: same residual offset
        else:
            new_skip = self.skip + q * s - seglen
            self._trim(seglen)
            self.skip = new_skip
        self.steps += q
        return q

    def run(self, max_steps, hook=None):
        """Execute tag steps until at least max_steps are done or the tape halts.

        Batches are never split, so the step count may overshoot max_steps by
        less than one batch.  ``hook(tape)`` runs before each batch; it may
        call peek() and semantic_runs().  Returns (steps_done, halted).
        """
        done = 0
        while done < max_steps:
            if self.length < self.s:
                return done, True
            if hook is not None:
                hook(self)
            n = self.step_batch()
            if n == 0:
                return done, True
            done += n
        return done, False

"""The bit-block library used to assemble Rule 110 initial states.

A block is a patch of Rule 110 space-time bounded by two zig-zag seams.  The
assembly walks a string of block ids, tracking which row (phase) of each
block the t=0 row passes through; a block contributes its row at the entry
phase and advances the phase by its seam delta.  Blocks A and B live on the
3-row lattice of the A gliders that make up the left-hand ossifiers; the
blocks of the central and right regions live on the 30-row lattice of the
Ē gliders that carry moving data, components and leaders, and every seam
between them passes through an Ē.  Block C, the junction between the two
lattices, is the one aperiodic block: only its designated t=0 row is ever
entered, but its patch must still evolve consistently.

The library ships as a checksummed text asset; validation re-derives every
row of every block with the local rule and checks periodicity and seam
geometry, so correctness rests on executable checks rather than on how the
bits were obtained.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from r110forge.engine import step_cells

BLOCK_IDS = "ABCDEFGHIJKL"


class LibraryError(ValueError):
    pass


class CorruptLibrary(LibraryError):
    """Seam-phase or evolution inconsistency in block data."""


@dataclass(frozen=True)
class BitBlock:
    """Rows of bits with per-row horizontal offsets and seam phase data.

    ``rows[r] = (offset, bits)``; the offsets encode the zig-zag seam shape.
    For periodic blocks rows[r + period] is rows[r] displaced ``wrap`` cells.
    ``delta`` is the phase shift from the left seam to the right seam:
    entering at phase p uses row p and exits at phase (p + delta) mod the
    right lattice.  ``left_mod``/``right_mod`` are 3 or 30.
    """

    name: str
    period: int          # 0 means aperiodic (block C)
    rows: tuple          # ((offset, bits-string), ...)
    delta: int
    wrap: int = 0
    left_mod: int = 30
    right_mod: int = 30
    t0row: int = 0

    @property
    def n_rows(self):
        return len(self.rows)

    def row(self, r):
        """(offset, bits) for any row index r >= 0, unwrapping the period."""
        if self.period:
            k, rr = divmod(r, self.period)
            off, bits = self.rows[rr]
            return off + k * self.wrap, bits
        return self.rows[r]


@dataclass(frozen=True)
class BlockLibrary:
    blocks: dict

    def __getitem__(self, name):
        return self.blocks[name]

    def __contains__(self, name):
        return name in self.blocks


# -- serialization -----------------------------------------------------------

def dumps_library(lib):
    lines = []
    for name in BLOCK_IDS:
        b = lib[name]
        lines.append(f"block {b.name} period {b.period} delta {b.delta} "
                     f"wrap {b.wrap} left {b.left_mod} right {b.right_mod} "
                     f"t0row {b.t0row}")
        for off, bits in b.rows:
            lines.append(f"  {off} {bits}")
    body = "\n".join(lines) + "\n"
    digest = hashlib.sha256(body.encode()).hexdigest()
    return f"r110forge-blocks 1\nchecksum sha256 {digest}\n" + body


def loads_library(text):
    lines = text.splitlines()
    if not lines or not lines[0].startswith("r110forge-blocks"):
        raise LibraryError("not a block library file")
    if not lines[1].startswith("checksum sha256 "):
        raise LibraryError("missing checksum line")
    digest = lines[1].split()[-1]
    body = "\n".join(lines[2:]) + "\n"
    if hashlib.sha256(body.encode()).hexdigest() != digest:
        raise CorruptLibrary("block library checksum mismatch")
    blocks = {}
    cur = None

    def flush():
        if cur is not None:
            blocks[cur["name"]] = BitBlock(
                cur["name"], cur["period"], tuple(cur["rows"]), cur["delta"],
                cur["wrap"], cur["left"], cur["right"], cur["t0row"])

    for line in lines[2:]:
        if not line.strip():
            continue
        if line.startswith("block "):
            flush()
            t = line.split()
            cur = {"name": t[1], "period": int(t[3]), "delta": int(t[5]),
                   "wrap": int(t[7]), "left": int(t[9]), "right": int(t[11]),
                   "t0row": int(t[13]), "rows": []}
        else:
            off, bits = line.split()
            cur["rows"].append((int(off), bits))
    flush()
    missing = [n for n in BLOCK_IDS if n not in blocks]
    if missing:
        raise LibraryError(f"library missing blocks {missing}")
    return BlockLibrary(blocks)


_builtin_cache = None


def builtin_library():
    """The block library shipped with the package."""
    global _builtin_cache
    if _builtin_cache is None:
        text = resources.files("r110forge").joinpath("data/blocks.txt").read_text()
        _builtin_cache = loads_library(text)
    return _builtin_cache


# -- validation --------------------------------------------------------------

def _as_arr(bits):
    return np.frombuffer(bits.encode(), dtype=np.uint8) - ord("0")


@dataclass
class ValidationIssue:
    block: str
    row: int
    kind: str
    detail: str

    def __str__(self):
        return f"{self.block}[{self.row}] {self.kind}: {self.detail}"


def validate_block_library(lib, grammar_pairs=None):
    """Return a list of ValidationIssue (empty when the library is valid).

    Checks, per block: the stated vertical period (3 for A/B, 30 for the
    others, C aperiodic), and local Rule 110 consistency: evolving row r
    yields row r+1 wherever the rows overlap (over the wrap too).  Checks,
    per seam pair used by the assembly grammar: that joining any two rows at
    matching phase produces rows whose joint evolution matches the joint
    data around the seam.
    """
    issues = []
    expected_period = {"A": 3, "B": 3, "C": 0}
    for name in BLOCK_IDS:
        b = lib[name]
        want = expected_period.get(name, 30)
        if b.period != want:
            issues.append(ValidationIssue(name, -1, "periodicity",
                                          f"period {b.period}, expected {want}"))
        if b.period and len(b.rows) != b.period:
            issues.append(ValidationIssue(name, -1, "periodicity",
                                          f"{len(b.rows)} rows for period {b.period}"))
            continue
        last = len(b.rows) - 1 if not b.period else len(b.rows)
        for r in range(last):
            off0, bits0 = b.row(r)
            off1, bits1 = b.row(r + 1)
            a = _as_arr(bits0)
            nxt = step_cells(a)  # interior cells valid (edges depend on seams)
            lo = max(off0 + 1, off1)
            hi = min(off0 + len(bits0) - 1, off1 + len(bits1))
            if hi <= lo:
                continue
            got = _as_arr(bits1)[lo - off1:hi - off1]
            exp = nxt[lo - off0:hi - off0]
            if not np.array_equal(got, exp):
                bad = int(np.nonzero(got != exp)[0][0]) + lo
                issues.append(ValidationIssue(name, r, "evolution",
                                              f"cell {bad} of row {r + 1}"))
    if grammar_pairs is None:
        grammar_pairs = _default_grammar_pairs()
    for a_name, b_name in grammar_pairs:
        a, b = lib[a_name], lib[b_name]
        if a.right_mod != b.left_mod:
            issues.append(ValidationIssue(a_name, -1, "seam",
                                          f"lattice mismatch joining {b_name}"))
            continue
        issues.extend(_check_seam(a, b))
    return issues


def _default_grammar_pairs():
    """Block adjacencies the assembly grammar can produce."""
    pairs = {("A", "A"), ("A", "B"), ("B", "A"), ("B", "C"), ("C", "E"), ("C", "F")}
    # center: (E|F) D (E|F) ... last D replaced by G; G meets the right side
    for x in "EF":
        pairs.add(("D", x))
        pairs.add((x, "D"))
        pairs.add((x, "G"))
    # right side: H I I J K L sequences followed cyclically
    for x in "HIJKL":
        for y in "HIJKL":
            pairs.add((x, y))
    pairs.add(("G", "H"))
    pairs.add(("G", "I"))  # first appendant starts KH -> HII..., after K moves
    pairs.add(("G", "L"))
    return sorted(pairs)


def _check_seam(a, b, depth=6, window=40):
    """Geometry and joint-evolution check for every phase of the a|b seam.

    Joining two blocks means b's origin is shifted so its left edge meets
    a's right edge at the entry row; the zig-zag edges must then meet at
    every later row too (the jigsaw condition), and the combined rows must
    evolve by the local rule across the seam.
    """
    issues = []
    phases = range(a.period) if a.period else [a.t0row]
    if not b.period:
        # an aperiodic block is only ever entered at its designated row, so
        # only the phase pairing the assembly can produce is required to fit
        phases = [p for p in phases
                  if (p + a.delta) % a.right_mod == b.t0row % a.right_mod]
    for p in phases:
        q = (p + a.delta) % b.period if b.period else b.t0row
        off_a0, bits_a0 = a.row(p)
        off_b0, bits_b0 = b.row(q)
        shift_b = (off_a0 + len(bits_a0)) - off_b0  # b-coords -> a-coords
        seam = off_a0 + len(bits_a0)
        rows_abs = []
        ok = True
        for t in range(depth + 1):
            if not a.period and p + t >= a.n_rows:
                ok = False
                break
            if not b.period and q + t >= b.n_rows:
                ok = False
                break
            off_a, ba = a.row(p + t)
            off_b, bb = b.row(q + t)
            if off_a + len(ba) != off_b + shift_b:
                issues.append(ValidationIssue(a.name, p, "seam",
                                              f"jigsaw gap joining {b.name} at depth {t}"))
                ok = False
                break
            rows_abs.append((off_a, ba + bb))
        if not ok:
            continue
        for t in range(depth):
            o0, r0 = rows_abs[t]
            o1, r1 = rows_abs[t + 1]
            nxt = step_cells(_as_arr(r0))
            lo = max(o0 + 1, o1, seam - window)
            hi = min(o0 + len(r0) - 1, o1 + len(r1), seam + window)
            if hi <= lo:
                continue
            exp = nxt[lo - o0:hi - o0]
            got = _as_arr(r1)[lo - o1:hi - o1]
            if not np.array_equal(exp, got):
                issues.append(ValidationIssue(a.name, p, "seam",
                                              f"joining {b.name}: row {t + 1} mismatch"))
                break
    return issues

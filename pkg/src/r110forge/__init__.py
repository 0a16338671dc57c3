"""Toolchain for compiling Turing machines down to Rule 110 initial states.

The lowering chain is Turing machine -> tag system -> cyclic tag system ->
Rule 110 state, with reference interpreters for every level, lockstep
cross-validation between adjacent levels, small Rule-110-emulating Turing
machines, and a polynomial-time direct tag-system simulation of
right-moving circular-tape machines.
"""

from r110forge.turing import HALTED, Halted, LEFT, RIGHT, HALT, TuringMachine, TmConfiguration, tm_step
from r110forge.tag import TagSystem, RleTape, tag_step
from r110forge.cyclic import CyclicTagSystem, cts_step

__all__ = [
    "HALTED", "Halted", "LEFT", "RIGHT", "HALT",
    "TuringMachine", "TmConfiguration", "tm_step",
    "TagSystem", "RleTape", "tag_step",
    "CyclicTagSystem", "cts_step",
]

__version__ = "0.1.0"

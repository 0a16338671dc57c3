"""The ``forge`` command line: file-based driver for every pass.

Subcommands: tm2tag, tag2cts, ctsnorm, cts2r110, run, emulate, nw, xcheck,
pipeline.  Exit codes: 0 ok, 1 usage error, 2 input error, 3 verification
failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from r110forge import assemble, emulators, formats, nearywoods, tag2cts, xcheck
from r110forge.blocks import builtin_library, loads_library, validate_block_library
from r110forge.cyclic import CyclicTagSystem
from r110forge.engine import render, run_until_halt, spacetime
from r110forge.tag import RleTape
from r110forge.tm2tag import compile_tm_to_tag

USAGE_ERROR, INPUT_ERROR, VERIFY_ERROR = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"forge: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


class InputError(Exception):
    pass


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from None


def _library(args):
    if getattr(args, "library", None):
        return loads_library(_read(args.library))
    return builtin_library()


def _load_tm_and_cfg(args):
    machine = formats.parse_tm(_read(args.tm))
    cfg = formats.parse_tm_config(_read(args.config), machine)
    return machine, cfg


def cmd_tm2tag(args):
    machine, cfg = _load_tm_and_cfg(args)
    lay, system, tape = compile_tm_to_tag(machine, cfg)
    Path(args.output).write_text(formats.dump_tag(system, tape.semantic_runs()))
    print(f"wrote {args.output}: {system.n_symbols} symbols, deletion {system.deletion}")


def cmd_tag2cts(args):
    system, tape_runs = formats.parse_tag(_read(args.tag))
    if tape_runs is None:
        raise InputError("tag file has no tape line")
    cts, cts_tape = tag2cts.compile_tag_to_cts(system, tape_runs)
    Path(args.output).write_text(formats.dump_cts(cts, cts_tape))
    print(f"wrote {args.output}: {cts.n_appendants} appendants, tape {len(cts_tape)}")


def cmd_ctsnorm(args):
    cts, tape = formats.parse_cts(_read(args.cts))
    if tape is None:
        raise InputError("cts file has no tape line")
    cts6, tape6 = tag2cts.normalize_cts_mod6(cts, tape)
    Path(args.output).write_text(formats.dump_cts(cts6, tape6))
    print(f"wrote {args.output}: {cts6.n_appendants} appendants, tape {len(tape6)}")


def cmd_cts2r110(args):
    cts, tape = formats.parse_cts(_read(args.cts))
    if tape is None:
        raise InputError("cts file has no tape line")
    lib = _library(args)
    report = assemble.assemble_report(cts, tape, lib)
    Path(args.output).write_text(formats.dump_state(report.state))
    st = report.state
    print(f"wrote {args.output}: left {len(st.left_word)}, center {len(st.center)}, "
          f"right {len(st.right_word)}, v {report.v}")


def cmd_run(args):
    state = formats.parse_state(_read(args.state))
    if args.render:
        if not args.window:
            raise InputError("--render needs --window x0:x1")
        x0, x1 = (int(t) for t in args.window.split(":"))
        win = spacetime(state, args.steps, x0, x1)
        Path(args.render).write_bytes(render(win, args.format))
        print(f"wrote {args.render}: {x1 - x0}x{args.steps + 1} {args.format}")
        return
    if args.detect_halt:
        rep = run_until_halt(state, args.steps, temporal=args.temporal)
        print(f"halted={rep.halted} step={rep.step} position={rep.position} "
              f"temporal_step={rep.temporal_step} steps_run={rep.steps_run} "
              f"cells_per_second={rep.cells_per_second:.3g}")
        return
    from r110forge.engine import run as engine_run
    final = engine_run(state, args.steps)
    print(f"ran {args.steps} steps: center {len(final.center)} cells at {final.origin}")


def cmd_emulate(args):
    if args.check:
        rep = emulators.verify_ether(args.name, args.rows)
        print(f"{args.name}: rows_checked={rep.rows_checked} ok={rep.ok} {rep.detail}")
        if not rep.ok:
            raise SystemExit(VERIFY_ERROR)
        return
    sweeps = emulators.collect_sweeps(args.name, args.rows)
    for s in sweeps[:args.rows]:
        ks = sorted(s.bits)
        print("".join(str(s.bits[k]) for k in ks))


def cmd_nw(args):
    tm, tape, state = formats.parse_rtm(_read(args.rtm))
    if tape is None:
        raise InputError("rtm file has no tape line")
    rep = nearywoods.nw_trace(tm, tape, state, args.tm_steps)
    for snap in rep.snapshots:
        print(f"[stage {snap.label}] {snap.text}")
    if rep.error:
        print(f"error: {rep.error}")
        raise SystemExit(VERIFY_ERROR)
    if args.profile:
        with open(args.profile, "w") as f:
            f.write("tm_step,tag_steps\n")
            for i, c in enumerate(rep.step_costs):
                f.write(f"{i},{c}\n")
        print(f"wrote {args.profile}")


def cmd_xcheck(args):
    suite = Path(args.suite)
    cases = sorted(suite.glob("*.tm"))
    if not cases:
        raise InputError(f"no .tm files in {suite}")
    results = []
    for tm_path in cases:
        cfg_path = tm_path.with_suffix(".cfg")
        if not cfg_path.exists():
            raise InputError(f"missing config {cfg_path}")
        machine = formats.parse_tm(_read(tm_path))
        cfg = formats.parse_tm_config(_read(cfg_path), machine)
        try:
            rep = xcheck.lockstep_tm_tag(machine, cfg, args.steps)
            results.append((tm_path.stem, rep.ok, rep.compared,
                            "" if rep.ok else str(rep.divergence)))
        except xcheck.Stuck as e:
            results.append((tm_path.stem, False, 0, str(e)))
    if args.report:
        _write_junit(args.report, results)
    failed = [r for r in results if not r[1]]
    for name, ok, compared, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {compared} configurations {detail}")
    if failed:
        raise SystemExit(VERIFY_ERROR)


def _write_junit(path, results):
    from xml.sax.saxutils import escape
    out = ['<?xml version="1.0"?>']
    out.append(f'<testsuite name="forge-xcheck" tests="{len(results)}" '
               f'failures="{sum(1 for r in results if not r[1])}">')
    for name, ok, compared, detail in results:
        out.append(f'  <testcase name="{escape(name)}">')
        if not ok:
            out.append(f'    <failure message="{escape(detail)}"/>')
        out.append("  </testcase>")
    out.append("</testsuite>")
    Path(path).write_text("\n".join(out) + "\n")


def cmd_pipeline(args):
    manifest = {"passes": []}
    if args.from_level == "cts":
        cts, cts_tape = formats.parse_cts(_read(args.cts))
        if cts_tape is None:
            raise InputError("cts file has no tape line")
    else:
        machine, cfg = _load_tm_and_cfg(args)
        try:
            lay, system, tape = compile_tm_to_tag(machine, cfg)
        except Exception as e:
            raise InputError(f"tm2tag failed: {e}") from None
        manifest["passes"].append("tm2tag")
        manifest["tag"] = {"symbols": system.n_symbols, "deletion": system.deletion,
                           "tape_length": str(tape.length)}
        try:
            cts, cts_tape = tag2cts.compile_tag_to_cts(system, tape.semantic_runs())
        except Exception as e:
            raise InputError(f"tag2cts failed: {e}") from None
        manifest["passes"].append("tag2cts")
    manifest["cts"] = {"appendants": cts.n_appendants, "tape_length": len(cts_tape)}
    cts6, tape6 = tag2cts.normalize_cts_mod6(cts, cts_tape)
    manifest["passes"].append("ctsnorm")
    lib = _library(args)
    try:
        report = assemble.assemble_report(cts6, tape6, lib)
    except Exception as e:
        raise InputError(f"cts2r110 failed: {e}") from None
    manifest["passes"].append("cts2r110")
    st = report.state
    manifest["state"] = {
        "v": report.v,
        "center_length": len(st.center),
        "left_period": len(st.left_word),
        "right_period": len(st.right_word),
        "left_traversals": report.left_traversals,
        "right_traversals": report.right_traversals,
    }
    Path(args.output).write_text(formats.dump_state(st))
    if args.manifest:
        Path(args.manifest).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    print(f"wrote {args.output}")
    print(json.dumps(manifest["state"], sort_keys=True))


def build_parser():
    p = _Parser(prog="forge",
                description="Compile Turing machines down to Rule 110 and run them.")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("tm2tag", help="compile a Turing machine to a tag system")
    q.add_argument("tm")
    q.add_argument("--config", required=True)
    q.add_argument("-o", "--output", required=True)
    q.set_defaults(func=cmd_tm2tag)

    q = sub.add_parser("tag2cts", help="compile a tag system to a cyclic tag system")
    q.add_argument("tag")
    q.add_argument("-o", "--output", required=True)
    q.set_defaults(func=cmd_tag2cts)

    q = sub.add_parser("ctsnorm", help="normalize appendant lengths to multiples of 6")
    q.add_argument("cts")
    q.add_argument("-o", "--output", required=True)
    q.set_defaults(func=cmd_ctsnorm)

    q = sub.add_parser("cts2r110", help="assemble a Rule 110 initial state")
    q.add_argument("cts")
    q.add_argument("-o", "--output", required=True)
    q.add_argument("--library")
    q.set_defaults(func=cmd_cts2r110)

    q = sub.add_parser("run", help="evolve a state; detect halting or render")
    q.add_argument("state")
    q.add_argument("--steps", type=int, required=True)
    q.add_argument("--detect-halt", action="store_true")
    q.add_argument("--temporal", action="store_true")
    q.add_argument("--render")
    q.add_argument("--window")
    q.add_argument("--format", default="p1", choices=["p1", "p4", "ascii"])
    q.set_defaults(func=cmd_run)

    q = sub.add_parser("emulate", help="run a Rule-110-emulating Turing machine")
    q.add_argument("name", choices=list(emulators.MACHINE_NAMES))
    q.add_argument("--rows", type=int, default=20)
    q.add_argument("--check", action="store_true")
    q.set_defaults(func=cmd_emulate)

    q = sub.add_parser("nw", help="polynomial-time direct simulation trace")
    q.add_argument("rtm")
    q.add_argument("--tm-steps", type=int, default=3)
    q.add_argument("--profile")
    q.set_defaults(func=cmd_nw)

    q = sub.add_parser("xcheck", help="lockstep cross-validation over a suite")
    q.add_argument("--suite", required=True)
    q.add_argument("--steps", type=int, default=20)
    q.add_argument("--report")
    q.set_defaults(func=cmd_xcheck)

    q = sub.add_parser("pipeline", help="run every pass from machine to state")
    q.add_argument("tm", nargs="?")
    q.add_argument("--config")
    q.add_argument("--from", dest="from_level", choices=["tm", "cts"], default="tm")
    q.add_argument("--cts")
    q.add_argument("-o", "--output", required=True)
    q.add_argument("--manifest")
    q.add_argument("--library")
    q.set_defaults(func=cmd_pipeline)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "pipeline":
        if args.from_level == "tm" and (not args.tm or not args.config):
            parser.error("pipeline from tm needs <tm> and --config")
        if args.from_level == "cts" and not args.cts:
            parser.error("pipeline --from cts needs --cts")
    try:
        args.func(args)
    except (InputError, formats.FormatError) as e:
        print(f"forge: input error: {e}", file=sys.stderr)
        raise SystemExit(INPUT_ERROR)
    except SystemExit:
        raise
    except (ValueError, RuntimeError) as e:
        print(f"forge: input error: {e}", file=sys.stderr)
        raise SystemExit(INPUT_ERROR)
    return 0


if __name__ == "__main__":
    sys.exit(main())

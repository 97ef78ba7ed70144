"""Command line front end.

Verbs::

    teleframe run FILE               replay every frame, check invariants
    teleframe census FILE            copy-census trajectory per frame
    teleframe paradox FILE           predicted vs conditioned outcomes
    teleframe check-identities --cases N --seed S

Global flags ``--format text|machine``, ``--seed S``, ``--tolerance T`` may
appear before or after the verb. Machine output is one JSON object per line;
see README for the field list.

Exit status: 0 ok, 1 invariant violation or degenerate frame, 2 parse error,
3 impossible conditioning.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import qcore, teleport
from .observer import (ObserverReport, ScenarioError, paradox_report, run_frame)
from .qcore import ImpossibleConditioningError
from .relativity import Frame
from .scenario import ScenarioFile, ScenarioFileError, load_scenario
from .teleport import B, BellBasis

EXIT_OK, EXIT_INVARIANT, EXIT_PARSE, EXIT_CONDITIONING = 0, 1, 2, 3


def num(x: float) -> float:
    """Round to 12 significant digits for stable, auditable output."""
    return float(f"{float(x):.12g}")


@dataclass
class RunResult:
    scenario: ScenarioFile
    reports: list
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def final_b_fidelity(report: ObserverReport) -> float:
    rho = qcore.partial_trace(report.final_state, [B])
    return qcore.fidelity(rho, report.psi)


def run_scenario(sf: ScenarioFile, basis: Optional[BellBasis] = None) -> RunResult:
    """Replay every frame of ``sf`` and collect invariant violations."""
    scenario = sf.teleport_scenario()
    tol = sf.tolerance
    reports = [run_frame(scenario, Frame(v), sf.geometry, basis) for v in sf.frames]
    result = RunResult(sf, reports)
    fail = result.failures.append

    for rep in reports:
        v = rep.frame.v
        for step in rep.steps:
            if step.record is not None and abs(sum(step.record.probabilities) - 1) > tol:
                fail(f"v={v} {step.event_id}: predicted distribution does not sum to 1")
            c = step.census
            if c.copy_count > 1 and not c.known_state_flag:
                fail(f"v={v} {step.event_id}: {c.copy_count} copies of an unknown state")
        if abs(final_b_fidelity(rep) - 1) > tol:
            fail(f"v={v}: final B fidelity {final_b_fidelity(rep):.12g} != 1")

    ref = reports[0].final_state
    for rep in reports[1:]:
        f = abs(ref.inner(rep.final_state)) ** 2
        if f < 1 - tol:
            fail(f"v={rep.frame.v}: final state differs from v={reports[0].frame.v} (fidelity {f:.12g})")
    return result


# machine-readable records

def census_record(c) -> dict:
    return {
        "copy_count": c.copy_count,
        "copies": list(c.copies),
        "known_state_flag": c.known_state_flag,
        "entries": [{"label": e.label, "fidelity": num(e.fidelity_with_psi),
                     "purity": num(e.purity), "is_copy": e.is_copy} for e in c.entries],
    }


def step_records(rep: ObserverReport) -> list:
    out = []
    for k, s in enumerate(rep.steps):
        rec = s.record
        out.append({
            "kind": "step",
            "frame_v": num(rep.frame.v),
            "index": k,
            "event_id": s.event_id,
            "action": s.action.value,
            "boosted_time": num(s.boosted_time),
            "census": census_record(s.census),
            "predicted": [num(p) for p in rec.probabilities] if rec else None,
            "actual_outcome": rec.outcome_index if rec else None,
            "predicted_actual": num(rec.predicted_probability) if rec else None,
            "forced": rec.forced if rec else None,
        })
    return out


def paradox_records(rep: ObserverReport) -> list:
    return [{"event_id": d.event_id, "action": d.action.value,
             "predicted": num(d.predicted_probability), "realized": num(d.realized_frequency)}
            for d in paradox_report(rep)]


def frame_record(rep: ObserverReport) -> dict:
    return {
        "kind": "frame",
        "frame_v": num(rep.frame.v),
        "order": rep.order,
        "census_trajectory": rep.census_trajectory,
        "final_b_fidelity": num(final_b_fidelity(rep)),
        "paradox": paradox_records(rep),
    }


def cross_frame_record(result: RunResult) -> dict:
    ref = result.reports[0]
    return {
        "kind": "cross_frame",
        "reference_v": num(ref.frame.v),
        "final_state_fidelity": [
            {"frame_v": num(r.frame.v), "fidelity": num(abs(ref.final_state.inner(r.final_state)) ** 2)}
            for r in result.reports],
        "census_trajectories": [
            {"frame_v": num(r.frame.v), "trajectory": r.census_trajectory} for r in result.reports],
    }


def scenario_record(sf: ScenarioFile) -> dict:
    return {
        "kind": "scenario",
        "psi": [[num(a.real), num(a.imag)] for a in sf.psi.amplitudes],
        "i0": sf.i0 if sf.i0 is not None else "sample",
        "resolved_i0": sf.teleport_scenario().resolved_i0(),
        "frames": [num(v) for v in sf.frames],
        "confirmation": sf.confirmation,
        "seed": sf.seed,
        "tolerance": sf.tolerance,
    }


def emit(obj: dict, out) -> None:
    out.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")


# text rendering

def _fmt_census(c) -> str:
    names = ",".join(c.copies) or "-"
    flag = " known" if c.known_state_flag else ""
    return f"copies={c.copy_count} [{names}]{flag}"


def text_report(rep: ObserverReport, out) -> None:
    out.write(f"frame v={rep.frame.v:g}\n")
    for s in rep.steps:
        line = f"  t'={s.boosted_time:+.6f}  {s.event_id:<14} {_fmt_census(s.census)}"
        if s.record is not None:
            probs = " ".join(f"{p:.12g}" for p in s.record.probabilities)
            tag = "forced" if s.record.forced else "sampled"
            line += f"  outcome={s.record.outcome_index} ({tag}) p={s.record.predicted_probability:.12g} dist=[{probs}]"
        out.write(line + "\n")
    out.write(f"  final B fidelity with psi: {final_b_fidelity(rep):.12g}\n")


def text_paradox(rep: ObserverReport, out) -> None:
    items = paradox_report(rep)
    out.write(f"frame v={rep.frame.v:g}: {len(items)} discrepancies\n")
    for d in items:
        out.write(f"  {d.event_id}: predicted {d.predicted_probability:.12g}, realized {d.realized_frequency:g}\n")


# identity checks

@dataclass
class IdentitySummary:
    cases: int
    tolerance: float
    reassembly: float = 0.0
    order_equivalence: float = 0.0
    teleport_fidelity: float = 0.0
    dennis_identity: float = 0.0

    def deviations(self) -> dict:
        return {"reassembly": self.reassembly, "order_equivalence": self.order_equivalence,
                "teleport_fidelity": self.teleport_fidelity, "dennis_identity": self.dennis_identity}

    @property
    def ok(self) -> bool:
        return all(d < self.tolerance for d in self.deviations().values())


def check_identities(cases: int, seed: int = 0, tolerance: float = qcore.ATOL,
                     basis: Optional[BellBasis] = None) -> IdentitySummary:
    """Max deviation of each protocol identity over ``cases`` seeded random psi."""
    basis = basis or teleport.standard_bell_basis()
    summary = IdentitySummary(cases, tolerance)
    for k in range(cases):
        psi = qcore.random_pure_state([seed, k], 1, ["psi"])
        try:
            initial = teleport.build_initial(psi, basis)
            branches = teleport.bell_branches(initial, basis)
            total = teleport.reassemble(branches)
            ov = np.vdot(total, initial.amplitudes)
            phase = ov / abs(ov) if abs(ov) > 0 else 1.0
            summary.reassembly = max(summary.reassembly,
                                     float(np.max(np.abs(phase * total - initial.amplitudes))))
            for i0 in teleport.OUTCOMES:
                _, carol = teleport.alice_measure(initial, basis, forced_i0=i0)
                carol = teleport.bob_correct(carol, basis, i0)
                pre = teleport.dennis_precorrect(initial, basis, i0)
                _, dennis = teleport.alice_measure(pre, basis, forced_i0=i0)
                summary.order_equivalence = max(summary.order_equivalence,
                                                1 - abs(carol.inner(dennis)) ** 2)
                for final in (carol, dennis):
                    f = qcore.fidelity(qcore.partial_trace(final, [B]), psi)
                    summary.teleport_fidelity = max(summary.teleport_fidelity, abs(1 - f))
                lhs, rhs = teleport.dennis_forms(psi, basis, i0)
                summary.dennis_identity = max(summary.dennis_identity,
                                              qcore.phase_aligned_deviation(lhs, rhs),
                                              qcore.phase_aligned_deviation(pre, rhs))
        except qcore.QuantumError:
            # a basis that cannot even run the protocol counts as maximal deviation
            summary.reassembly = summary.order_equivalence = float("inf")
            summary.teleport_fidelity = summary.dennis_identity = float("inf")
            break
    return summary


# argument handling

def _common_flags(defaults_suppressed: bool) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    d = argparse.SUPPRESS if defaults_suppressed else None
    p.add_argument("--format", choices=("text", "machine"),
                   default=d if defaults_suppressed else "text")
    p.add_argument("--seed", type=int, default=d)
    p.add_argument("--tolerance", type=float, default=d)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="teleframe", parents=[_common_flags(False)],
                                     description="Replay teleportation with superluminal signaling across Lorentz frames.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_flags(True)
    for name in ("run", "census", "paradox"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("file", type=Path)
        if name == "run":
            sp.add_argument("--out", type=Path, help="also write one JSONL report per frame here")
    sp = sub.add_parser("check-identities", parents=[common])
    sp.add_argument("--cases", type=int, default=100)
    return parser


def _cmd_run(args, out) -> int:
    sf = load_scenario(args.file, seed=args.seed, tolerance=args.tolerance)
    result = run_scenario(sf)
    machine = args.format == "machine"
    if machine:
        emit(scenario_record(sf), out)
        for rep in result.reports:
            for rec in step_records(rep):
                emit(rec, out)
            emit(frame_record(rep), out)
        emit(cross_frame_record(result), out)
        emit({"kind": "status", "ok": result.ok, "failures": result.failures}, out)
    else:
        for rep in result.reports:
            text_report(rep, out)
            text_paradox(rep, out)
        cross = cross_frame_record(result)
        for item in cross["final_state_fidelity"]:
            out.write(f"final-state fidelity v={item['frame_v']:g} vs v={cross['reference_v']:g}: {item['fidelity']:.12g}\n")
        for msg in result.failures:
            out.write(f"FAIL {msg}\n")
        out.write("OK\n" if result.ok else "INVARIANT VIOLATION\n")
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        for k, rep in enumerate(result.reports):
            with open(args.out / f"frame_{k}.jsonl", "w") as fh:
                for rec in step_records(rep):
                    emit(rec, fh)
                emit(frame_record(rep), fh)
        with open(args.out / "cross_frame.jsonl", "w") as fh:
            emit(cross_frame_record(result), fh)
    return EXIT_OK if result.ok else EXIT_INVARIANT


def _cmd_census(args, out) -> int:
    sf = load_scenario(args.file, seed=args.seed, tolerance=args.tolerance)
    result = run_scenario(sf)
    for rep in result.reports:
        if args.format == "machine":
            for s in rep.steps:
                emit({"kind": "census", "frame_v": num(rep.frame.v), "event_id": s.event_id,
                      "boosted_time": num(s.boosted_time), "census": census_record(s.census)}, out)
        else:
            out.write(f"frame v={rep.frame.v:g}: trajectory {rep.census_trajectory}\n")
            for s in rep.steps:
                out.write(f"  {s.event_id:<14} {_fmt_census(s.census)}\n")
    return EXIT_OK if result.ok else EXIT_INVARIANT


def _cmd_paradox(args, out) -> int:
    sf = load_scenario(args.file, seed=args.seed, tolerance=args.tolerance)
    result = run_scenario(sf)
    for rep in result.reports:
        if args.format == "machine":
            emit({"kind": "paradox", "frame_v": num(rep.frame.v), "discrepancies": paradox_records(rep)}, out)
        else:
            text_paradox(rep, out)
    return EXIT_OK if result.ok else EXIT_INVARIANT


def _cmd_identities(args, out, basis=None) -> int:
    if args.cases < 0:
        raise ScenarioFileError("--cases must be >= 0")
    tol = args.tolerance if args.tolerance is not None else qcore.ATOL
    summary = check_identities(args.cases, args.seed or 0, tol, basis)
    if args.format == "machine":
        emit({"kind": "identities", "cases": summary.cases, "tolerance": tol,
              "max_deviation": {k: num(v) for k, v in summary.deviations().items()},
              "ok": summary.ok}, out)
    else:
        if summary.cases == 0:
            out.write("0 cases: nothing checked (vacuous pass)\n")
        for name, dev in summary.deviations().items():
            verdict = "ok" if dev < tol else "FAIL"
            out.write(f"{name:<18} max deviation {dev:.3e}  {verdict}\n")
    return EXIT_OK if summary.ok else EXIT_INVARIANT


def main(argv=None, out=None, basis: Optional[BellBasis] = None) -> int:
    """Entry point. ``basis`` substitutes the Bell basis for check-identities (test hook)."""
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args, out)
        if args.command == "census":
            return _cmd_census(args, out)
        if args.command == "paradox":
            return _cmd_paradox(args, out)
        return _cmd_identities(args, out, basis)
    except ScenarioFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ImpossibleConditioningError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONDITIONING
    except (ScenarioError, qcore.QuantumError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())

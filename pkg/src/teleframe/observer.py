"""Frame-dependent replay of the teleportation protocol.

An observer sorts the protocol's events by their time in his frame and
updates his state assignment in that order. In the rest frame (Carol) Bob's
correction follows Alice's Bell measurement; in a fast enough frame (Dennis)
the correction comes first and acts on the unmeasured initial state.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

from . import qcore, teleport
from .qcore import MeasurementRecord, StateVector
from .relativity import REST, Frame, SignalChannel, SpacetimeEvent, boost, signal_arrival
from .teleport import A, A1, B, BellBasis, TeleportScenario

CENSUS_EPS = 1e-8
TIE_TOL = 1e-12


class ScenarioError(ValueError):
    """Ill-formed event list, e.g. two events simultaneous in the chosen frame."""


class Action(enum.Enum):
    PREPARE_INITIAL = "prepare_initial"
    ALICE_BELL_MEASUREMENT = "alice_bell_measurement"
    BOB_CORRECTION = "bob_correction"
    BOB_CONFIRMATION = "bob_confirmation"


@dataclass(frozen=True)
class ProtocolEvent:
    event: SpacetimeEvent
    action: Action

    @property
    def id(self) -> str:
        return self.event.id


@dataclass(frozen=True)
class Geometry:
    """Where and when things happen in the rest frame of Alice and Bob."""
    alice_x: float = 0.0
    bob_x: float = 2.0
    alice_measure_t: float = 1.0
    signal_speed: float = 2.0
    prepare_t: float = 0.0
    # confirmation happens this long after the correction (rest frame)
    confirmation_delay: float = 0.1


def build_events(geometry: Geometry = Geometry(), confirmation: bool = False,
                 signaling: bool = True) -> list:
    g = geometry
    prepare = SpacetimeEvent("prepare", g.prepare_t, g.alice_x)
    measure = SpacetimeEvent("alice_measure", g.alice_measure_t, g.alice_x)
    events = [ProtocolEvent(prepare, Action.PREPARE_INITIAL),
              ProtocolEvent(measure, Action.ALICE_BELL_MEASUREMENT)]
    if signaling:
        arrival = signal_arrival(measure, g.bob_x, SignalChannel(g.signal_speed), id="bob_correct")
        events.append(ProtocolEvent(arrival, Action.BOB_CORRECTION))
        if confirmation:
            confirm = SpacetimeEvent("bob_confirm", arrival.t + g.confirmation_delay, g.bob_x)
            events.append(ProtocolEvent(confirm, Action.BOB_CONFIRMATION))
    return events


def validate_events(events: Sequence[ProtocolEvent]) -> None:
    actions = [e.action for e in events]
    if actions.count(Action.PREPARE_INITIAL) != 1:
        raise ScenarioError("exactly one prepare_initial event is required")
    if actions.count(Action.ALICE_BELL_MEASUREMENT) > 1 or actions.count(Action.BOB_CORRECTION) > 1:
        raise ScenarioError("at most one Bell measurement and one correction")
    if Action.BOB_CONFIRMATION in actions and Action.BOB_CORRECTION not in actions:
        raise ScenarioError("confirmation needs a correction event")
    ids = [e.id for e in events]
    if len(set(ids)) != len(ids):
        raise ScenarioError("event ids must be unique")


def order_events(events: Sequence[ProtocolEvent], f: Frame) -> list:
    """Sort by boosted time; simultaneous events are a scenario error."""
    validate_events(events)
    timed = sorted(((boost(e.event, f).t, e) for e in events), key=lambda p: p[0])
    for (t1, e1), (t2, e2) in zip(timed, timed[1:]):
        if t2 - t1 <= TIE_TOL:
            raise ScenarioError(
                f"events {e1.id!r} and {e2.id!r} are simultaneous in frame v={f.v}")
    return [e for _, e in timed]


@dataclass(frozen=True)
class CensusEntry:
    label: str
    fidelity_with_psi: float
    purity: float
    is_copy: bool


@dataclass(frozen=True)
class CopyCensus:
    entries: tuple
    known_state_flag: bool = False

    @property
    def copy_count(self) -> int:
        return sum(e.is_copy for e in self.entries)

    @property
    def copies(self) -> tuple:
        return tuple(e.label for e in self.entries if e.is_copy)


def copy_census(s: StateVector, psi: StateVector, known_state_flag: bool = False,
                eps: float = CENSUS_EPS) -> CopyCensus:
    """Which single subsystems of ``s`` hold an exact copy of ``psi``."""
    entries = []
    for label in s.labels:
        rho = qcore.partial_trace(s, [label])
        fid = qcore.fidelity(rho, psi)
        pur = rho.purity()
        entries.append(CensusEntry(label, fid, pur, pur >= 1 - eps and fid >= 1 - eps))
    return CopyCensus(tuple(entries), known_state_flag)


@dataclass(frozen=True)
class ReplayStep:
    event_id: str
    action: Action
    boosted_time: float
    state: StateVector
    record: Optional[MeasurementRecord]
    census: CopyCensus


@dataclass(frozen=True)
class ObserverReport:
    frame: Frame
    steps: tuple
    psi: StateVector

    @property
    def final_state(self) -> StateVector:
        return self.steps[-1].state

    @property
    def census_trajectory(self) -> list:
        return [s.census.copy_count for s in self.steps]

    @property
    def order(self) -> list:
        return [s.event_id for s in self.steps]


def replay(events: Sequence[ProtocolEvent], scenario: TeleportScenario,
           basis: Optional[BellBasis] = None, frame: Frame = REST) -> ObserverReport:
    """Assign states step by step, in the order given, as the observer in ``frame`` would.

    Forced outcomes: a Bell measurement is conditioned on i0 whenever i0 is
    already fixed (by the scenario, or because Bob was seen correcting with
    it); otherwise it is sampled from the Born rule with the scenario seed.
    Bob's confirmation is always conditioned on "yes".
    """
    basis = basis or teleport.standard_bell_basis()
    psi = scenario.psi
    validate_events(events)
    times = [boost(e.event, frame).t for e in events]
    if any(t2 < t1 for t1, t2 in zip(times, times[1:])):
        raise ScenarioError(f"events are not in time order for frame v={frame.v}")

    state = None
    i0 = scenario.forced_i0
    measured = False
    known = False
    steps = []
    for ev, t in zip(events, times):
        record = None
        if ev.action is Action.PREPARE_INITIAL:
            state = teleport.build_initial(psi, basis)
        elif state is None:
            raise ScenarioError(f"event {ev.id!r} precedes state preparation in frame v={frame.v}")
        elif ev.action is Action.ALICE_BELL_MEASUREMENT:
            if i0 is None:
                record, state = teleport.alice_measure(state, basis, seed=scenario.seed)
                i0 = record.outcome_index
            else:
                record, state = teleport.alice_measure(state, basis, forced_i0=i0)
            measured = True
        elif ev.action is Action.BOB_CORRECTION:
            if i0 is None:
                i0 = scenario.resolved_i0()
            if measured:
                state = teleport.bob_correct(state, basis, i0)
            else:
                state = teleport.dennis_precorrect(state, basis, i0)
        elif ev.action is Action.BOB_CONFIRMATION:
            record, state = teleport.confirmation_measure(state, psi, forced_yes=True)
            known = True
        steps.append(ReplayStep(ev.id, ev.action, t, state, record,
                                copy_census(state, psi, known_state_flag=known)))
    return ObserverReport(frame, tuple(steps), psi)


def run_frame(scenario: TeleportScenario, frame: Frame, geometry: Geometry = Geometry(),
              basis: Optional[BellBasis] = None) -> ObserverReport:
    events = build_events(geometry, confirmation=scenario.confirmation_enabled)
    return replay(order_events(events, frame), scenario, basis, frame)


@dataclass(frozen=True)
class Discrepancy:
    event_id: str
    action: Action
    predicted_probability: float
    realized_frequency: float = 1.0


def paradox_report(r: ObserverReport) -> list:
    """Conditioned outcomes the observer assigned less than certainty to."""
    out = []
    for step in r.steps:
        rec = step.record
        if rec is not None and rec.forced and rec.predicted_probability < 1 - qcore.ATOL:
            out.append(Discrepancy(step.event_id, step.action, rec.predicted_probability))
    return out


__all__ = [
    "A", "A1", "B", "Action", "CopyCensus", "CensusEntry", "Discrepancy", "Geometry",
    "ObserverReport", "ProtocolEvent", "ReplayStep", "ScenarioError", "build_events",
    "copy_census", "order_events", "paradox_report", "replay", "run_frame",
]

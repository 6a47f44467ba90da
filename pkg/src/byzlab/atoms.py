"""Designated atomic propositions evaluated over run points."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .haps import (
    AgentId, ByzAction, ByzEvent, GExternal, GRecv, GSend, LocalHap, Run,
    Timestamp, is_fault_event, localize,
)


@dataclass(frozen=True)
class Correct:
    agent: AgentId
    at: Optional[Timestamp] = None


@dataclass(frozen=True)
class Faulty:
    agent: AgentId
    at: Optional[Timestamp] = None


@dataclass(frozen=True)
class Fake:
    agent: AgentId
    at: Timestamp
    hap: LocalHap


@dataclass(frozen=True)
class OccurredCorrectly:
    """occurred-correctly, in its three arities.

    agent=None quantifies over all agents; at=None over all rounds so far.
    """

    hap: LocalHap
    agent: Optional[AgentId] = None
    at: Optional[Timestamp] = None


@dataclass(frozen=True)
class Occurred:
    hap: LocalHap
    agent: AgentId


@dataclass(frozen=True)
class Happened:
    action: LocalHap
    agent: AgentId


@dataclass(frozen=True)
class FakeHappened:
    action: LocalHap
    agent: AgentId


@dataclass(frozen=True)
class Init:
    agent: AgentId
    state: str


DesignatedAtom = (Correct, Faulty, Fake, OccurredCorrectly, Occurred,
                  Happened, FakeHappened, Init)


def _no_fault_events(run: Run, agent: AgentId, upto: Timestamp) -> bool:
    env = run.states[upto].env
    return not any(
        is_fault_event(g) and g.agent == agent for rnd in env for g in rnd)


def _fake_reason(run: Run, agent: AgentId, t: Timestamp, o: LocalHap) -> bool:
    # A byzantine perception reason for o in round (t-1)-and-a-half.
    if t < 1 or t > run.horizon:
        return False
    for g in run.states[t].env[t - 1]:
        if isinstance(g, (ByzAction, ByzEvent)) and g.agent == agent:
            if localize(g) == o:
                return True
    return False


def _correct_reason(run: Run, agent: AgentId, t: Timestamp, o: LocalHap) -> bool:
    # A correct perception reason: delivered/external event or own action.
    if t < 1 or t > run.horizon:
        return False
    for g in run.states[t].env[t - 1]:
        if isinstance(g, (GRecv, GExternal, GSend)) and g.agent == agent:
            if localize(g) == o:
                return True
    return False


def eval_atom(run: Run, t_eval: Timestamp, atom) -> bool:
    """Evaluate a designated atom at (run, t_eval).

    Raises ValueError when t_eval or an explicit time parameter is out of
    the admissible range.
    """
    if not 0 <= t_eval <= run.horizon:
        raise ValueError(f"evaluation time {t_eval} outside run horizon")

    if isinstance(atom, (Correct, Faulty)):
        t = t_eval if atom.at is None else atom.at
        if not 0 <= t <= t_eval:
            raise ValueError(f"atom time {t} exceeds evaluation time {t_eval}")
        ok = _no_fault_events(run, atom.agent, t)
        return ok if isinstance(atom, Correct) else not ok

    if isinstance(atom, Fake):
        if not 1 <= atom.at <= t_eval:
            raise ValueError(f"atom time {atom.at} exceeds evaluation time")
        return _fake_reason(run, atom.agent, atom.at, atom.hap)

    if isinstance(atom, OccurredCorrectly):
        agents = [atom.agent] if atom.agent is not None else \
            range(1, len(run.states[0].locals) + 1)
        if atom.at is not None:
            if not 1 <= atom.at <= t_eval:
                raise ValueError(f"atom time {atom.at} exceeds evaluation time")
            times = [atom.at]
        else:
            times = range(1, t_eval + 1)
        return any(_correct_reason(run, i, m, atom.hap)
                   for i in agents for m in times)

    if isinstance(atom, Occurred):
        return any(
            _correct_reason(run, atom.agent, m, atom.hap)
            or _fake_reason(run, atom.agent, m, atom.hap)
            for m in range(1, t_eval + 1))

    if isinstance(atom, (Happened, FakeHappened)):
        # Per the action bullets these scan the environment history at
        # t_eval - 1, i.e. rounds strictly before the previous timestamp.
        if t_eval == 0:
            return False
        env = run.states[t_eval - 1].env
        for rnd in env:
            for g in rnd:
                if isinstance(g, GSend) and g.agent == atom.agent \
                        and not isinstance(atom, FakeHappened):
                    if localize(g) == atom.action:
                        return True
                if isinstance(g, ByzAction) and g.agent == atom.agent \
                        and g.performed is not None:
                    if localize(g.performed) == atom.action:
                        return True
        return False

    if isinstance(atom, Init):
        return run.states[0].local(atom.agent).initial == atom.state

    raise TypeError(f"not a designated atom: {atom!r}")

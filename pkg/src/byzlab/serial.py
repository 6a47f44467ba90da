"""Canonical textual serialization of haps, histories and states.

Local haps serialize as JSON arrays:

    ["send", to, msg, copy]      ["recv", from, msg]      ["ext", event]

Global haps:

    ["gsend", agent, to, msg, copy, sent_at]
    ["grecv", agent, from, msg, gmi-or-null]   gmi = [i, j, msg, copy, t]
    ["gext", agent, event]
    ["byz_action", agent, gsend-or-null, gsend-or-null]
    ["byz_event", agent, event]
    ["go", agent]  ["sleep", agent]  ["hib", agent]  ["fail", agent]

Sets of haps serialize as sorted arrays, so equal sets always produce
identical text.
"""

from __future__ import annotations

import json
from typing import Optional

from .haps import (
    ByzAction, ByzEvent, External, GExternal, GMI, GRecv, GSend, GlobalHap,
    GlobalState, Go, Hib, LocalHap, LocalHistory, Recv, Run, Send, Sleep,
)


def local_to_json(a: LocalHap) -> list:
    if isinstance(a, Send):
        return ["send", a.to, a.msg, a.copy]
    if isinstance(a, Recv):
        return ["recv", a.frm, a.msg]
    if isinstance(a, External):
        return ["ext", a.event]
    raise TypeError(f"not a local hap: {a!r}")


def local_from_json(v: list) -> LocalHap:
    kind = v[0]
    if kind == "send":
        copy = v[3] if len(v) > 3 else 0
        return Send(v[1], v[2], copy)
    if kind == "recv":
        return Recv(v[1], v[2])
    if kind == "ext":
        return External(v[1])
    raise ValueError(f"unknown local hap kind {kind!r}")


def _gmi_to_json(g: Optional[GMI]):
    return None if g is None else [g.sender, g.receiver, g.msg, g.copy, g.sent_at]


def _gmi_from_json(v) -> Optional[GMI]:
    return None if v is None else GMI(v[0], v[1], v[2], v[3], v[4])


def ghap_to_json(g: GlobalHap) -> list:
    if isinstance(g, GSend):
        return ["gsend", g.agent, g.to, g.msg, g.copy, g.sent_at]
    if isinstance(g, GRecv):
        return ["grecv", g.agent, g.frm, g.msg, _gmi_to_json(g.gmi)]
    if isinstance(g, GExternal):
        return ["gext", g.agent, g.event]
    if isinstance(g, ByzAction):
        if g.performed is None and g.recorded is None:
            return ["fail", g.agent]
        return ["byz_action", g.agent,
                None if g.performed is None else ghap_to_json(g.performed),
                None if g.recorded is None else ghap_to_json(g.recorded)]
    if isinstance(g, ByzEvent):
        return ["byz_event", g.agent, ghap_to_json(g.event)]
    if isinstance(g, Go):
        return ["go", g.agent]
    if isinstance(g, Sleep):
        return ["sleep", g.agent]
    if isinstance(g, Hib):
        return ["hib", g.agent]
    raise TypeError(f"not a global hap: {g!r}")


def ghap_from_json(v: list) -> GlobalHap:
    kind = v[0]
    if kind == "gsend":
        return GSend(v[1], v[2], v[3], v[4], v[5])
    if kind == "grecv":
        return GRecv(v[1], v[2], v[3], _gmi_from_json(v[4]) if len(v) > 4 else None)
    if kind == "gext":
        return GExternal(v[1], v[2])
    if kind == "fail":
        return ByzAction(v[1], None, None)
    if kind == "byz_action":
        return ByzAction(v[1],
                         None if v[2] is None else ghap_from_json(v[2]),
                         None if v[3] is None else ghap_from_json(v[3]))
    if kind == "byz_event":
        return ByzEvent(v[1], ghap_from_json(v[2]))
    if kind == "go":
        return Go(v[1])
    if kind == "sleep":
        return Sleep(v[1])
    if kind == "hib":
        return Hib(v[1])
    raise ValueError(f"unknown global hap kind {kind!r}")


def ghap_key(g: GlobalHap) -> str:
    return json.dumps(ghap_to_json(g), separators=(",", ":"))


def local_key(a: LocalHap) -> str:
    return json.dumps(local_to_json(a), separators=(",", ":"))


def hapset_to_json(haps, to_json) -> list:
    return sorted((to_json(h) for h in haps),
                  key=lambda v: json.dumps(v, separators=(",", ":")))


def history_to_json(h: LocalHistory) -> dict:
    return {"initial": h.initial,
            "rounds": [hapset_to_json(rnd, local_to_json) for rnd in h.rounds]}


def history_from_json(v: dict) -> LocalHistory:
    return LocalHistory(
        v["initial"],
        tuple(frozenset(local_from_json(a) for a in rnd) for rnd in v["rounds"]))


def state_to_json(s: GlobalState) -> dict:
    return {"env": [hapset_to_json(rnd, ghap_to_json) for rnd in s.env],
            "locals": [history_to_json(h) for h in s.locals]}


def run_to_json(r: Run) -> list:
    return [state_to_json(s) for s in r.states]

"""Round transitions: coherence, filters, the five-phase step, enumeration.

A round from timestamp t to t+1 runs through protocol, adversary,
labeling, filtering and updating phases.  `enumerate_runs` explores every
adversary choice exhaustively up to the context horizon; `seeded_run`
resolves each choice point deterministically from a seed.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Dict, List, Optional

from .haps import (
    AgentId, ByzAction, ByzEvent, GExternal, GRecv, GSend,
    GlobalState, Go, Hib, Run, Sleep, Timestamp, fail,
    initial_state, is_fault_event, update_agent,
    update_env,
)
from .protocols import AgentProtocol, EnvProtocol, fault_alphabet, _subsets
from .serial import ghap_key, local_key


class CapExceeded(Exception):
    """Raised when enumeration would explore more nodes than allowed."""


@dataclass(frozen=True)
class AgentContext:
    """Environment protocol, joint protocol, initial states and template."""

    n: AgentId
    env: EnvProtocol
    protocols: tuple  # AgentProtocol per agent, index agent-1
    initials: tuple   # tuple of per-agent initial-state-id tuples
    template: str = "Bf"  # "B" or "Bf"
    f: int = 0
    horizon: Timestamp = 1
    node_cap: int = 10 ** 6

    def protocol(self, agent: AgentId) -> AgentProtocol:
        return self.protocols[agent - 1]


# ---------------------------------------------------------------------------
# Coherence

def check_t_coherent(S: frozenset, t: Timestamp) -> bool:
    """The five mutual-compatibility conditions on a round's event set."""
    recvs = set()      # (receiver, sender, msg) with a correct delivery
    fake_recvs = set()
    exts = set()
    fake_exts = set()
    sys_seen = set()
    for g in S:
        if isinstance(g, ByzAction) and g.performed is not None:
            if g.performed.sent_at != t:
                return False
        if isinstance(g, (Go, Sleep, Hib)):
            if g.agent in sys_seen:
                return False
            sys_seen.add(g.agent)
        if isinstance(g, GExternal):
            exts.add((g.agent, g.event))
        if isinstance(g, ByzEvent):
            ev = g.event
            if isinstance(ev, GExternal):
                fake_exts.add((g.agent, ev.event))
            elif isinstance(ev, GRecv):
                fake_recvs.add((ev.agent, ev.frm, ev.msg))
        if isinstance(g, GRecv):
            recvs.add((g.agent, g.frm, g.msg))
    if exts & fake_exts:
        return False
    if recvs & fake_recvs:
        return False
    return True


# ---------------------------------------------------------------------------
# Filters

def _sends_in_history(state: GlobalState):
    for rnd in state.env:
        for g in rnd:
            if isinstance(g, GSend):
                yield g
            elif isinstance(g, ByzAction) and g.performed is not None:
                yield g.performed


def _sends_in_round(X_eps: frozenset, alphas):
    for X_i in alphas:
        yield from X_i
    for g in X_eps:
        if isinstance(g, ByzAction) and g.performed is not None:
            yield g.performed


def filter_env_B(state: GlobalState, X_eps: frozenset, alphas) -> frozenset:
    """Causality filter: drop correct deliveries with no matching send."""
    issued = {s.gmi for s in _sends_in_history(state)}
    issued |= {s.gmi for s in _sends_in_round(X_eps, alphas)}
    return frozenset(
        g for g in X_eps
        if not isinstance(g, GRecv) or g.gmi in issued)


def _ever_faulty(state: GlobalState) -> frozenset:
    return frozenset(g.agent for rnd in state.env for g in rnd
                     if is_fault_event(g))


def filter_env_Bf(state: GlobalState, X_eps: frozenset, alphas,
                  f: int) -> frozenset:
    """Causality plus fault budget: strip the round's fault events when
    keeping them would push the count of ever-faulty agents beyond f.

    Sleep and hibernate brand an agent faulty just like byzantine events,
    so they count against (and are removed with) the budget.
    """
    beta = filter_env_B(state, X_eps, alphas)
    would_be = _ever_faulty(state) | {g.agent for g in beta if is_fault_event(g)}
    if len(would_be) > f:
        beta = frozenset(g for g in beta if not is_fault_event(g))
    return beta


def filter_action_std(agent: AgentId, alphas, beta_eps: frozenset) -> frozenset:
    """Standard action filter: actions pass only when go(i) was granted."""
    X_i = alphas[agent - 1]
    return X_i if Go(agent) in beta_eps else frozenset()


# ---------------------------------------------------------------------------
# Delivery template materialization

def _materialize(state: GlobalState, X_eps: frozenset, alphas) -> frozenset:
    """Resolve GMI-less delivery templates against actual sends.

    A template grecv(i, j, mu) binds to the earliest matching send not yet
    delivered to i, falling back to the earliest matching send at all.
    Unresolvable templates stay unresolved and die in the causality filter.
    """
    out = set()
    delivered = {g.gmi for rnd in state.env for g in rnd
                 if isinstance(g, GRecv) and g.gmi is not None}
    candidates = sorted(
        set(_sends_in_history(state)) | set(_sends_in_round(X_eps, alphas)),
        key=lambda s: (s.sent_at, s.copy, s.agent, s.to, s.msg))
    for g in X_eps:
        if isinstance(g, GRecv) and g.gmi is None:
            matches = [s for s in candidates
                       if s.agent == g.frm and s.to == g.agent and s.msg == g.msg]
            fresh = [s for s in matches if s.gmi not in delivered]
            pick = (fresh or matches or [None])[0]
            if pick is not None:
                out.add(GRecv(g.agent, g.frm, g.msg, pick.gmi))
            else:
                out.add(g)
        else:
            out.add(g)
    return frozenset(out)


# ---------------------------------------------------------------------------
# The five-phase step

def step(ctx: AgentContext, state: GlobalState, t: Timestamp,
         env_choice: frozenset, agent_choices, validate: bool = True) -> GlobalState:
    """Execute one round given the adversary's choices."""
    if validate:
        if env_choice not in ctx.env(t):
            raise ValueError(f"environment choice not offered at t={t}")
        for i in range(1, ctx.n + 1):
            if frozenset(agent_choices[i - 1]) not in ctx.protocol(i)(state.local(i)):
                raise ValueError(f"agent {i} choice outside protocol range")

    # Labeling: local actions to global format with GMIs.
    alphas = [frozenset(GSend(i, a.to, a.msg, a.copy, t)
                        for a in agent_choices[i - 1])
              for i in range(1, ctx.n + 1)]
    alpha_eps = _materialize(state, env_choice, alphas)

    # Event filtering.
    if ctx.template == "Bf":
        beta_eps = filter_env_Bf(state, alpha_eps, alphas, ctx.f)
    else:
        beta_eps = filter_env_B(state, alpha_eps, alphas)

    # Action filtering.
    betas = [filter_action_std(i, alphas, beta_eps) for i in range(1, ctx.n + 1)]

    # Updating.
    env = update_env(state.env, beta_eps, betas)
    locs = tuple(update_agent(state.local(i), i, betas[i - 1], beta_eps)
                 for i in range(1, ctx.n + 1))
    return GlobalState(env, locs)


# ---------------------------------------------------------------------------
# Exhaustive enumeration

def _choice_space(ctx: AgentContext, state: GlobalState, t: Timestamp):
    """Deterministically ordered (env_choice, per-agent choices) pairs."""
    env_opts = sorted(ctx.env(t), key=_env_key)
    agent_opts = []
    for i in range(1, ctx.n + 1):
        opts = sorted(ctx.protocol(i)(state.local(i)), key=_local_set_key)
        agent_opts.append(opts)
    return env_opts, agent_opts


def _env_key(X: frozenset) -> str:
    return "|".join(sorted(ghap_key(g) for g in X))


def _local_set_key(D: frozenset) -> str:
    return "|".join(sorted(local_key(a) for a in D))


def enumerate_runs(ctx: AgentContext, cap: Optional[int] = None) -> List[Run]:
    """All transitional runs of length horizon+1, in deterministic order."""
    cap = ctx.node_cap if cap is None else cap
    runs: List[Run] = []
    explored = 0

    def walk(prefix: List[GlobalState], t: Timestamp):
        nonlocal explored
        if t == ctx.horizon:
            runs.append(Run(tuple(prefix)))
            return
        env_opts, agent_opts = _choice_space(ctx, prefix[-1], t)
        for env_choice in env_opts:
            for combo in _product(agent_opts):
                explored += 1
                if explored > cap:
                    raise CapExceeded(
                        f"enumeration exceeded {cap} explored nodes")
                nxt = step(ctx, prefix[-1], t, env_choice, combo, validate=False)
                prefix.append(nxt)
                walk(prefix, t + 1)
                prefix.pop()

    for initials in ctx.initials:
        walk([initial_state(initials)], 0)
    return runs


def _product(option_lists):
    if not option_lists:
        yield []
        return
    head, *rest = option_lists
    for opt in head:
        for tail in _product(rest):
            yield [opt] + tail


def count_choice_tree(ctx: AgentContext) -> int:
    """Independent recursive count of adversary choice-tree leaves."""
    def count(state: GlobalState, t: Timestamp) -> int:
        if t == ctx.horizon:
            return 1
        env_opts, agent_opts = _choice_space(ctx, state, t)
        total = 0
        for env_choice in env_opts:
            for combo in _product(agent_opts):
                total += count(step(ctx, state, t, env_choice, combo,
                                    validate=False), t + 1)
        return total

    return sum(count(initial_state(ins), 0) for ins in ctx.initials)


# ---------------------------------------------------------------------------
# Seeded adversary

def _pick(seed: int, t: Timestamp, point: int, n_options: int) -> int:
    digest = hashlib.sha256(f"{seed}|{t}|{point}".encode()).digest()
    return int.from_bytes(digest[:8], "big") % n_options


def seeded_run(ctx: AgentContext, seed: int) -> Run:
    """One run with every nondeterministic choice resolved from the seed."""
    initials = ctx.initials[_pick(seed, -1, 0, len(ctx.initials))]
    state = initial_state(initials)
    states = [state]
    for t in range(ctx.horizon):
        env_opts, agent_opts = _choice_space(ctx, state, t)
        env_choice = env_opts[_pick(seed, t, 0, len(env_opts))]
        combo = [opts[_pick(seed, t, 1 + i, len(opts))]
                 for i, opts in enumerate(agent_opts)]
        state = step(ctx, state, t, env_choice, combo, validate=False)
        states.append(state)
    return Run(tuple(states))


# ---------------------------------------------------------------------------
# Closure properties of the environment protocol

def check_closure_properties(ctx: AgentContext) -> Dict[AgentId, Dict[str, bool]]:
    """Check fallible/correctable/delayable/gullible per agent, all t."""
    report = {i: {"fallible": True, "correctable": True,
                  "delayable": True, "gullible": True}
              for i in range(1, ctx.n + 1)}
    for t in range(ctx.horizon):
        menu = set(ctx.env(t))
        alpha = fault_alphabet(menu, ctx.n)
        for X in menu:
            for i in range(1, ctx.n + 1):
                if X | {fail(i)} not in menu:
                    report[i]["fallible"] = False
                no_faults = frozenset(
                    g for g in X if not (is_fault_event(g) and g.agent == i))
                if no_faults not in menu:
                    report[i]["correctable"] = False
                stripped = frozenset(g for g in X if g.agent != i)
                if stripped not in menu:
                    report[i]["delayable"] = False
                for Y in _subsets(alpha[i]):
                    cand = stripped | Y
                    if check_t_coherent(cand, t) and cand not in menu:
                        report[i]["gullible"] = False
                        break
    return report

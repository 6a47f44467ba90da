from hypothesis import given, strategies as st

from byzlab.haps import (
    External, GExternal, GRecv, GSend, Go, LocalHistory, Recv, Send, Sleep,
    decode_gmi, fail, globalize, initial_state, localize, make_gmi, perceived,
    replay_local, update_agent, update_env,
)

agents = st.integers(min_value=1, max_value=5)
msgs = st.text(alphabet="abc", min_size=1, max_size=3)


@given(agents, agents, msgs, st.integers(0, 3), st.integers(0, 4))
def test_gmi_roundtrip(i, j, mu, copy, t):
    gmi = make_gmi(i, j, mu, copy, t)
    assert decode_gmi(gmi) == (i, j, mu, copy, t)


@given(agents, agents, msgs, st.integers(0, 3), st.integers(0, 4),
       agents, agents, msgs, st.integers(0, 3), st.integers(0, 4))
def test_gmi_injective(i1, j1, m1, c1, t1, i2, j2, m2, c2, t2):
    same = (i1, j1, m1, c1, t1) == (i2, j2, m2, c2, t2)
    assert (make_gmi(i1, j1, m1, c1, t1) == make_gmi(i2, j2, m2, c2, t2)) == same


def test_localize_strips_global_detail():
    s = GSend(1, 2, "m", 0, 3)
    assert localize(s) == Send(2, "m")
    d = GRecv(2, 1, "m", s.gmi)
    assert localize(d) == Recv(1, "m")
    assert localize(GExternal(3, "quake")) == External("quake")
    # system events leave no local record
    assert localize(Go(1)) is None
    assert localize(Sleep(1)) is None


def test_globalize_tags_sender_and_time():
    g = globalize(1, 4, Send(2, "m", 1))
    assert g == GSend(1, 2, "m", 1, 4)


def test_perceived_drops_system_events():
    s = GSend(1, 2, "m", 0, 0)
    X = frozenset({Go(1), Sleep(2), s, GExternal(1, "e")})
    assert perceived(X) == frozenset({Send(2, "m"), External("e")})


def test_update_agent_round_rules():
    h = LocalHistory("init")
    # nothing perceived, no activation: history untouched
    assert update_agent(h, 1, frozenset(), frozenset()) is h
    # go with nothing perceived: empty marker round
    h2 = update_agent(h, 1, frozenset(), frozenset({Go(1)}))
    assert h2.rounds == (frozenset(),)
    # events for other agents never leak in
    h3 = update_agent(h, 1, frozenset(),
                      frozenset({GExternal(2, "e"), GExternal(1, "f")}))
    assert h3.rounds == (frozenset({External("f")}),)


def test_history_membership_and_prefix():
    h = LocalHistory("s", (frozenset({External("a")}), frozenset({External("b")})))
    assert External("a") in h and External("b") in h
    assert External("c") not in h
    assert h.prefix(1).rounds == (frozenset({External("a")}),)
    assert h.active_rounds == 2


def test_replay_matches_incremental_update():
    env = ()
    s = GSend(1, 2, "m", 0, 0)
    rounds = [
        frozenset({Go(1), s}),
        frozenset({Go(2), GRecv(2, 1, "m", s.gmi)}),
    ]
    state = initial_state(("a", "b"))
    locals_ = list(state.locals)
    for t, rnd in enumerate(rounds):
        X_eps = frozenset(g for g in rnd if not isinstance(g, GSend))
        actions = [frozenset(g for g in rnd
                             if isinstance(g, GSend) and g.agent == i)
                   for i in (1, 2)]
        env = update_env(env, X_eps, actions)
        locals_ = [update_agent(locals_[i - 1], i, actions[i - 1], X_eps)
                   for i in (1, 2)]
    for i in (1, 2):
        assert replay_local(i, env, state.locals[i - 1].initial) == locals_[i - 1]


def test_fail_is_the_empty_byzantine_action():
    g = fail(2)
    assert g.agent == 2 and g.performed is None and g.recorded is None
    assert localize(g) is None

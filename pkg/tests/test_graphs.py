import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cvbqc.algebra import ByproductFrame, GateWord, ParamVector, PhaseQ, parse_word, to_symplectic, word_equal_up_to_byproduct
from cvbqc.algebra.params import ObservablePoly
from cvbqc.backends import FockState, fidelity, make_squeezed_vacuum
from cvbqc.exceptions import CapacityError, CycleError, NoEmbedding
from cvbqc.graphs import (
    BrickworkLayout,
    ModeGraph,
    audit_schedule,
    brick_pattern,
    build_graph_state,
    carve_fidelity,
    disconnector_mutual_information,
    execute_plan,
    hair_plan,
    hide_graph,
    hiding_report,
    implant_hairs,
    path_graph,
    single_brick_layout,
    temporal_schedule,
)
from cvbqc.graphs.hair import hair_gadgets

P = parse_word


# --- ModeGraph -------------------------------------------------------------

def test_modegraph_rejects_bad_edges():
    with pytest.raises(ValueError):
        ModeGraph(nodes=[0], edges={(0, 0): 1})
    with pytest.raises(ValueError):
        ModeGraph(nodes=[0, 1], edges=[(0, 1, 1), (1, 0, -1)])
    with pytest.raises(ValueError):
        ModeGraph(nodes=[0, 1], edges={(0, 1): 2})


def test_modegraph_json_roundtrip(tmp_path):
    g = single_brick_layout().graph()
    g2 = ModeGraph.from_json(g.to_json())
    assert g2.to_dict() == g.to_dict()
    g.save(tmp_path / "g.json")
    assert ModeGraph.load(tmp_path / "g.json").edges == g.edges


def test_order_must_respect_feed_forward():
    with pytest.raises(CycleError):
        ModeGraph(nodes=[0, 1, 2], edges={(0, 1): 1, (1, 2): 1}, outputs=[2], order=[1, 0], flow={0: 1, 1: 2})


def test_cyclic_flow():
    with pytest.raises(CycleError):
        ModeGraph(nodes=[0, 1], edges={(0, 1): 1}, flow={0: 1, 1: 0})


# --- graph states ----------------------------------------------------------

def test_single_node_graph_is_squeezed_vacuum():
    s = build_graph_state(ModeGraph(nodes=[7]), omega=0.5)
    np.testing.assert_allclose(s.cov, make_squeezed_vacuum(0.5).cov)


def test_two_node_closed_form():
    om = 0.5
    s = build_graph_state(ModeGraph(nodes=[0, 1], edges={(0, 1): 1}), omega=om)
    vq, vp = 1 / (2 * om**2), om**2 / 2
    # p_i -> p_i + q_j
    expected = np.array([[vq, 0, 0, vq], [0, vp + vq, vq, 0], [0, vq, vq, 0], [vq, 0, 0, vp + vq]])
    np.testing.assert_allclose(s.cov, expected, atol=1e-12)


def test_cz_then_czdag_is_product():
    s = build_graph_state(ModeGraph(nodes=[0, 1], edges={(0, 1): 1}), omega=0.5)
    back = s.apply_word(P("CZd@0,1"))
    np.testing.assert_allclose(back.cov, make_squeezed_vacuum(0.5, n_modes=2).cov, atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.permutations(list(range(10))))
def test_edge_order_independent(perm):
    g = single_brick_layout().graph()
    edges = list(g.edges)
    a = build_graph_state(g, omega=0.6)
    b = build_graph_state(g, omega=0.6, edge_order=[edges[i] for i in perm])
    np.testing.assert_allclose(a.cov, b.cov, atol=1e-9)


def test_fock_capacity():
    with pytest.raises(CapacityError):
        build_graph_state(path_graph(5), backend="fock", cutoff=8, omega=1.0)


# --- brickwork -------------------------------------------------------------

def test_brickwork_geometry():
    layout = BrickworkLayout(4, 8)
    assert layout.bricks() == [(0, 0), (2, 0), (1, 4)]
    g = layout.graph()
    assert g.sign(layout.node(1, 6), layout.node(2, 6)) == 1
    assert g.sign(layout.node(1, 8), layout.node(2, 8)) == -1
    assert len(g.outputs) == 4 and len(g.order) == 4 * 8


def test_brick_zero_pattern_is_identity():
    pat = brick_pattern("sq", ParamVector())
    ok, frame = word_equal_up_to_byproduct(pat.word(), GateWord(2))
    assert ok and frame.is_identity


def test_brick_sq_random():
    rng = np.random.default_rng(0)
    for _ in range(50):
        v = ParamVector(*rng.uniform(-1.5, 1.5, 2), 0.0)
        pat = brick_pattern("sq", v)
        w = pat.word(rng.normal(size=(2, 4)), ByproductFrame(rng.normal(size=2), rng.normal(size=2)))
        ok, _ = word_equal_up_to_byproduct(w, pat.target())
        assert ok


def test_brick_cx_exact():
    pat = brick_pattern("cx")
    ok, frame = word_equal_up_to_byproduct(pat.word(), pat.target())
    assert ok and frame.is_identity
    assert to_symplectic(pat.word()).allclose(to_symplectic(pat.target()), tol=1e-9)


def test_stacked_bricks_fuse():
    rng = np.random.default_rng(1)
    v1 = ParamVector(*rng.normal(size=2), 0.0)
    v2 = ParamVector(*rng.normal(size=2), 0.0)
    w = brick_pattern("sq", v2).word() * brick_pattern("sq", v1).word()
    ok, _ = word_equal_up_to_byproduct(w, GateWord(2, (PhaseQ(0, v1 + v2),)))
    assert ok


def test_unknown_brick():
    with pytest.raises(ValueError):
        brick_pattern("swap")


# --- hair ------------------------------------------------------------------

def test_implant_hairs_sizes():
    assert implant_hairs(ModeGraph()).n_nodes == 0
    g = implant_hairs(ModeGraph(nodes=[0], outputs=[0]))
    assert g.n_nodes == 5
    (gadget,) = hair_gadgets(ModeGraph(nodes=[0]))
    path = (0,) + gadget.chain
    assert set(g.edges) == {tuple(sorted(p)) for p in zip(path, path[1:])}


def test_hair_plan_roles():
    g = ModeGraph(nodes=[0, 1, 2], edges={(0, 1): 1, (1, 2): 1}, outputs=[0, 2])
    graph, roles, params = hair_plan(g, carve=[1])
    (_, mid, _) = hair_gadgets(g)
    assert [graph.flow[n] for n in (1,) + mid.chain[:3]] == list(mid.chain)
    assert roles[mid.chain[3]].kind == "readout"
    assert dict(roles[mid.chain[3]].kicks) == {0: 1, 2: 1}
    assert all(n in graph.order for n in mid.chain)


def test_carve_converges():
    f = [carve_fidelity(om) for om in (0.5, 0.3, 0.1)]
    assert f[1] >= 0.95
    assert f[0] < f[1] < f[2]


# --- hiding ----------------------------------------------------------------

def test_hide_identity_embedding():
    g = path_graph(3)
    spec = hide_graph(g, g)
    assert spec.disconnectors == [] and spec.corrections == {}


def test_hide_three_path():
    host = ModeGraph(nodes=[0, 1, 2], edges={(0, 1): 1, (1, 2): -1}, outputs=[0, 1, 2])
    spec = hide_graph(ModeGraph(nodes=[0, 2], outputs=[0, 2]), host, s_values={1: 0.7})
    assert spec.disconnectors == [1]
    assert spec.corrections == {0: 0.7, 2: -0.7}
    assert spec.logical.edges == {}


def test_hide_no_embedding():
    host = path_graph(3)
    with pytest.raises(NoEmbedding):
        hide_graph(ModeGraph(nodes=[0, 2], edges={(0, 2): 1}, outputs=[0, 2]), host)
    with pytest.raises(NoEmbedding):
        hide_graph(ModeGraph(nodes=[0, 9], outputs=[0, 9]), host)


def test_disconnector_mutual_information_decays():
    mi = [disconnector_mutual_information(oq) for oq in (1.0, 0.3, 0.1)]
    assert mi[0] > mi[1] > mi[2]
    assert mi[2] < 0.05


def test_hiding_converges_to_logical():
    host = ModeGraph(nodes=[0, 1, 2, 3], edges={(0, 1): 1, (1, 2): 1, (2, 3): 1}, outputs=[0, 1, 2, 3])
    spec = hide_graph(ModeGraph(nodes=[0, 2, 3], edges={(2, 3): 1}, outputs=[0, 2, 3]), host, np.random.default_rng(3))
    upper = [hiding_report(spec, 0.6, oq)["trace_distance_upper"] for oq in (1.0, 0.3, 0.1, 0.03)]
    assert all(a > b for a, b in zip(upper, upper[1:]))


# --- temporal schedule -----------------------------------------------------

def test_single_edge_schedule():
    g = ModeGraph(nodes=[0, 1], edges={(0, 1): 1}, flow={0: 1})
    assert [op["op"] for op in temporal_schedule(g)] == ["prepare", "prepare", "cz", "measure", "measure"]


def test_path_schedule_spreads_cz():
    plan = temporal_schedule(path_graph(4))
    ops = [op["op"] for op in plan]
    assert ops.count("cz") == 3
    assert all(not (a == b == "cz") for a, b in zip(ops, ops[1:]))
    assert audit_schedule(path_graph(4), plan)["ok"]


def test_brickwork_schedule_counts():
    g = single_brick_layout().graph()
    plan = temporal_schedule(g)
    assert len(plan) == g.n_nodes + len(g.edges) + g.n_nodes
    report = audit_schedule(g, plan)
    assert report["ok"] and report["max_live_modes"] == 3


def test_audit_catches_reordering():
    g = path_graph(3)
    plan = temporal_schedule(g)
    bad = [op for op in plan if op["op"] != "cz"]
    assert not audit_schedule(g, bad)["ok"]


def _replay_pair(graph, omega=0.8, cutoff=18, seed=0):
    rng = np.random.default_rng(seed)
    params = {n: ParamVector(*rng.uniform(-0.5, 0.5, 2), 0.0) for n in graph.order}
    outcomes = {n: float(rng.normal(scale=0.5)) for n in graph.order}

    def measure(node, state, k):
        post, _ = state.project(k, outcomes[node], ObservablePoly(params[node]))
        return post

    plan = temporal_schedule(graph)
    streamed, live, _ = execute_plan(plan, lambda n: FockState.squeezed_vacuum(omega, cutoff), measure)
    batch = build_graph_state(graph, "fock", omega, cutoff)
    live_b = list(graph.nodes)
    for n in graph.order:
        k = live_b.index(n)
        batch = measure(n, batch, k)
        live_b.pop(k)
    assert live == live_b
    return streamed, batch


def test_schedule_replay_matches_batch():
    streamed, batch = _replay_pair(path_graph(4))
    assert fidelity(streamed, batch) >= 1 - 1e-6

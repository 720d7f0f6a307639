import itertools
import json
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from orbivol import coxeter as cx
from orbivol.errors import (
    AmbiguityError,
    DiagramError,
    NonRealizableError,
    ParseError,
    UnresolvedEdgeError,
)
from orbivol.numkernel import precision

D = 30


def _weights(d):
    return {e.key: e.weight for e in d.edges}


def test_parse_chain():
    d = cx.parse_symbol("[5,3,3,3,4]")
    assert d.n == 6
    assert [_weights(d)[(k, k + 1)] for k in range(5)] == [5, 3, 3, 3, 4]


def test_parse_rational_and_branch():
    d = cx.parse_symbol("[5,3,3,5/2,5]")
    assert _weights(d)[(3, 4)] == Fraction(5, 2)
    y = cx.parse_symbol("[5,3,3,3,3^{1,1}]")
    assert y.n == 7 and len(y.edges) == 6
    degree = {k: 0 for k in range(7)}
    for e in y.edges:
        degree[e.i] += 1
        degree[e.j] += 1
    assert sorted(degree.values()) == [1, 1, 1, 2, 2, 2, 3]
    assert y.solid_connected()


@pytest.mark.parametrize(
    "text, error",
    [("[5,3,,3]", ParseError), ("5,3,3]", ParseError), ("[5,3^{1,1},3]", ParseError),
     ("[5,2,3]", DiagramError), ("[5,3/2]", DiagramError), ("[5;3]", ParseError)],
)
def test_parse_errors(text, error):
    with pytest.raises(error):
        cx.parse_symbol(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        cx.parse_symbol("[5,3,x,3]")
    assert exc.value.position == 5


@pytest.mark.parametrize(
    "symbol", ["[5,3,3,3,4]", "[5,3,3,3,3]", "[5,3,3,3,3^{1,1}]", "[5,3,3,5/2,5]", "[5/2,3,3,5,5/2]"]
)
def test_render_round_trip(symbol):
    d = cx.parse_symbol(symbol)
    assert cx.render_symbol(d) == symbol
    assert cx.parse_symbol(cx.render_symbol(d)) == d


def test_render_reversed_chain():
    assert cx.render_symbol(cx.parse_symbol(" [ 4 , 3,3,3 ,5 ] ")) in ("[4,3,3,3,5]", "[5,3,3,3,4]")


def test_gram_entries():
    with precision(D):
        G = cx.gram(cx.parse_symbol("[5,3,3,3,4]"), D)
        expect = [-mp.cos(mp.pi / 5), mpf(-0.5), mpf(-0.5), mpf(-0.5), -mp.cos(mp.pi / 4)]
        for k in range(5):
            assert abs(G[k, k + 1] - expect[k]) < mpf(10) ** -(D + 5)
            assert G[k, k + 1] == G[k + 1, k]
        assert all(G[k, k] == 1 for k in range(6))
        assert G[0, 2] == 0
        dd = cx.CoxeterDiagram(2, (cx.Edge(0, 1, dashed=True, length=mpf("0.5")),))
        assert cx.gram(dd, D)[0, 1] == -mp.cosh(mpf("0.5"))


def test_inertia_examples():
    assert cx.inertia(mpmath.eye(6), digits=D).as_tuple() == (6, 0, 0)
    a6 = cx.gram(cx.parse_symbol("[3,3,3,3,3]"), D)
    assert cx.inertia(a6, digits=D).as_tuple() == (6, 0, 0)
    for s in ("[5,3,3,3,3]", "[5,3,3,3,4]"):
        assert cx.inertia(cx.gram(cx.parse_symbol(s), D), digits=D).as_tuple() == (5, 1, 0)


def test_unresolved_edge():
    d = cx.prism_diagram(weight=3)
    with pytest.raises(UnresolvedEdgeError):
        cx.gram(d, D)


@pytest.mark.parametrize("pid", ["P0", "P1", "P2"])
def test_polytope_signatures(pid):
    d = cx.polytope_diagram(pid, D)
    with precision(D):
        G = cx.gram(d, D)
        assert cx.inertia(G, digits=D).as_tuple() == (5, 1, 1)
        assert abs(mp.det(G)) < mpf("1e-25")
    for drop in range(7):
        minor = d.subdiagram([k for k in range(7) if k != drop])
        assert cx.inertia(cx.gram(minor, D), digits=D).as_tuple() == (5, 1, 0)


@pytest.mark.parametrize("weight", [3, 4])
def test_solve_dashed_quadratic_root(weight):
    d = cx.prism_diagram(weight=weight)
    sol = cx.solve_dashed_detail(d, (5, 6), digits=D)
    assert sol.length > 0 and sol.cosh > 1
    assert sol.det_residual < mpf("1e-25")
    assert sol.inertia.as_tuple() == (5, 1, 1)
    with precision(D):
        # det is quadratic in c: an exact fit through three points predicts a fourth
        f = [cx._det_at(d, (5, 6), mpf(c)) for c in (0, 1, 2, 3)]
        assert abs(f[3] - 3 * f[2] + 3 * f[1] - f[0]) < mpf("1e-30")


def test_p0_length_frozen():
    with precision(D):
        l = cx.solve_dashed(cx.prism_diagram(weight=3), (5, 6), digits=D)
        assert abs(l - mpf("0.38359860912565972166451438426")) < mpf("1e-28")


def test_attachment_alternatives_not_realizable():
    for attach in range(5):
        d = cx.prism_diagram(weight=3, attach=attach)
        with pytest.raises(NonRealizableError):
            cx.solve_dashed(d, (attach, 6), digits=D)


def test_two_node_dashed_not_realizable():
    d = cx.CoxeterDiagram(2, (cx.Edge(0, 1, dashed=True),))
    with pytest.raises(NonRealizableError):
        cx.solve_dashed(d, (0, 1), dim=1, digits=D)


def test_solve_requires_single_unknown():
    d = cx.prism_diagram(weight=3).with_edge(cx.Edge(0, 6, dashed=True))
    with pytest.raises(UnresolvedEdgeError):
        cx.solve_dashed(d, (5, 6), digits=D)


def test_ambiguity_error_carries_lengths():
    err = AmbiguityError("two lengths", ["0.5", "0.7"])
    assert isinstance(err, DiagramError)
    assert err.candidates == ["0.5", "0.7"]


def test_edge_validation():
    with pytest.raises(DiagramError):
        cx.Edge(1, 1, weight=Fraction(3))
    with pytest.raises(DiagramError):
        cx.Edge(0, 1, weight=Fraction(2))
    with pytest.raises(DiagramError):
        cx.Edge(0, 1, dashed=True, length=mpf(-1))
    with pytest.raises(DiagramError):
        cx.CoxeterDiagram(2, (cx.Edge(0, 1, weight=Fraction(3)), cx.Edge(1, 0, weight=Fraction(4))))
    with pytest.raises(DiagramError):
        cx.CoxeterDiagram(2, (cx.Edge(0, 2, weight=Fraction(3)),))


@settings(max_examples=30, deadline=None)
@given(st.permutations(range(7)), st.sampled_from(["P0", "P2"]))
def test_inertia_permutation_invariant(perm, pid):
    d = cx.polytope_diagram(pid, D)
    G = cx.gram(d, D)
    P = mpmath.matrix(7, 7)
    for i, j in itertools.product(range(7), repeat=2):
        P[i, j] = G[perm[i], perm[j]]
    assert cx.inertia(P, digits=D).as_tuple() == cx.inertia(G, digits=D).as_tuple()


def test_json_round_trip(tmp_path):
    d = cx.polytope_diagram("P2", D)
    path = tmp_path / "p2.json"
    cx.dump_diagram(d, path, D)
    data = json.loads(path.read_text())
    assert data["schema"] == "orbivol.diagram/1" and data["nodes"] == 7
    back = cx.load_diagram(path, D)
    assert _weights(back) == _weights(d)
    with precision(D):
        assert abs(back.edge(5, 6).length - d.edge(5, 6).length) < mpf(10) ** -(D - 1)


def test_json_unknown_length_and_angles():
    data = {
        "nodes": 7,
        "edges": [{"i": 0, "j": 1, "weight": "5"}, {"i": 1, "j": 2, "weight": 3}, {"i": 2, "j": 3, "weight": 3},
                  {"i": 3, "j": 4, "weight": 3}, {"i": 4, "j": 5, "angle": "pi/3"},
                  {"i": 5, "j": 6, "dashed": True}],
    }
    d = cx.diagram_from_dict(data, D)
    assert d.unknown_dashed() == [(5, 6)]
    with precision(D):
        l = cx.solve_dashed(d, (5, 6), digits=D)
        assert abs(l - mpf("0.38359860912565972166451438426")) < mpf("1e-25")
    with pytest.raises(DiagramError):
        cx.diagram_from_dict({"nodes": 2, "edges": [{"i": 0, "j": 1}]}, D)
    with pytest.raises(DiagramError):
        cx.diagram_from_dict({"edges": []}, D)

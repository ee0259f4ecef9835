"""Step legality, tree replay, and the script grammar."""

import json

import pytest

from fcengine.corpus import bundled_names, load_bundled
from fcengine.engine import (AlreadyInDomain, CasesDontCover,
                             CharacterNontrivialOnX, EngineError, NoOpenOrbit,
                             NotInvariant, Tree, WitnessFails, XNotAbelian,
                             XNotInDomain, apply_step, collapse, conjugate,
                             cts, dumps_script, exchange, expand, loads_script,
                             replay, report, report_json)
from fcengine.coeffs import cdiv, promote
from fcengine.fc import FC, classify
from fcengine.lattice import LowerTriangularImage, TorusElem, WeylPerm


def radical_fc(n, charge):
    pairs = [({(i, j): 1}, charge.get((i, j), 0))
             for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return FC.make(n, pairs)


# -- single steps --------------------------------------------------------


def test_conjugate_transports_the_character():
    fc = radical_fc(3, {(1, 3): 1})
    out = conjugate(fc, [TorusElem((1, 1, 4))])
    assert dict(out.support_roots()) == {(1, 3): 4}
    out = conjugate(fc, [WeylPerm((2, 1, 3))])
    assert dict(out.support_roots()) == {(2, 3): 1}


def test_conjugate_validates_each_intermediate():
    fc = radical_fc(3, {(1, 3): 1})
    # moving the charged root below the diagonal is illegal mid-chain too
    with pytest.raises(LowerTriangularImage):
        conjugate(fc, [WeylPerm((3, 2, 1))])


def test_expand_yields_constant_and_family():
    fc = FC.make(3, [({(1, 3): 1}, 1)])
    const, family = expand(fc, (1, 2), "t")
    assert const.domain_dim() == 2 and family.domain_dim() == 2
    assert not const.live_params()
    assert family.live_params() == ("t",)
    with pytest.raises(AlreadyInDomain):
        expand(fc, (1, 3), "t")


def test_expand_requires_invariance():
    # charged (1,2): conjugating by U_(2,3) moves the character
    fc = FC.make(3, [({(1, 2): 1}, 1)])
    with pytest.raises(NotInvariant):
        expand(fc, (2, 3), "t")


def test_exchange_happy_path_and_guards():
    fc = radical_fc(3, {(1, 3): 1})
    out = exchange(fc, [(1, 2)], [(2, 3)])
    assert out.contains({(1, 2): 1})
    with pytest.raises(XNotInDomain):
        exchange(radical_fc(3, {}), [(1, 2)], [(1, 2)])
    charged_x = radical_fc(3, {(1, 3): 1, (2, 3): 1})
    with pytest.raises(CharacterNontrivialOnX):
        exchange(charged_x, [(1, 2)], [(2, 3)])
    with pytest.raises(XNotAbelian):
        exchange(radical_fc(4, {(1, 4): 1}), [(1, 2)], [(2, 3), (3, 4)])


def test_cts_drop_then_adjoin_round_trips():
    fc = radical_fc(4, {(1, 3): 1, (2, 4): 1})
    dropped, fixes = cts(fc, [(1, 4)], [[0, 0, 0, 1]], mode="drop")
    assert dropped.domain_dim() == fc.domain_dim() - 1
    back, _ = cts(dropped, [(1, 4)], [[0, 0, 0, 1]], mode="adjoin")
    assert back.equal(fc)
    with pytest.raises(AlreadyInDomain):
        cts(fc, [(1, 4)], [[0, 0, 0, 1]], mode="adjoin")


def test_cts_needs_full_rank_weights():
    fc = radical_fc(4, {(1, 3): 1, (2, 4): 1})
    d1, _ = cts(fc, [(1, 4)], [[0, 0, 0, 1]], mode="drop")
    d2, _ = cts(d1, [(2, 3)], [[0, 0, 1, 0]], mode="drop")
    # one cocharacter weighs both roots identically: no open orbit
    with pytest.raises(NoOpenOrbit):
        cts(d2, [(1, 4), (2, 3)], [[0, 0, 1, 1]], mode="adjoin")


def test_collapse_requires_a_working_witness():
    base = FC.make(3, [({(1, 3): 1}, 1)])
    _, family = expand(base, (1, 2), "a1")
    inv_a1 = cdiv(1, promote("a1"))
    fixed = collapse(family, [TorusElem((1, inv_a1, 1))])
    assert not fixed.live_params()
    with pytest.raises(WitnessFails):
        collapse(family, [TorusElem((1, 1, 1))])
    with pytest.raises(EngineError):
        collapse(base, [TorusElem((1, 1, 1))])  # nothing to collapse


# -- trees and replay ----------------------------------------------------


def test_tree_guards_names_and_prune():
    header = {"fcs": 1, "n": 4,
              "init": {"kind": "orbit", "partition": [2, 2],
                       "variant": "down"}}
    tree = Tree(header)
    with pytest.raises(EngineError):
        apply_step(tree, {"op": "conjugate", "at": "nope", "g": [],
                          "as": "v1"})
    with pytest.raises(EngineError):
        apply_step(tree, {"op": "prune", "at": "root", "reason": "gc2-dim"})
    apply_step(tree, {"op": "conjugate", "at": "root",
                      "g": [{"kind": "torus", "diag": ["1", "1", "1", "2"]}],
                      "as": "v1"})
    with pytest.raises(EngineError):  # duplicate name
        apply_step(tree, {"op": "conjugate", "at": "v1", "g": [],
                          "as": "v1"})
    with pytest.raises(EngineError):  # node already stepped
        apply_step(tree, {"op": "conjugate", "at": "root", "g": [],
                          "as": "v2"})


def test_split_must_cover_with_one_generic_case():
    header = {"fcs": 1, "n": 3,
              "init": {"kind": "explicit", "n": 3,
                       "generators": [{"terms": [[[1, 3], "1"]],
                                       "char": "1"}]}}
    tree = Tree(header)
    apply_step(tree, {"op": "expand", "at": "root", "root": [1, 2],
                      "as": ["v1", "v2"]})
    with pytest.raises(CasesDontCover):
        apply_step(tree, {"op": "split", "at": "v2", "param": "a1",
                          "cases": [{"value": "1", "as": "v3"},
                                    {"value": "2", "as": "v4"}]})
    apply_step(tree, {"op": "split", "at": "v2", "param": "a1",
                      "cases": [{"value": "1", "as": "v3"},
                                {"generic": True, "as": "v4"}]})
    assert classify(tree.nodes["v3"].fc) == (2, 1)
    assert tree.nodes["v4"].fc.param_excl["a1"] == (1,)


def test_replay_is_deterministic():
    for name in ("ex3", "ex4"):
        records = load_bundled(name)
        r1 = report_json(report(replay(records)))
        r2 = report_json(report(replay(records)))
        assert r1 == r2


def test_script_grammar_round_trips():
    for name in bundled_names():
        text = dumps_script(load_bundled(name))
        records = loads_script(text)
        assert loads_script(dumps_script(records)) == records


def test_report_shape():
    rep = report(replay(load_bundled("ex3")))
    assert rep["script"] == "ex3"
    assert rep["n"] == 6
    assert {row["class"] for row in rep["minimal"]} == {"(4,1^2)", "(3^2)"}
    assert all(row["tag"] == "one" for row in rep["minimal"])
    json.loads(report_json(rep))  # valid JSON document

import json
import pathlib

import pytest

import emvkit as ek

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def test_chain_basics():
    c = ek.chain(2)
    assert c.name == "chain(2)"
    assert c.size == 3
    assert c.labels == ["0", "1", "2"]
    one = c.by_label("1")
    assert c.format(c.oplus(one, one)) == "2"
    assert c.leq(one, c.top())
    assert not c.is_idempotent(one)
    assert c.format(c.local_complement(c.top(), one)) == "1"
    with pytest.raises(KeyError):
        c.by_label("7")


def test_product_and_axioms():
    p = ek.product(ek.chain(1), ek.chain(2))
    assert p.size == 6
    rep = ek.check_axioms(p)
    assert rep["ok"] and rep["exhaustive"]
    assert all(c["pass"] for c in rep["checks"])
    assert len(ek.idempotents(p)) == 4

    bad = ek.from_tables(
        "broken", ["0", "1", "2"], 0,
        [[0, 1, 2], [1, 1, 2], [2, 2, 2]],
        join=[[0, 1, 2], [1, 1, 2], [2, 2, 2]])
    rep = ek.check_axioms(bad)
    assert not rep["ok"]
    failing = [c for c in rep["checks"] if not c["pass"]]
    assert failing and failing[0]["witness"]


def test_states_and_separation():
    p = ek.product(ek.chain(1), ek.chain(2))
    states = ek.state_morphisms(p)
    assert len(states) == 2
    assert len(ek.maximal_ideals(p)) == 2
    e = ek.separating_element(p, target=0, exclude=[1])
    assert ek.state_value(p, 0, e) == ek.Rational(1)
    assert ek.state_value(p, 1, e) == ek.Rational(0)


def test_finite_sets_and_spectrum():
    fs = ek.finite_sets()
    assert not fs.has_top
    x = fs.from_set([0, 1, 2])
    assert fs.support(x) == [0, 1, 2]
    assert ek.base_set(fs, x) == [0, 1, 2]
    good = ek.sup_criterion(fs, x, [fs.from_set([0]), fs.from_set([1]), fs.from_set([2])])
    assert good["verdict"] == "holds" and good["difference"] == []
    bad = ek.sup_criterion(fs, x, [fs.from_set([0])])
    assert bad["verdict"] == "fails" and bad["difference"] == [1, 2]
    shadow = ek.compactness(fs)
    assert shadow["equivalence_holds"] and not shadow["spectrum_finite"]


def test_chang_radical():
    ch = ek.chang()
    rad = ek.radical(ch)
    assert not rad["semisimple"] and rad["agree"]
    assert "Small" in rad["radical"]
    small = ek.Element.small(3)
    assert not ch.is_idempotent(small)
    assert ch.format(small) == "Small(3)"


def test_representation():
    fs = ek.finite_sets()
    n = ek.represent(fs)
    assert n is not None
    assert n.format(n.top()) == "~{}"
    z = n.complement_of(fs.from_set([0]))
    assert z.is_complement
    assert n.leq(n.direct(fs.from_set([0])), n.top())
    assert ek.audit_representation(n)["ok"]
    rules = ek.extended_state_rules(n, support=3)
    assert len(rules) == 4 and rules[-1] == "0 on the embedded base, 1 on complements"
    assert ek.represent(ek.chain(4)) is None


def test_fuzzy_witness():
    c = ek.chain(2)
    w = ek.ls_construct(c)
    assert w.omega == 1
    row = w.hat(c.element(1))
    assert [str(v) for v in row] == ["1/2"]
    assert c.format(w.h(row)) == "1"
    assert "meager" in w.note
    ring = ek.sigma_ring(w)
    assert ring["ok"] and ring["sets"] == [[], [0]] and ring["images"] == ["0", "2"]


def test_dsl_round_trip():
    canonical = ek.parse_check("algebra A = chain( 2 )\n")
    assert canonical == "algebra A = chain(2)\n"
    assert ek.parse_check(canonical) == canonical
    alg = ek.load_algebra(str(DATA / "05_product_12.emv"))
    assert alg.name == "product(chain(1),chain(2))"
    k = ek.load_algebra(str(DATA / "15_mixed.emv"), name="K")
    assert k.name == "K"
    with pytest.raises(ValueError):
        ek.load_algebra(str(DATA / "15_mixed.emv"), name="nope")


def test_cli_inprocess():
    code, out, err = ek.run_cli(["check", str(DATA / "02_chain2.emv")])
    assert code == 0 and err == ""
    doc = json.loads(out)
    assert doc["schema"] == 1 and doc["exit"] == 0

    code, out, err = ek.run_cli(["check", str(DATA / "corrupt_syntax.emv")])
    assert code == 2 and out == ""
    assert ":1:9:" in err

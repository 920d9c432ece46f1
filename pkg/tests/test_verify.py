import pytest

from hforge.cohom import Cocycle
from hforge.corpus import (Corpus, corpus_from_json, d4_form, default_corpus, degenerate_forms,
                           duality_forms, freenil3, heis_form, nonabelian_forms, perturbed)
from hforge.errors import InputError
from hforge.finab import FinAbGroup
from hforge.verify import CheckResult, Report, SuiteConfig, run


def test_default_corpus_shape():
    c = default_corpus()
    assert len(c.dualities()) == 225
    assert len(c.forms) == 225 + len(degenerate_forms()) + len(nonabelian_forms())
    assert [n for n, _ in c.groups] == ["D4", "Q8", "S3"]
    assert any(n == "freenil3" for n, _ in c.alternating)
    for _, b in c.dualities():
        assert b.torus.size * b.g.size * b.gamma.size <= 256


def test_duality_forms_respect_bound():
    small = duality_forms(16)
    assert small and all(b.torus.size * b.g.size * b.gamma.size <= 16 for _, b in small)


def test_named_examples():
    assert d4_form().values.tolist() == [[[1]]]
    assert heis_form(3).eval((2,), (2,)) == (1,)
    with pytest.raises(InputError):
        heis_form(1)
    ex = perturbed(3)
    assert set(ex) == {"gamma0", "alpha", "perturbed", "literal"}
    omega, gamma = freenil3()
    assert omega.p.orders == (2, 2, 2) and isinstance(gamma, Cocycle)


def test_corpus_from_json():
    data = {"forms": [dict(d4_form().to_json(), name="d4")],
            "cocycles": [perturbed(2)["gamma0"].to_json()]}
    c = corpus_from_json(data)
    assert c.forms[0][0] == "d4" and c.cocycles[0][0] == "cocycles[0]"
    for bad in ([], {"widgets": []}, {"forms": {}}, {"forms": [3]}):
        with pytest.raises(InputError):
            corpus_from_json(bad)


def test_suite_config_validation():
    with pytest.raises(InputError):
        SuiteConfig(suite="bogus")
    with pytest.raises(InputError):
        SuiteConfig(max_order=0)
    with pytest.raises(InputError):
        SuiteConfig(seed=-1)
    with pytest.raises(InputError):
        run(SuiteConfig(corpus=Corpus()))


def test_report_semantics():
    rep = Report()
    rep.check("x", "a", lambda: True)
    rep.check("x", "b", lambda: "broken")
    rep.check("y", "c", lambda: None)
    r = rep.results["x"]
    assert (r.passed, r.failed) == (1, 1) and r.counterexample == "b: broken"
    assert not rep.ok and rep.text().endswith("FAILED: 0 of 2 checks passed\n")
    assert CheckResult("z").line() == "PASS z: passed=0 failed=0 skipped=0"


def test_literal_cochain_makes_suite_fail():
    c = Corpus(cocycles=[("literal", perturbed(2)["literal"])])
    rep = run(SuiteConfig(suite="cohomology", corpus=c))
    assert not rep.results["cohomology/d2_zero"].ok
    assert "d2" in rep.results["cohomology/d2_zero"].counterexample


def test_same_seed_same_report():
    a = run(SuiteConfig(suite="nil2", seed=11)).text()
    b = run(SuiteConfig(suite="nil2", seed=11)).text()
    assert a == b


@pytest.mark.parametrize("suite", ["nil2", "cohomology"])
def test_fast_suites_pass(suite):
    rep = run(SuiteConfig(suite=suite, seed=7))
    assert rep.ok, rep.text()


def test_small_corpus_all_suites():
    c = default_corpus(max_order=32)
    c.forms = [f for f in c.forms if f[1].torus.size * f[1].g.size * f[1].gamma.size <= 32][:12]
    c.alternating = c.alternating[:6]
    rep = run(SuiteConfig(suite="all", seed=3, corpus=c))
    assert rep.ok, rep.text()
    tags = {t.split("/")[0] for t in rep.results}
    assert tags == {"nil2", "symplectic", "heisenberg", "cohomology", "roundtrip"}


def test_trivial_torus_group_is_accepted():
    assert FinAbGroup(()).size == 1

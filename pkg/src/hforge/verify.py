"""Verification suites over a corpus.

Each suite runs a fixed list of checks over the corpus instances and records,
per check tag, how many instances passed, failed or were skipped, plus the
first counterexample.  Reports depend only on (corpus, seed, bounds).
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass, field

import numpy as np

from . import heis
from .cohom import (Cochain, Cocycle, are_equivalent, bilinear_h2, cocycle_defect, differential,
                    extension_from_cocycle, extension_from_group, h2_order, h2_order_formula,
                    hom_tensor_count, is_coboundary, morphism_check, partial_sqrt_section, q_map,
                    skewing_section, solve_morphism, sqrt_section, square_root_hom,
                    standard_cocycle, strictly_central_by_cocycle)
from .corpus import Corpus, default_corpus, perturbed
from .errors import ConsistencyError, InputError, ResourceError
from .finab import AbHom, FinAbGroup
from .forms import BilinearForm
from .grp import (GrpSubgroup, center, find_splittings, is_maximal_abelian, is_nilquadratic,
                  is_normal_splitting)
from .sympl import (all_alternating_forms, correspondence_check, galois_report, lagrangian_bisections,
                    lagrangian_extremality, phase_form)

SUITES = ("nil2", "symplectic", "heisenberg", "cohomology", "roundtrip")
SPLITTING_MAX = 32


@dataclass
class SuiteConfig:
    suite: str = "all"
    seed: int = 0
    max_order: int = 256
    max_subgroups: int = 10_000
    corpus: Corpus | None = None

    def __post_init__(self):
        if self.suite not in SUITES + ("all",):
            raise InputError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES + ('all',))}")
        if self.max_order <= 0 or self.max_subgroups <= 0:
            raise InputError("bounds must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise InputError("seed must be a 64-bit unsigned integer")

    def rng(self, salt: str) -> np.random.Generator:
        return np.random.default_rng([self.seed, zlib.crc32(salt.encode())])


@dataclass
class CheckResult:
    tag: str
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    counterexample: str | None = None

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        out = f"{status} {self.tag}: passed={self.passed} failed={self.failed} skipped={self.skipped}"
        if self.counterexample is not None:
            out += f"\n    counterexample: {self.counterexample}"
        return out


@dataclass
class Report:
    results: dict = field(default_factory=dict)

    def _get(self, tag) -> CheckResult:
        if tag not in self.results:
            self.results[tag] = CheckResult(tag)
        return self.results[tag]

    def check(self, tag: str, name: str, fn) -> bool:
        """Run ``fn()``; truthy passes, falsy or a consistency error fails, ResourceError skips."""
        r = self._get(tag)
        try:
            got = fn()
        except ResourceError:
            r.skipped += 1
            return False
        except (ConsistencyError, InputError) as exc:
            self._fail(r, f"{name}: {type(exc).__name__}: {exc}")
            return False
        if got is False or got is None:
            self._fail(r, name)
            return False
        if isinstance(got, str):
            self._fail(r, f"{name}: {got}")
            return False
        r.passed += 1
        return True

    def skip(self, tag: str):
        self._get(tag).skipped += 1

    @staticmethod
    def _fail(r: CheckResult, msg: str):
        r.failed += 1
        if r.counterexample is None:
            r.counterexample = msg

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results.values())

    def text(self) -> str:
        lines = [r.line() for r in self.results.values()]
        n_fail = sum(not r.ok for r in self.results.values())
        lines.append(f"{'OK' if n_fail == 0 else 'FAILED'}: {len(self.results) - n_fail} of {len(self.results)} checks passed")
        return "\n".join(lines) + "\n"


def _order(b) -> int:
    return b.torus.size * b.g.size * b.gamma.size


def _forms(cfg: SuiteConfig, rep: Report, tag: str, abelian_only=False, dualities_only=False):
    for name, b in cfg.corpus.forms:
        if abelian_only and not b.is_abelian:
            continue
        if dualities_only and not (b.is_abelian and b.is_duality()):
            continue
        if _order(b) > cfg.max_order:
            rep.skip(tag)
            continue
        yield name, b


def _valid_cocycles(cfg: SuiteConfig):
    for name, c in cfg.corpus.cocycles:
        if c.degree == 2 and cocycle_defect(c) is None:
            yield name, Cocycle.from_cochain(c)


# --------------------------------------------------------------------------
# nil2
# --------------------------------------------------------------------------

def suite_nil2(cfg: SuiteConfig, rep: Report):
    for name, b in _forms(cfg, rep, "nil2/linearity_iff_central_commutators"):
        h = heis.HeisGroup(b)
        rep.check("nil2/linearity_iff_central_commutators", name, lambda: is_nilquadratic(h.group) is not None)
        if not b.is_abelian:
            continue
        rep.check("nil2/heisenberg_is_nilquadratic", name, lambda: is_nilquadratic(h.group)[0])

        def torus_chain():
            t = h.torus_subgroup()
            comm = GrpSubgroup(h.group, np.unique(h.group.commutators))
            return comm.issubset(t) and t.issubset(center(h.group))
        rep.check("nil2/commutators_in_torus_in_center", name, torus_chain)
        rep.check("nil2/commutator_form_is_phase_form", name,
                  lambda: h.extension().commutator_form() == phase_form(b))

    expected = {"D4": True, "Q8": True, "S3": False}
    for name, g in cfg.corpus.groups:
        def named():
            flag, witness = is_nilquadratic(g)
            if name in expected and flag != expected[name]:
                return f"nilquadratic={flag}, expected {expected[name]}"
            if flag:
                ext = extension_from_group(g, center(g))
                ext.commutator_form()
            elif witness is None:
                return "no witness for a non-nilquadratic group"
            return True
        rep.check("nil2/named_groups", name, named)

    for name, c in _valid_cocycles(cfg):
        if c.torus.size * c.p.size > cfg.max_order:
            rep.skip("nil2/extension_commutator_is_q")
            continue
        rep.check("nil2/extension_commutator_is_q", name,
                  lambda: extension_from_cocycle(c).commutator_form() == q_map(c))


# --------------------------------------------------------------------------
# symplectic
# --------------------------------------------------------------------------

def _alternating_instances(cfg: SuiteConfig):
    seen = []
    for name, b in cfg.corpus.forms:
        if b.is_abelian and b.g.size * b.gamma.size <= 16:
            seen.append((f"phase({name})", phase_form(b)))
    return seen + list(cfg.corpus.alternating)


def suite_symplectic(cfg: SuiteConfig, rep: Report):
    strict_total = 0
    for name, w in _alternating_instances(cfg):
        def laws():
            nonlocal strict_total
            r = galois_report(w)
            strict_total += r["strict_meet_inclusions"]
            bad = [k for k, v in r.items() if k != "strict_meet_inclusions" and not v[0]]
            return True if not bad else f"laws fail: {bad} ({r[bad[0]][1]})"
        rep.check("symplectic/galois_lattice_laws", name, laws)
        rep.check("symplectic/lagrangian_extremality", name, lambda: lagrangian_extremality(w)["ok"])
        rep.check("symplectic/bisection_transversality", name, lambda: lagrangian_bisections(w) is not None)
        if name == "freenil3":
            rep.check("symplectic/freenil3_no_bisections", name,
                      lambda: len(lagrangian_bisections(w)) == 0)
    if _alternating_instances(cfg):
        rep.check("symplectic/strict_meet_inclusion_witness", "corpus",
                  lambda: True if strict_total > 0 else "no instance with (A n B)^perp strictly above A^perp + B^perp")

    def corr(name, ext):
        rep.check("symplectic/correspondence", name,
                  lambda: (lambda r: True if r.ok else f"items {[k for k, v in r.items.items() if not v]}: "
                           f"{r.counterexamples}")(correspondence_check(ext, count_all_h=False)))

    for name, b in _forms(cfg, rep, "symplectic/correspondence", abelian_only=True):
        corr(name, heis.HeisGroup(b).extension())
    for name, c in _valid_cocycles(cfg):
        if c.torus.size * c.p.size > cfg.max_order:
            rep.skip("symplectic/correspondence")
            continue
        corr(name, extension_from_cocycle(c))


# --------------------------------------------------------------------------
# heisenberg
# --------------------------------------------------------------------------

def _pushforward_targets(t: FinAbGroup) -> list:
    out = [AbHom.identity(t), AbHom.zero(t, FinAbGroup((2,)))]
    if t.orders == (2,):
        out.append(AbHom(t, FinAbGroup((4,)), ((2,),)))
    return out


def suite_heisenberg(cfg: SuiteConfig, rep: Report):
    rng = cfg.rng("heisenberg")
    for name, b in _forms(cfg, rep, "heisenberg/formulas_vs_oracle"):
        h = heis.HeisGroup(b)
        rep.check("heisenberg/formulas_vs_oracle", name,
                  lambda: (lambda r: True if all(r.values()) else f"{r}")(heis.formula_check(h)))
        rep.check("heisenberg/bisection_identities", name, lambda: heis.bisection_structure_check(h))

        def factorization():
            picks = [h.identity] + [h.element_at(int(u)) for u in rng.integers(0, h.order, size=4)]
            for u in picks:
                c, xt, yt = heis.unique_factorization(h, u)
                if h.mul(h.mul(h.element(c, h.g.element(h.g.identity_id), h.gamma.element(h.gamma.identity_id)), xt), yt) != u:
                    return f"c x xi != u for {u}"
            return True
        rep.check("heisenberg/unique_factorization", name, factorization)

        if not b.is_abelian:
            continue
        cases = _embedding_cases(b)
        rep.check("heisenberg/embedding_criterion", name,
                  lambda: all(heis.embedding_check(h, hs, ds) == expect for hs, ds, expect in cases))
        rep.check("heisenberg/expanded_torus", name, lambda: _expanded_ok(b))
        if not b.is_duality():
            continue
        rep.check("heisenberg/abelian_splitting", name, lambda: _abelian_splitting_ok(h))
        rep.check("heisenberg/twist", name, lambda: heis.twist(h) is not None)
        if h.order <= 32:
            for t in _pushforward_targets(b.torus):
                rep.check("heisenberg/pushforward", f"{name} along {t.gen_images}",
                          lambda: heis.pushforward(heis.heis_object(h), t) is not None)


def _embedding_cases(b: BilinearForm) -> list:
    """(H, Delta, expected) for H in {0, G}, Delta in {0, Gamma}."""
    g_all, h_all = list(range(b.g.size)), list(range(b.gamma.size))
    zero = bool((b.table == 0).all())
    return [([0], [0], True), (g_all, [0], True), ([0], h_all, True), (g_all, h_all, zero)]


def _expanded_ok(b: BilinearForm):
    obj = heis.heis_from_form_expanded(b)
    form = heis.form_from_heis(obj)
    if b.is_duality() and obj.ext.torus != b.torus:
        return "expanded torus differs from T for a duality"
    return form.is_duality()


def _abelian_splitting_ok(h: heis.HeisGroup):
    g, gt, gmt = h.group, h.g_tilde(), h.gamma_tilde()
    if is_normal_splitting(g, gt, gmt) is None:
        return "(G~, Gamma~) is not a normal splitting"
    return is_maximal_abelian(g, gt) and is_maximal_abelian(g, gmt)


# --------------------------------------------------------------------------
# cohomology
# --------------------------------------------------------------------------

def suite_cohomology(cfg: SuiteConfig, rep: Report):
    rng = cfg.rng("cohomology")
    for name, c in cfg.corpus.cocycles:
        def d2():
            if c.degree != 2:
                return f"degree {c.degree} cochain"
            bad = cocycle_defect(c)
            return True if bad is None else f"d2 != 0 at {bad}"
        rep.check("cohomology/d2_zero", name, d2)

    for name, c in _valid_cocycles(cfg):
        rep.check("cohomology/q_class_invariant", name, lambda: q_map(c, rng, trials=100) is not None)
        if c.torus.size * c.p.size > cfg.max_order:
            rep.skip("cohomology/extension_cocycle_roundtrip")
            continue
        ext = extension_from_cocycle(c)
        rep.check("cohomology/extension_cocycle_roundtrip", name, lambda: ext.cocycle() == c)
        rep.check("cohomology/strict_iff_nondegenerate", name,
                  lambda: ext.is_strictly_central() == q_map(c).is_nondegenerate())
        if ext.is_strictly_central():
            def sym():
                h = Cochain(1, c.p, c.torus, rng.integers(0, c.torus.size, size=c.p.size))
                h = Cochain(1, c.p, c.torus, c.torus.table[h.table, c.torus.inverse[h.table[0]]])
                return strictly_central_by_cocycle(c + differential(h))
            rep.check("cohomology/symmetric_preserves_strict", name, sym)

    triples = set()
    for name, b in _forms(cfg, rep, "cohomology/standard_cocycle_not_coboundary", abelian_only=True):
        def std():
            g0 = standard_cocycle(b)
            hit = is_coboundary(g0)
            return (hit is None) == bool(b.table.any())
        rep.check("cohomology/standard_cocycle_not_coboundary", name, std)
        triples.add((b.gamma, b.g, b.torus))
    for gm, g, t in sorted(triples, key=lambda x: (x[0].orders, x[1].orders, x[2].orders)):
        label = f"{gm.orders}x{g.orders}->{t.orders}"
        if hom_tensor_count(gm, g, t) > 64:
            rep.skip("cohomology/bilinear_h2")
            continue
        rep.check("cohomology/bilinear_h2", label, lambda: bilinear_h2(gm, g, t).ok)

    for po, to in (((2,), (2,)), ((2, 2), (2,)), ((4,), (2,)), ((2, 2), (4,)), ((2, 4), (2,)), ((3,), (3,))):
        p, t = FinAbGroup(po), FinAbGroup(to)
        rep.check("cohomology/h2_order", f"{po}->{to}", lambda: h2_order(p, t) == h2_order_formula(p, t))

    for n in (2, 3, 4):
        rep.check("cohomology/perturbed_non_injective", f"N={n}", lambda: _perturbed_ok(n))
        rep.check("cohomology/literal_cochain_rejected", f"N={n}",
                  lambda: cocycle_defect(perturbed(n)["literal"]) is not None)

    rep.check("cohomology/sqrt_section", "Z3,Z5", _sqrt_ok)
    rep.check("cohomology/partial_and_skewing", "Z2xZ3,Z9->Z3", _partial_skewing_ok)

    for name, b in _forms(cfg, rep, "cohomology/morphisms", dualities_only=True):
        if _order(b) > 64:
            continue
        rep.check("cohomology/morphisms", name, lambda: _morphisms_ok(b))


def _perturbed_ok(n: int):
    ex = perturbed(n)
    g0, a, pert = ex["gamma0"], ex["alpha"], ex["perturbed"]
    if a.table[0].any() or a.table[:, 0].any():
        return "alpha not normalized"
    if q_map(g0) != q_map(pert):
        return "q changed"
    e0, e1 = extension_from_cocycle(g0), extension_from_cocycle(pert)
    if are_equivalent(e0, e1) is not None:
        return "extensions are equivalent"
    return e0.is_strictly_central() and e1.is_strictly_central()


def _sqrt_ok():
    for to in ((3,), (5,)):
        t = FinAbGroup(to)
        for po in ((3,), (3, 3), (5,), (2, 2), (2, 3), (2, 6), (4, 4), (2, 2, 2)):
            p = FinAbGroup(po)
            for w in all_alternating_forms(p, t):
                if q_map(sqrt_section(w)) != w:
                    return f"q(sqrt(w)) != w over {po}->{to}"
    return True


def _partial_skewing_ok():
    from .sympl import AlternatingForm
    t = FinAbGroup((2, 3))
    r = square_root_hom(t)
    p = FinAbGroup((3, 3))
    for w3 in all_alternating_forms(p, FinAbGroup((3,))):
        w = AlternatingForm(p, t, t.ids_of(np.concatenate(
            [np.zeros(w3.table.shape + (1,), dtype=np.int64), w3.table[..., None]], axis=-1)))
        if q_map(partial_sqrt_section(w, r)) != w:
            return "partial section fails"
    a9, t3 = FinAbGroup((9,)), FinAbGroup((3,))
    chi = AbHom(a9, t3, ((1,),))
    p9 = FinAbGroup((9, 9))
    for w in all_alternating_forms(p9, t3):
        g = skewing_section(chi, w)
        if g is None or q_map(g) != w:
            return "skewing section over Z9 -> Z3 fails"
    zero = AbHom(FinAbGroup((3,)), FinAbGroup((2,)), ((0,),))
    for w in all_alternating_forms(FinAbGroup((2, 2)), FinAbGroup((2,))):
        got = skewing_section(zero, w)
        if (got is None) != (not w.is_trivial()):
            return "zero chi case"
    return True


def _morphisms_ok(b: BilinearForm):
    e = heis.HeisGroup(b).extension()
    p, t = e.phase, e.torus
    psi = Cochain(1, p, t, np.zeros(p.size, dtype=np.int64))
    ok, _ = morphism_check(e, e, AbHom.identity(t), AbHom.identity(p), psi)
    if not ok:
        return "identity triple rejected"
    triv = extension_from_cocycle(Cocycle(FinAbGroup(()), t, np.zeros((1, 1), dtype=np.int64)))
    zt, zp = AbHom.zero(t, t), AbHom.zero(p, triv.phase)
    sol = solve_morphism(e, triv, zt, zp)
    if sol is None:
        return "no psi for the map to the trivial extension"
    return morphism_check(e, triv, zt, zp, sol)[0]


# --------------------------------------------------------------------------
# roundtrip
# --------------------------------------------------------------------------

def suite_roundtrip(cfg: SuiteConfig, rep: Report):
    for name, b in _forms(cfg, rep, "roundtrip/beta_of_epsilon", dualities_only=True):
        h = heis.HeisGroup(b)
        rep.check("roundtrip/beta_of_epsilon", name,
                  lambda: heis.beta_of_extension(heis.epsilon_of_form(b), b.g.rank) == b)
        rep.check("roundtrip/form_from_heis", name, lambda: heis.form_from_heis(heis.heis_object(h)) == b)
        rep.check("roundtrip/adjunction_unit", name, lambda: heis.adjunction_unit(heis.heis_object(h))[0] == b)
        rep.check("roundtrip/epsilon_vs_cocycle", name,
                  lambda: are_equivalent(h.extension(), extension_from_cocycle(standard_cocycle(b))) is not None)
    for name, b in _forms(cfg, rep, "roundtrip/reconstruct"):
        h = heis.HeisGroup(b)

        def rec():
            form, iso, hh = heis.reconstruct(h.group, h.g_tilde(), h.gamma_tilde())
            return iso.is_isomorphism() and hh.order == h.order
        rep.check("roundtrip/reconstruct", name, rec)

    groups = list(cfg.corpus.groups)
    for name, b in cfg.corpus.forms:
        if _order(b) <= SPLITTING_MAX:
            groups.append((f"H({name})", heis.HeisGroup(b).group))
    for name, c in _valid_cocycles(cfg):
        if c.torus.size * c.p.size <= SPLITTING_MAX:
            groups.append((f"ext({name})", extension_from_cocycle(c).total))
    for name, g in groups:
        if g.size > cfg.max_order:
            rep.skip("roundtrip/splitting_equivalence")
            continue
        for s in find_splittings(g, cfg.max_order):
            rep.check("roundtrip/splitting_equivalence", f"{name} K={list(s.k.ids)} N={list(s.n.ids)}",
                      lambda: _splitting_ok(g, s))
    names = {n for n, _ in cfg.corpus.groups}
    if "Q8" in names:
        q8 = dict(cfg.corpus.groups)["Q8"]
        rep.check("roundtrip/q8_no_abelian_splitting", "Q8",
                  lambda: all(s.kind != "abelian" for s in find_splittings(q8)))


def _splitting_ok(g, s):
    res = heis.splitting_equivalence(g, s.k, s.n)
    if res is not None and s.kind == "abelian" and not res[0].is_duality():
        return "abelian splitting with degenerate form"
    return True


RUNNERS = {"nil2": suite_nil2, "symplectic": suite_symplectic, "heisenberg": suite_heisenberg,
           "cohomology": suite_cohomology, "roundtrip": suite_roundtrip}


def run(cfg: SuiteConfig) -> Report:
    if cfg.corpus is None:
        cfg.corpus = default_corpus(cfg.max_order)
    if cfg.corpus.is_empty():
        raise InputError("the corpus is empty")
    rep = Report()
    for name in SUITES:
        if cfg.suite in (name, "all"):
            RUNNERS[name](cfg, rep)
    return rep

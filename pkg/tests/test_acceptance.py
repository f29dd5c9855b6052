"""One test per acceptance criterion.  All comparisons are exact."""

import json
import random
import subprocess
import sys
from itertools import combinations

import pytest

from qhalg.algebra import base_field_algebra, direct_product
from qhalg.auslander import (
    build, canonical_certificate, end_dimension_oracle, verify_dim_formula, verify_endo,
    verify_gldim, verify_hom_formula,
)
from qhalg.corpus import CORPUS_NAMES, DIRECTED, corpus
from qhalg.exactlin import GF, QQ, random_unimodular
from qhalg.gluing import (
    congruent, form_invariants, forms_distinguished, glue, ks_partner_form,
    parse_bimodule_spec, random_bimodule, same_structure, verify_sod,
)
from qhalg.quasiher import (
    WellFormedCertificate, WellFormedRefusal, dual_collection_check,
    find_well_formed_certificate, is_quasi_hereditary, standard_system,
    verify_exceptional_collection,
)
from qhalg.realizeplan import plan_for_base_algebra
from qhalg.repmod import direct_sum, projective
from qhalg.selftest import KS_TRIPLES

ALGS = corpus(QQ)
AUS = {n: build(ALGS[n]) for n in CORPUS_NAMES}

# dim of Gamma = End(direct sum of indecomposables) for each corpus algebra
GAMMA_DIMS = {"k": 1, "kxk": 2, "A2": 5, "A3_ba": 10, "square": 22, "dual2": 5, "trunc3": 14}


def line(num, ok, title):
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {title}")


@pytest.mark.criterion(1, "Auslander theorem")
def test_criterion_1_auslander():
    failures = []
    for name in CORPUS_NAMES:
        data = AUS[name]
        g = verify_gldim(data)
        e = verify_endo(data)
        oracle = end_dimension_oracle(direct_sum(data.summands))
        if not (g["gldim"] <= g["nilpotency_index"] + 1 and g["ok"]):
            failures.append((name, "gldim", g))
        if not (e["ok"] and e["dim_end"] == e["dim_lambda"] == ALGS[name].dim):
            failures.append((name, "end", e))
        if not (data.gamma.dim == oracle == GAMMA_DIMS[name]):
            failures.append((name, "dim", data.gamma.dim, oracle))
    line(1, not failures, "gldim bound and End(hat Lambda) = Lambda")
    assert failures == []
    assert AUS["dual2"].gamma.dim == 5 and AUS["trunc3"].gamma.dim == 14


@pytest.mark.criterion(2, "Hom table 0/1 rule")
def test_criterion_2_hom_table():
    bad = {}
    for name in CORPUS_NAMES:
        data = AUS[name]
        r = verify_hom_formula(data)
        n = data.gamma.n
        # row = source projective, column = standard module
        expected = [[1 if (j2 == j and l >= l2) else 0
                     for (j2, l2) in data.index] for (j, l) in data.index]
        if r["table"] != expected or not r["ok"] or len(r["table"]) != n:
            bad[name] = r["table"]
    line(2, not bad, "dim Hom(Pi_t', Delta_t) table")
    assert bad == {}
    assert verify_hom_formula(AUS["dual2"])["table"] == [[1, 1], [0, 1]]


@pytest.mark.criterion(3, "standard module dimensions")
def test_criterion_3_dims():
    bad = {}
    for name in CORPUS_NAMES:
        data = AUS[name]
        sysd = standard_system(data.gamma)
        got = [d.dim for d in sysd.delta]
        expected = [data.loewy[j - 1] - l + 1 for (j, l) in data.index]
        if got != expected or not verify_dim_formula(data)["ok"]:
            bad[name] = (got, expected)
    line(3, not bad, "dim Delta_(j,l) = LL(P_j) - l + 1")
    assert bad == {}
    assert [d.dim for d in standard_system(AUS["trunc3"].gamma).delta] == [1, 2, 3]


@pytest.mark.criterion(4, "quasi-hereditary and well-formed")
def test_criterion_4_qh_wf():
    ok = True
    for name in CORPUS_NAMES:
        data = AUS[name]
        ok &= is_quasi_hereditary(data.gamma).quasi_hereditary is True
        cert = canonical_certificate(data)
        ok &= cert["ok"] is True and cert["agrees_with_left_adjoint"] is True
        for t, entry in enumerate(cert["certificate"].entries):
            j, l = data.index[t]
            if l == 1:
                ok &= entry.psi.dim == 0
            else:
                ok &= entry.psi.dim == projective(data.gamma, data.position(j, l - 1)).dim
    a3 = ALGS["A3_ba"]
    simples_cert = find_well_formed_certificate(a3)
    ok &= all(d.dim == 1 for d in standard_system(a3).delta)
    ok &= isinstance(simples_cert, WellFormedCertificate)
    ok &= all(e.psi.dim == 0 for e in simples_cert.entries)
    rev = a3.reordered([2, 1, 0])
    rsys = standard_system(rev)
    ok &= [d.dim for d in rsys.delta] == [projective(rev, i).dim for i in range(3)]
    ok &= isinstance(find_well_formed_certificate(rev, rsys), WellFormedRefusal)
    line(4, ok, "QH + well-formed certification and the refusal case")
    assert ok


@pytest.mark.criterion(5, "exceptional collections")
def test_criterion_5_exceptional():
    targets = [ALGS[n] for n in DIRECTED] + [AUS[n].gamma for n in ("A2", "dual2", "trunc3")]
    ok = True
    for alg in targets:
        sysd = standard_system(alg)
        ok &= is_quasi_hereditary(alg, sysd).quasi_hereditary is True
        ok &= verify_exceptional_collection(sysd.delta, standard=True)["exceptional"] is True
        cert = find_well_formed_certificate(alg, sysd)
        ok &= isinstance(cert, WellFormedCertificate)
        if isinstance(cert, WellFormedCertificate):
            d = dual_collection_check(alg, sysd, cert)
            ok &= d["K_delta_identity"] is True and d["delta_nabla_identity"] is True
            ok &= d["ok"] is True
    line(5, ok, "Delta exceptional, dual tables are identity patterns")
    assert ok


@pytest.mark.criterion(6, "gluing")
def test_criterion_6_gluing():
    ok = True
    for a in CORPUS_NAMES:
        for b in CORPUS_NAMES:
            g = glue(ALGS[a], ALGS[b])
            ok &= same_structure(g.algebra, direct_product(ALGS[a], ALGS[b]))
    rng = random.Random(0)
    for _ in range(10):
        a, b = ALGS[rng.choice(CORPUS_NAMES)], ALGS[rng.choice(CORPUS_NAMES)]
        t = random_bimodule(b, a, rng)
        g = glue(a, b, t)
        r = verify_sod(g)
        ok &= g.algebra.dim == a.dim + t.dim + b.dim and r["dim_additive"] is True
        ok &= r["k0_rank"] == {"A": a.n, "B": b.n, "C": a.n + b.n} and r["k0_additive"] is True
        ok &= r["round_trip"] is True
        ok &= r["ext_B_projectives_to_A_block_zero"] is True
        ok &= r["ok"] is True
    k, k2 = ALGS["k"], base_field_algebra(QQ, "k2")
    t = parse_bimodule_spec("bimodule T over k k2\ndim 1\n", {"k": k, "k2": k2})
    ok &= verify_sod(glue(k, k2, t))["cartan"] == [[1, 0], [1, 1]]
    line(6, ok, "product, additivity, round trip, semi-orthogonality")
    assert ok


@pytest.mark.criterion(7, "partner form invariants")
def test_criterion_7_forms():
    ok = len(KS_TRIPLES) == 20
    forms = []
    for g, l1, l2 in KS_TRIPLES:
        t, f = ks_partner_form(g, l1, l2)
        ok &= t == 1 - g - l1 * l2 and f == [[t, 1], [-1, 0]]
        ok &= form_invariants(f) == (1, (2 * abs(t), 0))
        forms.append((t, f))
    for (t1, f1), (t2, f2) in combinations(forms, 2):
        if abs(t1) != abs(t2):
            ok &= forms_distinguished(f1, f2) == "distinguished"
    rng = random.Random(7)
    for trial in range(200):
        f = forms[trial % 20][1]
        ok &= form_invariants(congruent(f, random_unimodular(2, rng))) == form_invariants(f)
    line(7, ok, "t = 1 - g - l1 l2, Smith invariants, congruence stability")
    assert ok


@pytest.mark.criterion(8, "realization plan")
def test_criterion_8_plan():
    ok = True
    for name in CORPUS_NAMES:
        lam = ALGS[name]
        plan, summary = plan_for_base_algebra(lam)
        ok &= summary["rank_E"] == lam.dim
        ok &= [p["rank"] for p in summary["per_projective"]] == \
            [projective(lam, j).dim for j in range(lam.n)]
        ok &= all(s.f_rank >= 3 for s in plan.steps)
        dim = 1
        for s in plan.steps:
            dim += s.f_rank - 1
            ok &= s.dim == dim
        ok &= plan.dim_total == dim and plan.as_dict()["base"] == "P^1"
        ok &= all(plan.checks.values())
    line(8, ok, "rk E = dim Lambda, per-projective ranks, tower invariants")
    assert ok


@pytest.mark.criterion(9, "determinism")
def test_criterion_9_determinism():
    cmd = [sys.executable, "-m", "qhalg", "selftest", "--seed", "7", "--format", "json"]
    runs = [subprocess.run(cmd, capture_output=True, check=False) for _ in range(2)]
    ok = runs[0].returncode == 0 and runs[0].stdout == runs[1].stdout
    rep = json.loads(runs[0].stdout)
    ok &= rep["passed"] == rep["total"] == 9
    gf = subprocess.run(cmd + ["--field", "GF(3)"], capture_output=True, check=False)
    ok &= gf.returncode == 0
    line(9, ok, "seeded selftest reports are byte-identical")
    assert ok

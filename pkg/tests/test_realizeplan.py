import pytest

from qhalg.auslander import build, canonical_certificate
from qhalg.corpus import CORPUS_NAMES, corpus_algebra
from qhalg.quasiher import find_well_formed_certificate, standard_system
from qhalg.realizeplan import PlanError, bundle_rank, plan_for_base_algebra, plan_tower
from qhalg.repmod import projective, regular_module


def test_base_field_plan():
    k = corpus_algebra("k")
    plan = plan_tower(k, find_well_formed_certificate(k))
    assert plan.steps == [] and plan.dim_total == 1
    assert len(plan.line_bundles) == 1
    assert plan.as_dict()["tower"] == "P^1"


def test_dual_numbers_plan():
    plan, summary = plan_for_base_algebra(corpus_algebra("dual2"))
    (step,) = plan.steps
    assert (step.theta_rank, step.psi_rank, step.twists, step.f_rank, step.dim) == (1, 1, 3, 3, 3)
    assert plan.bundle_ranks == {"(1,2)": 2, "(1,1)": 1}
    assert summary["rank_E"] == 2


def test_trunc3_rank():
    _, summary = plan_for_base_algebra(corpus_algebra("trunc3"))
    assert summary["rank_E"] == 3


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_plan_invariants(name):
    lam = corpus_algebra(name)
    plan, summary = plan_for_base_algebra(lam)
    assert summary["rank_E"] == lam.dim
    assert all(p["rank"] == p["dim"] for p in summary["per_projective"])
    assert all(plan.checks.values())
    assert plan.dim_total == 1 + sum(s.f_rank - 1 for s in plan.steps)
    assert all(s.f_rank >= 3 for s in plan.steps)
    d = plan.as_dict()
    assert set(d) >= {"steps", "line_bundles", "bundle_ranks", "dim_total", "assumptions"}


def test_bundle_rank_examples():
    d = build(corpus_algebra("dual2"))
    sys = standard_system(d.gamma)
    assert bundle_rank(sys, sys.delta[1]) == 1
    assert bundle_rank(sys, sys.theta[0], 1) == 1
    from qhalg.auslander import hat

    assert bundle_rank(sys, hat(d, regular_module(d.base))) == d.base.dim


def test_missing_certificate():
    rev = corpus_algebra("A3_ba").reordered([2, 1, 0])
    with pytest.raises(PlanError):
        plan_tower(rev, find_well_formed_certificate(rev))


def test_bundle_rank_requires_filtration():
    a = corpus_algebra("A2").reordered([1, 0])
    sys = standard_system(a)
    # the simple at the first vertex is not filtered by standard modules here
    from qhalg.repmod import simple

    with pytest.raises(PlanError):
        bundle_rank(sys, simple(a, 1))

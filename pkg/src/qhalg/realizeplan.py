"""Rank and dimension bookkeeping for a tower of projective bundles over P^1.

No sheaves are computed.  Each standard module is assigned a line bundle,
each projective a vector bundle whose rank is its number of standard
factors, and each step k < n records the bundle F_k with X_k = P(F_k).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import Algebra
from .quasiher import (
    StandardSystem, WellFormedCertificate, find_well_formed_certificate, is_quasi_hereditary,
    standard_filtration, standard_system,
)
from .repmod import Module, projective

ASSUMPTIONS = [
    "the twists m_k are the minimal counts with m_k >= 1 and rk F_k >= 3; global generation "
    "and vanishing of higher cohomology after twisting are assumed, not verified",
    "the ample twist exponent s of each step is a named unknown",
    "the plan is the untwisted tower; over a field that is not algebraically closed a twisted "
    "form may be needed",
]


class PlanError(ValueError):
    pass


def bundle_rank(sys: StandardSystem, m: Module, start: int = 0) -> int:
    """Number of standard factors of M, from an exact Delta-filtration."""
    if m.dim == 0:
        return 0
    res = standard_filtration(sys, m, start)
    if res.status != "found":
        raise PlanError(f"{m.name} has no filtration by standard modules: {res.reason}")
    return len(res.filtration.factors)


@dataclass
class PlanStep:
    k: int  # 1-based
    theta_rank: int
    psi_rank: int
    twists: int
    f_rank: int
    dim: int

    def as_dict(self) -> dict:
        return {"k": self.k, "theta_rank": self.theta_rank, "psi_rank": self.psi_rank,
                "twists": self.twists, "f_rank": self.f_rank, "dim_X": self.dim}


@dataclass
class TowerPlan:
    labels: list[str]
    steps: list[PlanStep]  # k = n-1 down to 1
    line_bundles: list[dict]
    bundle_ranks: dict[str, int]
    projective_ranks: dict[str, int] = field(default_factory=dict)  # bundle_rank(Pi_t)
    assumptions: list[str] = field(default_factory=lambda: list(ASSUMPTIONS))
    checks: dict = field(default_factory=dict)

    @property
    def dim_total(self) -> int:
        return self.steps[-1].dim if self.steps else 1

    def invariant_checks(self) -> dict:
        dim = 1
        recursion = True
        for s in self.steps:
            if s.f_rank != s.twists + s.psi_rank - s.theta_rank:
                recursion = False
            if s.dim != dim + s.f_rank - 1:
                recursion = False
            dim = s.dim
        return {
            "f_rank_at_least_3": all(s.f_rank >= 3 for s in self.steps),
            "twists_positive": all(s.twists >= 1 for s in self.steps),
            "dimension_recursion": recursion,
            "dim_total_formula": self.dim_total == 1 + sum(s.f_rank - 1 for s in self.steps),
            "base_is_P1": True,
            "one_line_bundle_per_standard": len(self.line_bundles) == len(self.labels),
            "ranks_agree": self.bundle_ranks == self.projective_ranks,
        }

    def as_dict(self) -> dict:
        return {
            "base": "P^1",
            "steps": [s.as_dict() for s in self.steps],
            "tower": " -> ".join([f"X_{s.k} = P(F_{s.k})" for s in self.steps] + ["P^1"]),
            "line_bundles": self.line_bundles,
            "bundle_ranks": self.bundle_ranks,
            "dim_total": self.dim_total,
            "assumptions": self.assumptions,
            "checks": self.checks,
        }


def plan_tower(alg: Algebra, cert: WellFormedCertificate | None,
               sys: StandardSystem | None = None) -> TowerPlan:
    if not isinstance(cert, WellFormedCertificate):
        raise PlanError("a well-formed certificate is required")
    sys = sys or standard_system(alg)
    n = alg.n
    labels = list(alg.vertex_labels)
    ranks = {labels[n - 1]: 1}
    lines = [{"index": labels[n - 1], "symbol": "O_P1", "introduced_at": n}]
    steps = []
    dim = 1
    for i in range(n - 2, -1, -1):
        r_theta = bundle_rank(sys, sys.theta[i], i + 1)
        r_psi = bundle_rank(sys, cert.entries[i].psi, i + 1)
        m = max(1, 3 + r_theta - r_psi)
        f_rank = m + r_psi - r_theta
        dim = dim + f_rank - 1
        steps.append(PlanStep(i + 1, r_theta, r_psi, m, f_rank, dim))
        ranks[labels[i]] = r_theta + 1
        lines.append({"index": labels[i], "symbol": f"O_X{i + 1}(-1)", "introduced_at": i + 1})
    proj = {labels[t]: bundle_rank(sys, projective(alg, t)) for t in range(n)}
    order = {lab: k for k, lab in enumerate(labels)}
    plan = TowerPlan(labels, steps, sorted(lines, key=lambda x: order[x["index"]]),
                     dict(sorted(ranks.items(), key=lambda kv: order[kv[0]])),
                     dict(sorted(proj.items(), key=lambda kv: order[kv[0]])))
    plan.checks = plan.invariant_checks()
    return plan


def plan_for_base_algebra(lam: Algebra) -> tuple[TowerPlan, dict]:
    from .auslander import build, canonical_certificate

    data = build(lam)
    gamma = data.gamma
    sys = standard_system(gamma)
    qh = is_quasi_hereditary(gamma, sys)
    if not qh.quasi_hereditary:
        raise PlanError("Auslander algebra failed the quasi-hereditary check")
    cert = canonical_certificate(data)["certificate"]
    if not isinstance(find_well_formed_certificate(gamma, sys), WellFormedCertificate):
        raise PlanError("Auslander algebra failed the well-formed check")
    plan = plan_tower(gamma, cert, sys)
    per_projective = []
    total = 0
    for j in range(data.base.n):
        t = data.position(j + 1, data.loewy[j])
        rk = plan.bundle_ranks[gamma.vertex_labels[t]]
        dim_p = projective(data.base, j).dim
        total += rk
        per_projective.append({"projective": data.base.vertex_labels[j], "index": data.label(t),
                               "rank": rk, "dim": dim_p, "ok": rk == dim_p})
    summary = {
        "per_projective": per_projective,
        "rank_E": total,
        "dim_lambda": lam.dim,
        "rank_E_ok": total == lam.dim,
    }
    plan.checks.update({"projective_ranks_match": all(p["ok"] for p in per_projective),
                        "rank_E_equals_dim": total == lam.dim})
    return plan, summary

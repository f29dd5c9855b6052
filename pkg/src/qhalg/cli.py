"""Command-line front end: ``qhalg <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 parse or input error,
3 resource bound exceeded.
"""

from __future__ import annotations

import argparse
import itertools
import sys

from .exactlin import ScalarParseError, field_from_tag
from .quasiher import (
    DEFAULT_BUDGET, BudgetExceeded, WellFormedCertificate, centralizer_ladder, dual_collection_check,
    find_well_formed_certificate, is_quasi_hereditary, standard_system,
)
from .quiver import DEFAULT_DEGREE_BOUND, InfiniteDimensionError, SpecError, build_path_algebra, parse_spec
from .report import digest, emit, render_selftest_human
from .repmod import (
    TruncatedResolutionError, global_dimension, injectives, loewy_length, projective_dimension,
    projectives, simples,
)

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_RESOURCE = 0, 1, 2, 3


class InputError(ValueError):
    pass


# ---------------------------------------------------------------- loading


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _order(spec, text: str | None) -> list[str] | None:
    if not text:
        return spec.order
    verts = list(spec.quiver.vertices)
    if text == "reverse":
        return list(reversed(spec.order or verts))
    order = [v for v in text.replace(",", " ").split() if v]
    if sorted(order) != sorted(verts) or len(set(order)) != len(order):
        raise SpecError(f"--order must be a permutation of the vertices {' '.join(verts)}")
    return order


def load(path: str, args):
    text = _read(path)
    fld = field_from_tag(args.field) if args.field else None
    spec = parse_spec(text, fld)
    spec.order = _order(spec, getattr(args, "order", None))
    alg = build_path_algebra(spec, args.degree_bound, apply_order=True)
    return alg, text


# ---------------------------------------------------------------- commands


def _header(command: str, alg, text: str) -> dict:
    return {"command": command, "input_digest": digest(text), "algebra": alg.name,
            "field": alg.field.name, "vertex_order": list(alg.vertex_labels)}


def cmd_analyze(args) -> tuple[dict, int]:
    alg, text = load(args.spec, args)
    rep = _header("analyze", alg, text)
    rad_dims = []
    k = 1
    while True:
        d = len(alg.radical_power(k))
        rad_dims.append(d)
        if d == 0:
            break
        k += 1
    table = []
    for s, p, i in zip(simples(alg), projectives(alg), injectives(alg)):
        table.append({"vertex": alg.vertex_labels[s.vertex_of[0]],
                      "simple": s.dimvec, "projective": p.dimvec, "injective": i.dimvec,
                      "loewy_length": loewy_length(p), "pd_simple": projective_dimension(s)})
    rep.update({
        "dim": alg.dim,
        "vertices": alg.n,
        "basis": alg.labels,
        "radical_dim": len(alg.radical),
        "radical_power_dims": rad_dims,
        "nilpotency_index": alg.nilpotency_index,
        "cartan": alg.cartan(),
        "gldim": global_dimension(alg),
        "modules": table,
        "associative": alg.is_associative(),
    })
    from .repmod import euler_form_from_cartan

    n = alg.n
    unit = [[int(a == b) for b in range(n)] for a in range(n)]
    rep["euler_form_simples"] = [[int(euler_form_from_cartan(alg, unit[a], unit[b])) for b in range(n)]
                                 for a in range(n)] if rep["gldim"] is not None else None
    return rep, EXIT_OK


def _qh_block(alg, sys, verdict) -> dict:
    lab = alg.vertex_labels
    witnesses = []
    for i, f in enumerate(verdict.filtrations):
        witnesses.append({
            "index": lab[i],
            "delta_dimvec": sys.delta[i].dimvec,
            "theta_dimvec": sys.theta[i].dimvec,
            "xi_below": verdict.condition1[i],
            "theta_filtration": verdict.condition2[i],
            "theta_factors": [lab[j] for j in f.factors] if f is not None else None,
        })
    return {"quasi_hereditary": verdict.quasi_hereditary, "witnesses": witnesses,
            "reasons": verdict.reasons}


def cmd_check_qh(args) -> tuple[dict, int]:
    alg, text = load(args.spec, args)
    sys = standard_system(alg)
    verdict = is_quasi_hereditary(alg, sys)
    rep = _header("check-qh", alg, text)
    rep.update(_qh_block(alg, sys, verdict))
    if verdict.quasi_hereditary:
        rep["centralizer_ladder"] = centralizer_ladder(alg)
    return rep, EXIT_OK if verdict.quasi_hereditary else EXIT_FAIL


def _certificate_block(alg, sys, cert) -> dict:
    lab = alg.vertex_labels
    entries = []
    for e in cert.entries:
        f = e.filtration
        entries.append({
            "index": lab[e.index],
            "psi_dimvec": e.psi.dimvec if e.psi.dim else [0] * alg.n,
            "psi_factors": [lab[j] for j in f.factors] if f is not None else [],
            "left_adjoint_cohomology": e.dual_cohomology,
            "K": f"Pi_{lab[e.index]} (degree 0) -> Psi_{lab[e.index]} (degree 1)",
        })
    return {"criterion": cert.criterion, "entries": entries}


def cmd_check_wf(args) -> tuple[dict, int]:
    alg, text = load(args.spec, args)
    sys = standard_system(alg)
    verdict = is_quasi_hereditary(alg, sys)
    rep = _header("check-wf", alg, text)
    rep["quasi_hereditary"] = verdict.quasi_hereditary
    if not verdict.quasi_hereditary:
        rep["well_formed"] = None
        rep["reasons"] = verdict.reasons
        return rep, EXIT_FAIL
    cert = find_well_formed_certificate(alg, sys)
    if not isinstance(cert, WellFormedCertificate):
        rep["well_formed"] = False
        rep["refusal"] = {"index": alg.vertex_labels[cert.index], "reason": cert.reason,
                          "left_adjoint_cohomology": cert.dual_cohomology}
        return rep, EXIT_FAIL
    rep["well_formed"] = True
    rep["certificate"] = _certificate_block(alg, sys, cert)
    dual = dual_collection_check(alg, sys, cert)
    rep["dual_collection"] = dual
    return rep, EXIT_OK if dual["ok"] else EXIT_FAIL


def cmd_auslander(args) -> tuple[dict, int]:
    from .auslander import build, full_report

    lam, text = load(args.spec, args)
    data = build(lam)
    gamma = data.gamma
    rep = _header("auslander", lam, text)
    body = full_report(data)
    body["gamma_basis"] = [{"label": gamma.labels[x], "slice": [data.label(t), data.label(s)]}
                           for x, (t, s) in enumerate(gamma.slices)]
    rep.update(body)
    ok = all(body[k]["ok"] for k in ("hom_formula", "dim_formula", "gldim", "endomorphism",
                                     "simple_images", "well_formed")) and body["quasi_hereditary"]
    rep["ok"] = ok
    return rep, EXIT_OK if ok else EXIT_FAIL


def cmd_glue(args) -> tuple[dict, int]:
    from .gluing import ActionError, glue, parse_bimodule_spec, verify_sod

    a, ta = load(args.spec_a, args)
    b, tb = load(args.spec_b, args)
    tt = _read(args.bimodule)
    if a.name == b.name:
        b.name = b.name + "'"
    t = parse_bimodule_spec(tt, {a.name: a, b.name: b})
    if t.right_algebra is not a or t.left_algebra is not b:
        raise InputError(f"bimodule must be declared 'over {a.name} {b.name}'")
    try:
        g = glue(a, b, t)
    except ActionError as exc:
        raise InputError(str(exc)) from None
    rep = {"command": "glue", "input_digest": digest(ta + tb + tt), "A": a.name, "B": b.name,
           "bimodule": t.name, "field": a.field.name,
           "glued_basis": g.algebra.labels, "glued_vertices": list(g.algebra.vertex_labels)}
    sod = verify_sod(g)
    rep["verification"] = sod
    return rep, EXIT_OK if sod["ok"] else EXIT_FAIL


def cmd_ks(args) -> tuple[dict, int]:
    from .gluing import curve_form, form_invariants, forms_distinguished, ks_partner_form

    forms = []
    for g, l1, l2 in itertools.product(args.genus, args.l1, args.l2):
        t, f = ks_partner_form(g, l1, l2)
        det, smith = form_invariants(f)
        forms.append({"g": g, "l1": l1, "l2": l2, "t": t, "form": f, "det": det,
                      "smith_of_symmetrization": list(smith)})
    pairs = []
    for x, y in itertools.combinations(forms, 2):
        verdict = forms_distinguished(x["form"], y["form"])
        pairs.append({"first": [x["g"], x["l1"], x["l2"]], "second": [y["g"], y["l1"], y["l2"]],
                      "t": [x["t"], y["t"]], "verdict": verdict})
    rep = {"command": "ks", "curve_forms": {str(g): curve_form(g) for g in sorted(set(args.genus))},
           "forms": forms, "pairs": pairs,
           "note": "invariants certify inequivalence only; 'not distinguished' is no equivalence claim"}
    return rep, EXIT_OK


def cmd_realize_plan(args) -> tuple[dict, int]:
    from .realizeplan import PlanError, plan_for_base_algebra, plan_tower

    alg, text = load(args.spec, args)
    rep = _header("realize-plan", alg, text)
    if args.direct:
        sys = standard_system(alg)
        cert = find_well_formed_certificate(alg, sys) if is_quasi_hereditary(alg, sys).quasi_hereditary \
            else None
        try:
            plan = plan_tower(alg, cert, sys)
        except PlanError as exc:
            rep["error"] = str(exc)
            return rep, EXIT_FAIL
        rep["plan"] = plan.as_dict()
        return rep, EXIT_OK if all(plan.checks.values()) else EXIT_FAIL
    plan, summary = plan_for_base_algebra(alg)
    rep["plan"] = plan.as_dict()
    rep["summary"] = summary
    ok = summary["rank_E_ok"] and all(plan.checks.values())
    return rep, EXIT_OK if ok else EXIT_FAIL


def cmd_selftest(args) -> tuple[dict, int]:
    from .selftest import run_selftest

    fld = field_from_tag(args.field) if args.field else field_from_tag("QQ")
    rep = run_selftest(fld, args.seed, args.budget, args.only)
    return rep, EXIT_OK if rep["ok"] else EXIT_FAIL


# ---------------------------------------------------------------- parser


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="QQ or GF(p); overrides the field line of the input file")
    common.add_argument("--order", help="vertex order, e.g. '3,2,1', or 'reverse'")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="node budget of the generic filtration search")
    common.add_argument("--format", choices=("human", "json"), default="human")
    common.add_argument("--degree-bound", type=int, default=DEFAULT_DEGREE_BOUND,
                        help="largest path length explored while building kQ/I")

    p = argparse.ArgumentParser(prog="qhalg", description="Exact analysis of quasi-hereditary algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, helptext in (
            ("analyze", cmd_analyze, "dimensions, Cartan matrix, gldim, module table"),
            ("check-qh", cmd_check_qh, "quasi-hereditary verdict with filtration witnesses"),
            ("check-wf", cmd_check_wf, "well-formed certificate or refusal"),
            ("auslander", cmd_auslander, "Auslander algebra and its verifications"),
            ("realize-plan", cmd_realize_plan, "rank ledger of the projective-bundle tower")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("spec")
        if name == "realize-plan":
            s.add_argument("--direct", action="store_true",
                           help="plan on the algebra itself instead of its Auslander algebra")
        s.set_defaults(func=fn)

    s = sub.add_parser("glue", parents=[common], help="triangular gluing along a bimodule")
    s.add_argument("spec_a")
    s.add_argument("spec_b")
    s.add_argument("bimodule")
    s.set_defaults(func=cmd_glue)

    s = sub.add_parser("ks", parents=[common], help="partner Euler forms and their invariants")
    s.add_argument("--genus", type=int, nargs="+", default=[0])
    s.add_argument("--l1", type=int, nargs="+", default=[1])
    s.add_argument("--l2", type=int, nargs="+", default=[1])
    s.set_defaults(func=cmd_ks)

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance corpus")
    s.add_argument("--only", type=_int_list, help="comma-separated criterion numbers")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rep, code = args.func(args)
    except (SpecError, ScalarParseError, InputError) as exc:
        print(f"qhalg: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (BudgetExceeded, InfiniteDimensionError, TruncatedResolutionError) as exc:
        print(f"qhalg: resource bound exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"qhalg: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    human = render_selftest_human if args.command == "selftest" else None
    sys.stdout.write(emit(rep, args.format, human))
    return code


if __name__ == "__main__":
    sys.exit(main())

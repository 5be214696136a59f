"""Command-line interface.

Subcommands: validate, info, poly, cones, layered, norm, specialize,
check, batch.  Reports are deterministic: identical input and version
produce byte-identical output (timing is only included on request).
Exit codes: 0 success, 1 mathematical failure, 2 usage error,
3 budget exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from fractions import Fraction

from . import __version__, cones, graphs, homology, ingest, invariants, trimodel
from .laurent import render, specialize

SCHEMA_VERSION = 1

_BUDGET_ERRORS = (
    graphs.CycleBudgetExceeded,
    invariants.MinorBudgetExceeded,
    cones.DimensionBudgetExceeded,
)
_MATH_ERRORS = (
    trimodel.ValidationError,
    ingest.VtSyntaxError,
    ingest.UnknownFormatVersion,
    ingest.CountMismatch,
    ingest.MalformedCode,
    ingest.NonVeering,
    ingest.FeatureDisabled,
    homology.NotClosed,
    homology.NotIncident,
    homology.SwitchConditionViolated,
    invariants.InternalMismatch,
    graphs.FacesNotAdjacent,
)


class UsageError(ValueError):
    pass


def load_input(spec_arg):
    """A .vt file path or a taut signature code; returns
    (triangulation, identity dict)."""
    if os.path.exists(spec_arg):
        with open(spec_arg, "r", encoding="utf-8") as fh:
            text = fh.read()
        doc = ingest.parse_vt(text)
        tri = ingest.to_triangulation(doc)
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        return tri, {"input": spec_arg, "sha256": digest}
    if "_" in spec_arg:
        doc = ingest.import_taut_isosig(spec_arg)
        tri = ingest.to_triangulation(doc)
        digest = hashlib.sha256(spec_arg.encode("utf-8")).hexdigest()
        return tri, {"input": spec_arg, "sha256": digest}
    raise UsageError(f"no such file and not a taut signature: {spec_arg!r}")


def _frac(x):
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f}"


def _chain_json(chain):
    return [[f, c] for f, c in sorted(chain.items())]


def homology_json(hm):
    return {
        "b": hm.b,
        "torsion": list(hm.torsion),
        "basis_chains": [_chain_json(ch) for ch in hm.basis_chains],
    }


def invariants_json(rep):
    return {
        "veering": render(rep.veering),
        "ab": render(rep.ab),
        "ab_cycles": [
            {"faces": c.faces, "k": c.k, "g": list(c.g), "sign": c.sign}
            for c in rep.ab_cycles
        ],
        "taut": render(rep.taut.poly),
        "taut_mode": rep.taut.mode,
        "taut_caveat": rep.taut.caveat,
        "taut_factor": rep.taut.factor,
        "factorization_ok": rep.factorization_ok,
        "factorization_factor": rep.factorization_factor,
        "identities": {
            k: v for k, v in rep.identities.items() if k != "details"
        },
    }


def cones_json(tri, hm, cap):
    gens = cones.homology_direction_generators(tri, hm, cap=cap)
    cc = cones.carried_cone(tri, hm)
    return {
        "direction_generators": [list(g) for g in gens],
        "carried_rays": [list(r) for r in cc.rays],
        "carried_inequalities": [list(a) for a in cc.inequalities],
        "carried_lineality_dim": cc.lineality_dim,
    }


def layered_json(verdict):
    out = {"layered": verdict.layered}
    if verdict.layered:
        out["eta"] = list(verdict.eta)
        out["weights"] = list(verdict.weights)
    else:
        out["farkas"] = [[c, list(g)] for c, g in verdict.farkas]
    return out


def norm_json(nd):
    return {
        "class": [_frac(v) for v in nd.y],
        "norm": _frac(nd.x),
        "euler": _frac(nd.euler),
        "face_codim": nd.face_codim,
    }


def _emit(report, args):
    if args.format == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        lines = []

        def walk(prefix, value):
            if isinstance(value, dict):
                for k in value:
                    walk(f"{prefix}{k}." if prefix else f"{k}.", value[k])
            else:
                lines.append(f"{prefix[:-1]}: {json.dumps(value)}")

        walk("", report)
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _base_report(identity):
    return {
        "schema": SCHEMA_VERSION,
        "version": __version__,
        **identity,
    }


def cmd_validate(args):
    tri, identity = load_input(args.input)
    report = _base_report(identity)
    report["valid"] = True
    report.update(tri.stats())
    _emit(report, args)
    return 0


def cmd_info(args):
    tri, identity = load_input(args.input)
    hm = homology.homology_basis(tri)
    report = _base_report(identity)
    report.update(tri.stats())
    report["veers"] = {str(e): v for e, v in sorted(tri.veers.items())}
    report["homology"] = homology_json(hm)
    _emit(report, args)
    return 0


def cmd_poly(args):
    tri, identity = load_input(args.input)
    hm = homology.homology_basis(tri)
    report = _base_report(identity)
    report["homology"] = homology_json(hm)
    if args.which in ("all",):
        rep = invariants.compute_report(
            tri, hm, mode=args.mode, minor_budget=args.minor_budget
        )
        report["polynomials"] = invariants_json(rep)
    else:
        if args.which == "veering":
            report["polynomials"] = {
                "veering": render(invariants.veering_polynomial(tri, hm))
            }
        elif args.which == "ab":
            vab, _ = invariants.ab_polynomial(tri, hm)
            from .laurent import normalize_unit

            report["polynomials"] = {"ab": render(normalize_unit(vab))}
        else:  # taut
            tr = invariants.taut_polynomial(
                tri, hm, mode=args.mode, minor_budget=args.minor_budget
            )
            report["polynomials"] = {
                "taut": render(tr.poly),
                "taut_mode": tr.mode,
                "taut_caveat": tr.caveat,
                "taut_factor": tr.factor,
            }
    _emit(report, args)
    return 0


def cmd_cones(args):
    tri, identity = load_input(args.input)
    hm = homology.homology_basis(tri)
    report = _base_report(identity)
    report["homology"] = homology_json(hm)
    report["cones"] = cones_json(tri, hm, args.cycle_cap)
    _emit(report, args)
    return 0


def cmd_layered(args):
    tri, identity = load_input(args.input)
    hm = homology.homology_basis(tri)
    verdict = cones.is_layered(tri, hm, cap=args.cycle_cap)
    report = _base_report(identity)
    report["layeredness"] = layered_json(verdict)
    _emit(report, args)
    return 0


def _parse_weights(text, nfaces):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != nfaces:
        raise UsageError(
            f"expected {nfaces} weights, got {len(parts)}"
        )
    return [Fraction(p) for p in parts]


def cmd_norm(args):
    tri, identity = load_input(args.input)
    hm = homology.homology_basis(tri)
    if args.weights:
        w = _parse_weights(args.weights, len(tri.faces))
    else:
        verdict = cones.is_layered(tri, hm, cap=args.cycle_cap)
        if not verdict.layered:
            raise homology.SwitchConditionViolated(
                "no --weights given and the triangulation is not layered"
            )
        w = verdict.weights
    nd = cones.norm_data(tri, hm, w, cap=args.cycle_cap)
    report = _base_report(identity)
    report["weights"] = [_frac(v) for v in w]
    report["norm"] = norm_json(nd)
    _emit(report, args)
    return 0


def cmd_specialize(args):
    tri, identity = load_input(args.input)
    hm = homology.homology_basis(tri)
    alpha = [int(p) for p in args.klass.split(",")]
    if len(alpha) != hm.b:
        raise UsageError(f"--class needs {hm.b} integers")
    which = args.which if args.which != "all" else "veering"
    if which == "veering":
        p = invariants.veering_polynomial(tri, hm)
    elif which == "ab":
        from .laurent import normalize_unit

        p, _ = invariants.ab_polynomial(tri, hm)
        p = normalize_unit(p)
    else:
        p = invariants.taut_polynomial(
            tri, hm, mode=args.mode, minor_budget=args.minor_budget
        ).poly
    report = _base_report(identity)
    report["which"] = which
    report["class"] = alpha
    report["specialized"] = render(specialize(p, alpha))
    _emit(report, args)
    return 0


def check_all(tri, cycle_cap=cones.CYCLE_CAP_DEFAULT,
              minor_budget=invariants.MINOR_BUDGET_DEFAULT):
    """Run every internal consistency check; returns (ok, failures)."""
    failures = []
    hm = homology.homology_basis(tri)
    ids = invariants.structural_identities(tri, hm)
    for key in ("face_product", "face_sum", "ab_det"):
        if not ids[key]:
            failures.append(f"identity {key}")
    for sec in hm.sectors:
        if homology.path_sum(hm, sec.sides[0]) != homology.path_sum(
            hm, sec.sides[1]
        ):
            failures.append(f"sector labels edge {sec.edge}")
    raw = invariants.veering_polynomial(tri, hm, canonical=False)
    try:
        oracle = invariants.perron_clique_oracle(tri, hm, cap=cycle_cap)
        if raw != oracle:
            failures.append("veering clique oracle")
    except graphs.CycleBudgetExceeded:
        pass
    rep = invariants.compute_report(tri, hm, minor_budget=minor_budget)
    if not rep.factorization_ok:
        failures.append("factorization")
    gens = cones.homology_direction_generators(tri, hm, cap=cycle_cap)
    if hm.b <= 3 and len(tri.faces) <= cones.DD_FACE_BUDGET:
        cc = cones.carried_cone(tri, hm)
        dc = cones.dual_cone(hm.b, gens)
        if cc.rays != dc.rays or sorted(cc.lineality) != sorted(dc.lineality):
            failures.append("cone duality")
    verdict = cones.is_layered(tri, hm, cap=cycle_cap)
    if verdict.layered:
        if not all(x > 0 for x in verdict.weights):
            failures.append("carried weights not positive")
        if any(
            sum(e * g for e, g in zip(verdict.eta, gen)) < 1 for gen in gens
        ):
            failures.append("layered certificate")
        cones.norm_data(tri, hm, verdict.weights, cap=cycle_cap)
    else:
        for c, _ in verdict.farkas:
            if c < 0:
                failures.append("Farkas certificate sign")
        total = [0] * hm.b
        for c, g in verdict.farkas:
            for i in range(hm.b):
                total[i] += c * g[i]
        if any(total):
            failures.append("Farkas certificate sum")
    # determinism: recompute with a rotated tetrahedron order and a
    # re-rooted tree, compare canonical polynomials after substitution
    hm2 = homology.homology_basis(
        tri, root=tri.n - 1, edge_order=list(range(len(tri.faces)))[::-1]
    )
    from .laurent import normalize_unit, substitute

    M = [
        list(homology.chain_class(hm, ch)) for ch in hm2.basis_chains
    ]
    M = [list(col) for col in zip(*M)] if hm.b else []
    v2 = invariants.veering_polynomial(tri, hm2, canonical=False)
    if normalize_unit(substitute(v2, M)) != normalize_unit(raw):
        failures.append("determinism under tree change")
    return (not failures), failures


def cmd_check(args):
    tri, identity = load_input(args.input)
    ok, failures = check_all(
        tri, cycle_cap=args.cycle_cap, minor_budget=args.minor_budget
    )
    report = _base_report(identity)
    report["ok"] = ok
    report["failures"] = failures
    _emit(report, args)
    return 0 if ok else 1


def _batch_row(item):
    index, line, cycle_cap, minor_budget = item
    try:
        tri, _ = load_input(line)
        hm = homology.homology_basis(tri)
        rep = invariants.compute_report(tri, hm, minor_budget=minor_budget)
        verdict = cones.is_layered(tri, hm, cap=cycle_cap)
        return index, "\t".join(
            [
                line,
                "ok",
                str(hm.b),
                render(rep.veering),
                render(rep.taut.poly),
                "layered" if verdict.layered else "nonlayered",
            ]
        )
    except _BUDGET_ERRORS as exc:
        return index, f"{line}\tbudget\t{exc}"
    except (_MATH_ERRORS + (UsageError, OSError)) as exc:
        return index, f"{line}\tfailed\t{exc}"


def cmd_batch(args):
    with open(args.input, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    items = [
        (i, ln, args.cycle_cap, args.minor_budget)
        for i, ln in enumerate(lines)
    ]
    if args.jobs > 1:
        import multiprocessing

        with multiprocessing.Pool(args.jobs) as pool:
            results = pool.map(_batch_row, items)
    else:
        results = [_batch_row(it) for it in items]
    rows = [row for _, row in sorted(results)]
    text = "\n".join(rows) + "\n" if rows else ""
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="veerpoly",
        description="Polynomial invariants of veering triangulations.",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("input", help=".vt file or taut signature code")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out", default=None)
        p.add_argument("--cycle-cap", type=int, default=cones.CYCLE_CAP_DEFAULT)
        p.add_argument(
            "--minor-budget",
            type=int,
            default=invariants.MINOR_BUDGET_DEFAULT,
        )

    common(sub.add_parser("validate", help="validate the input"))
    common(sub.add_parser("info", help="combinatorial and homology summary"))
    p = sub.add_parser("poly", help="polynomial invariants")
    common(p)
    p.add_argument(
        "--which", choices=("veering", "taut", "ab", "all"), default="all"
    )
    p.add_argument(
        "--mode", choices=("exact", "division", "auto"), default="auto"
    )
    common(sub.add_parser("cones", help="carried and direction cones"))
    common(sub.add_parser("layered", help="layeredness verdict"))
    p = sub.add_parser("norm", help="norm and Euler data of a weight vector")
    common(p)
    p.add_argument("--weights", default=None, help="comma-separated rationals")
    p = sub.add_parser("specialize", help="specialize along an integral class")
    common(p)
    p.add_argument(
        "--class", dest="klass", required=True, help="comma-separated integers"
    )
    p.add_argument(
        "--which", choices=("veering", "taut", "ab", "all"), default="veering"
    )
    p.add_argument(
        "--mode", choices=("exact", "division", "auto"), default="auto"
    )
    common(sub.add_parser("check", help="run all internal consistency checks"))
    p = sub.add_parser("batch", help="process a list of inputs")
    common(p)
    p.add_argument("--jobs", type=int, default=1)
    return ap


_COMMANDS = {
    "validate": cmd_validate,
    "info": cmd_info,
    "poly": cmd_poly,
    "cones": cmd_cones,
    "layered": cmd_layered,
    "norm": cmd_norm,
    "specialize": cmd_specialize,
    "check": cmd_check,
    "batch": cmd_batch,
}


def run(argv=None):
    os.environ.get("VEERPOLY_SEED")  # accepted and ignored: no randomness
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _BUDGET_ERRORS as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except _MATH_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

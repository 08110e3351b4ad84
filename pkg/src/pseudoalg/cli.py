"""Command-line surface: `pa <subcommand>`.

Exit codes: 0 all checks pass; 1 a mathematical check failed; 2 input or
usage error; 3 resource budget or internal invariant violation.  Reports are
deterministic for identical inputs and seeds (timing is opt-in via --timing
and excluded from the determinism contract); every report names the
convention flags in force.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from fractions import Fraction

from .hopf import InputError, InternalInvariantError
from .cochains import nr_bracket, skew_check
from .structures import ALIGNED, check_lie, check_mc_omega, check_pc
from .deformation import (
    TYPE_I,
    TYPE_II,
    curved_l_type1,
    curved_l_type2,
    dmap1_residual,
    dmap2_residual,
    linf_jacobi_check,
    twist1,
    twist2,
)
from .cohomology import (
    CLASSICAL,
    ResourceError,
    handle_for,
    truncated_cohomology,
)
from . import io as pio
from . import zoo as pzoo

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3

CONVENTIONS = {
    "permutation_variant": ALIGNED,
    "ce_sign_convention": CLASSICAL,
    "linf_identity_signs": "graded-symmetric-koszul",
}


class Report:
    """Accumulates named checks; renders human text and structured JSON."""

    def __init__(self, argv, seed=None):
        self.command = ["pa"] + list(argv)
        self.seed = seed
        self.checks = []
        self.outputs = []
        self.t0 = time.monotonic()

    def add(self, name: str, passed: bool, detail=None):
        self.checks.append({"name": name, "status": "pass" if passed else "fail",
                            "detail": detail})

    def note_output(self, path):
        self.outputs.append(str(path))

    def ok(self) -> bool:
        return all(c["status"] == "pass" for c in self.checks)

    def as_dict(self, timing=False) -> dict:
        out = {
            "command": self.command,
            "conventions": dict(CONVENTIONS),
            "checks": self.checks,
            "verdict": "pass" if self.ok() else "fail",
        }
        if self.seed is not None:
            out["seed"] = self.seed
        if self.outputs:
            out["outputs"] = self.outputs
        if timing:
            out["wall_ms"] = round(1000 * (time.monotonic() - self.t0), 3)
        return out

    def render(self, as_json=False, timing=False) -> str:
        data = self.as_dict(timing=timing)
        if as_json:
            return json.dumps(data, indent=1, sort_keys=True)
        lines = [f"# {' '.join(self.command)}"]
        lines.append(
            "conventions: "
            + ", ".join(f"{k}={v}" for k, v in sorted(CONVENTIONS.items()))
        )
        if self.seed is not None:
            lines.append(f"seed: {self.seed}")
        for c in self.checks:
            mark = "PASS" if c["status"] == "pass" else "FAIL"
            line = f"[{mark}] {c['name']}"
            if c["detail"]:
                line += f": {_render_detail(c['detail'])}"
            lines.append(line)
        for p in self.outputs:
            lines.append(f"wrote {p}")
        if timing:
            lines.append(f"wall_ms: {data['wall_ms']}")
        lines.append(f"verdict: {data['verdict']}")
        return "\n".join(lines)


def _render_detail(detail) -> str:
    if isinstance(detail, str):
        return detail
    return json.dumps(detail, sort_keys=True, default=str)


def _residual_dump(cochain) -> list:
    out = []
    for t, v in sorted(cochain.table.items()):
        if not v.is_zero():
            out.append({"args": list(t), "terms": pio.ptelem_to_json(v)})
    return out


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return pio.loads(fh.read())
    except OSError as exc:
        raise pio.ParseError(f"cannot read {path}: {exc}") from exc


def _load_structure(path, validate=True, report=None):
    Q = pio.structure_from_json(_load_json(path))
    if validate:
        pc = check_pc(Q)
        if report is not None:
            report.add(
                "load-validate PC1-PC8",
                pc["ok"],
                None
                if pc["ok"]
                else {k: len(v) for k, v in pc["residuals"].items() if v},
            )
        if not pc["ok"] and report is None:
            raise InputError("structure fails PC validation")
    return Q


def _load_map(path, Q, kind):
    data = _load_json(path)
    src, dst = (Q.g, Q.h) if kind == TYPE_I else (Q.h, Q.g)
    names = pio.map_orientation_of(data)
    expect = ("g", "h") if kind == TYPE_I else ("h", "g")
    if tuple(names) != expect:
        raise pio.ParseError(
            f"map orientation {names} does not match type {kind} (expect {expect})"
        )
    return pio.map_from_json(data, src, dst)


def _write(path, data, report):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(pio.dumps(data))
    report.note_output(path)


# -- subcommand bodies -------------------------------------------------------------


def cmd_check(args, report):
    Q = _load_structure(args.structure, validate=False)
    om = Q.omega()
    skew = skew_check(om)
    report.add("omega skew-symmetry", not skew, None if not skew else f"{len(skew)} residuals")
    lie = check_lie(om)
    report.add(
        "omega Jacobi identity",
        not lie["jacobi"],
        None if not lie["jacobi"] else {str(k): "nonzero" for k in lie["jacobi"]},
    )


def cmd_check_qt(args, report):
    Q = _load_structure(args.structure, validate=False)
    pc = check_pc(Q)
    for label in sorted(pc["residuals"]):
        fails = pc["residuals"][label]
        report.add(
            f"{label}",
            not fails,
            None if not fails else {str(k): pio.ptelem_to_json(v) for k, v in sorted(fails.items())},
        )
    mc = check_mc_omega(Q)
    report.add("[Omega,Omega]_NR = 0", mc["bracket_zero"])
    report.add("PC <-> NR component correspondence", mc["correspondence_ok"])
    report.add("PC verdict agrees with NR verdict", mc["agrees_with_pc"])


def cmd_dmap(args, report):
    Q = _load_structure(args.structure, validate=not args.no_validate, report=report)
    m = _load_map(args.map, Q, args.type)
    resid = dmap1_residual(Q, m) if args.type == TYPE_I else dmap2_residual(Q, m)
    report.add(
        f"type {args.type} deformation-map identity",
        resid.is_zero(),
        None if resid.is_zero() else {"residual": _residual_dump(resid)},
    )


def cmd_twist(args, report):
    Q = _load_structure(args.structure, validate=not args.no_validate, report=report)
    m = _load_map(args.map, Q, args.type)
    if args.type == TYPE_I:
        out, info = twist1(Q, m)
        quasi = True
        result_struct = out
    else:
        res, info = twist2(Q, m)
        quasi = res.xi.is_zero()
        result_struct = res.as_quasi_twilled() if quasi else None
        if not quasi:
            report.add(
                "twisted structure quasi-twilled (xi = 0)",
                False,
                {"xi": _residual_dump(res.xi)},
            )
    report.add("closed form equals bracket series", info["closed_form_equals_series"])
    report.add("series equals conjugated bracket", info["series_equals_conjugation"])
    report.add("map is a deformation map", info["is_dmap"])
    if args.out and result_struct is not None:
        _write(args.out, pio.structure_to_json(result_struct), report)


def cmd_nr(args, report):
    f = pio.cochain_from_json(_load_json(args.f))
    g = pio.cochain_from_json(_load_json(args.g))
    if f.source != g.source or f.source != f.target or g.source != g.target:
        raise pio.ParseError("nr needs two cochains on one common module")
    out = nr_bracket(f, g)
    report.add("nr bracket computed", True, {"arity": out.arity})
    sk = skew_check(out)
    report.add("result skew-symmetric", not sk)
    if args.out:
        _write(args.out, pio.cochain_to_json(out), report)


def cmd_linf(args, report):
    Q = _load_structure(args.structure, validate=not args.no_validate, report=report)
    ops = curved_l_type1(Q) if args.type == TYPE_I else curved_l_type2(Q)
    rng = random.Random(args.seed)
    res = linf_jacobi_check(ops, args.max_arity, rng)
    for n in sorted(res["identities"]):
        report.add(f"higher Jacobi identity n={n}", res["identities"][n])


def cmd_ce(args, report):
    Q = _load_structure(args.structure, validate=not args.no_validate, report=report)
    m = _load_map(args.map, Q, args.type)
    handle = handle_for(args.type, Q, m, convention=CLASSICAL)
    modules = {"g": Q.g, "h": Q.h}
    f = pio.cochain_from_json(_load_json(args.cochain), modules)
    expect = (Q.g, Q.h) if args.type == TYPE_I else (Q.h, Q.g)
    if (f.source, f.target) != expect:
        raise pio.ParseError("cochain block does not match the complex")
    out = handle.diff(f)
    report.add("chevalley-eilenberg differential computed", True, {"arity": out.arity})
    sk = skew_check(out)
    report.add("output skew-symmetric", not sk)
    if args.out:
        _write(args.out, pio.cochain_to_json(out), report)


def cmd_cohomology(args, report):
    Q = _load_structure(args.structure, validate=not args.no_validate, report=report)
    m = _load_map(args.map, Q, args.type)
    handle = handle_for(args.type, Q, m, convention=CLASSICAL)
    dims = truncated_cohomology(handle, args.degree, args.max_pbw)
    report.add(
        f"truncated cohomology at arity {args.degree}, cap {args.max_pbw}",
        True,
        {k: dims[k] for k in ("dim_cochains", "dim_Z", "dim_B", "dim_H", "caveat")},
    )


def cmd_dictionary(args, report):
    Q = _load_structure(args.structure, validate=not args.no_validate, report=report)
    kind = args.kind
    ingredients = _ingredients_from_structure(kind, Q, args.weight)
    Qc = pzoo.build(kind, ingredients)
    src, dst = pzoo.map_orientation(kind, Qc)
    data = _load_json(args.map)
    m = pio.map_from_json(data, src, dst)
    rng = random.Random(args.seed)
    res = pzoo.dictionary_check(kind, ingredients, m, rng=rng, trials=args.trials, Q=Qc)
    report.add(
        "operator identity <=> deformation-map residual",
        res["ok"],
        None
        if res["ok"]
        else {
            "operator_residual": _residual_dump(res["operator_residual"]),
            "deformation_residual": _residual_dump(res["deformation_residual"]),
        },
    )
    given_ok = res["operator_residual"].is_zero()
    report.add(
        "given map satisfies the operator identity",
        given_ok,
        None if given_ok else {"residual": _residual_dump(res["operator_residual"])},
    )


def _ingredients_from_structure(kind, Q, weight):
    """Invert the builder map: recover kind ingredients from the components."""
    from .structures import LiePseudoalgebra

    w = Fraction(weight) if weight is not None else None
    if kind == pzoo.MODIFIED_R:
        if w is None:
            raise pio.ParseError("--weight is required for modified_r")
        table = {
            t: v
            for t, v in (
                ((i, j), Q.eta.value(i, j))
                for i in range(Q.g.rank)
                for j in range(Q.h.rank)
                if i <= j
            )
            if not v.is_zero()
        }
        bracket = pzoo.Cochain(2, Q.g, Q.g, table)
        return {"algebra": LiePseudoalgebra(Q.g, bracket), "weight": w}
    if kind in (pzoo.CROSSED_HOM, pzoo.RELATIVE_RB):
        if w is None:
            raise pio.ParseError(f"--weight is required for {kind}")
        gP = LiePseudoalgebra(Q.g, Q.pi)
        mu = Q.mu if w == 0 else Q.mu.scale(Fraction(1) / w)
        hP = LiePseudoalgebra(Q.h, mu)
        return {"algebra": gP, "coefficients": hP, "action": Q.rho, "weight": w}
    if kind in (pzoo.DERIVATION, pzoo.O_OPERATOR):
        gP = LiePseudoalgebra(Q.g, Q.pi)
        return {"algebra": gP, "module": Q.h, "action": Q.rho}
    if kind == pzoo.HOMOMORPHISM:
        return {
            "algebra": LiePseudoalgebra(Q.g, Q.pi),
            "coefficients": LiePseudoalgebra(Q.h, Q.mu),
        }
    if kind in (pzoo.TWISTED_RB, pzoo.REYNOLDS, pzoo.REYNOLDS_CLASSICAL):
        gP = LiePseudoalgebra(Q.g, Q.pi)
        return {
            "algebra": gP,
            "module": Q.h,
            "action": Q.rho,
            "cocycle": Q.theta,
        }
    if kind == pzoo.MATCHED_PAIR_DEF:
        return {
            "algebra": LiePseudoalgebra(Q.g, Q.pi),
            "coefficients": LiePseudoalgebra(Q.h, Q.mu),
            "action": Q.rho,
            "coaction": Q.eta,
        }
    raise pio.ParseError(f"unknown kind {kind!r}")


def cmd_zoo(args, report):
    if args.list:
        for name in ("virasoro", "cur_sl2", "cur_2dim_nonabelian") + pzoo.ZOO_NAMES:
            print(name)
        return
    name = args.name
    if name is None:
        raise pio.ParseError("zoo needs a name or --list")
    if name in pzoo.ALL_KINDS:
        bundle = pzoo.demo_bundle(name)
        Q = bundle["Q"]
        meta = {"name": name, "kind": name}
    elif name.startswith("rank2_"):
        Q = pzoo.builtin(name)
        bundle = None
        meta = {"name": name}
    else:
        obj = pzoo.builtin(name)
        if isinstance(obj, dict):
            Q, bundle, meta = obj["Q"], obj, {"name": name, "kind": obj["kind"]}
        else:
            raise pio.ParseError(
                f"{name!r} is a Lie pseudoalgebra, not a quasi-twilled structure"
            )
    report.add("structure assembled and PC-validated", check_pc(Q)["ok"])
    if args.out:
        _write(args.out, pio.structure_to_json(Q, meta=meta), report)
        if bundle is not None and args.map_out:
            m = bundle["map"]
            names = ("g", "h") if m.src == Q.g else ("h", "g")
            _write(args.map_out, pio.map_to_json(m, *names), report)


def cmd_rank2(args, report):
    from .rank2 import rank2_search

    res = rank2_search(args.max_deg)
    report.add(
        "elimination complete (no unresolved branches)",
        res["unresolved"] == 0,
        {"families": len(res["families"])},
    )
    report.add(
        "sample instances verify PC",
        all(f["sample_ok"] for f in res["families"]),
    )
    others = [f for f in res["families"] if f["tag"] == "other"]
    report.add(
        "all families classified as types i/ii/iii",
        not others,
        None
        if not others
        else {"other_families": [{k: f[k] for k in ("subs", "free", "nonzero")} for f in others]},
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pa",
        description="Exact checks for quasi-twilled Lie pseudoalgebra structures.",
    )
    ap.add_argument("--json", action="store_true", help="structured report output")
    ap.add_argument("--timing", action="store_true", help="include wall time (non-deterministic)")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, validate_flag=True):
        if validate_flag:
            p.add_argument("--no-validate", action="store_true")

    p = sub.add_parser("check", help="skew + Jacobi of the assembled bracket")
    p.add_argument("structure")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("check-qt", help="PC1-PC8 and the NR cross-check")
    p.add_argument("structure")
    p.set_defaults(fn=cmd_check_qt)

    p = sub.add_parser("dmap", help="deformation-map residual")
    p.add_argument("--type", choices=(TYPE_I, TYPE_II), required=True)
    p.add_argument("structure")
    p.add_argument("map")
    common(p)
    p.set_defaults(fn=cmd_dmap)

    p = sub.add_parser("twist", help="twist by a module map (three routes)")
    p.add_argument("--type", choices=(TYPE_I, TYPE_II), required=True)
    p.add_argument("structure")
    p.add_argument("map")
    p.add_argument("-o", "--out")
    common(p)
    p.set_defaults(fn=cmd_twist)

    p = sub.add_parser("nr", help="Nijenhuis-Richardson bracket of two cochains")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("-o", "--out")
    p.set_defaults(fn=cmd_nr)

    p = sub.add_parser("linf", help="higher Jacobi identities of the controlling operators")
    p.add_argument("--type", choices=(TYPE_I, TYPE_II), required=True)
    p.add_argument("structure")
    p.add_argument("--max-arity", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(fn=cmd_linf)

    p = sub.add_parser("ce", help="Chevalley-Eilenberg differential of a cochain")
    p.add_argument("--type", choices=(TYPE_I, TYPE_II), required=True)
    p.add_argument("structure")
    p.add_argument("map")
    p.add_argument("cochain")
    p.add_argument("-o", "--out")
    common(p)
    p.set_defaults(fn=cmd_ce)

    p = sub.add_parser("cohomology", help="degree-truncated cohomology dimensions")
    p.add_argument("--type", choices=(TYPE_I, TYPE_II), required=True)
    p.add_argument("structure")
    p.add_argument("map")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--max-pbw", type=int, required=True)
    common(p)
    p.set_defaults(fn=cmd_cohomology)

    p = sub.add_parser("dictionary", help="operator identity vs deformation map")
    p.add_argument("--kind", choices=pzoo.ALL_KINDS, required=True)
    p.add_argument("--weight", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("structure")
    p.add_argument("map")
    common(p)
    p.set_defaults(fn=cmd_dictionary)

    p = sub.add_parser("zoo", help="emit curated structures")
    p.add_argument("name", nargs="?")
    p.add_argument("--list", action="store_true")
    p.add_argument("-o", "--out")
    p.add_argument("--map-out")
    p.set_defaults(fn=cmd_zoo)

    p = sub.add_parser("rank2-search", help="bounded-degree rank-2 classification")
    p.add_argument("--max-deg", type=int, required=True)
    p.set_defaults(fn=cmd_rank2)
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    threads = os.environ.get("PA_THREADS")
    if threads is not None:
        try:
            if int(threads) < 1:
                raise ValueError
        except ValueError:
            print(f"error: PA_THREADS must be a positive integer, got {threads!r}", file=sys.stderr)
            return EXIT_INPUT
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else 0
    report = Report(argv, seed=getattr(args, "seed", None))
    try:
        args.fn(args, report)
    except (pio.ParseError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ResourceError, InternalInvariantError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(report.render(as_json=args.json, timing=args.timing))
    return EXIT_PASS if report.ok() else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

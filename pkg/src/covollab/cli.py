"""Command-line front end: every computation emits a result document.

Exit status: 0 when all certificates pass, 1 when one fails, 2 on usage or
precondition errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
import time
from fractions import Fraction

import numpy as np

from . import cohomlab, covolume, localgrp, rootsys
from .cayley import EnumerationBoundExceeded
from .chevorder import InvalidPrimePower, exponents, group_order, ring_group_order
from .intervals import RationalInterval

COMMANDS = ("roots", "order", "covol", "enclosure", "audit-bounds", "verify-lemma-root",
            "verify-lemma-poly", "verify-p-properties", "verify-generation", "h1", "lift",
            "centralizer", "e6-audit", "simply-laced-audit")

USAGE_ERRORS = (localgrp.PreconditionError, localgrp.InsufficientPrecision, rootsys.UnsupportedType,
                rootsys.RootError, InvalidPrimePower, EnumerationBoundExceeded, ValueError)


class UsageError(Exception):
    pass


def cert(name, ok, detail="") -> dict:
    status = ok if isinstance(ok, str) else ("pass" if ok else "fail")
    return {"name": name, "status": status, "detail": detail}


def jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        x = int(x)
        return x if abs(x) < 2 ** 53 else str(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return x
    if isinstance(x, RationalInterval):
        return {"lower": jsonable(x.lower), "upper": jsonable(x.upper)}
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset, np.ndarray)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [jsonable(v) for v in items]
    return str(x)


def _flatten(prefix, x, rows):
    if isinstance(x, dict):
        for k, v in x.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(x, list):
        for i, v in enumerate(x):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, x))


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["section", "key", "value", "detail"])
        for section in ("inputs", "outputs"):
            rows = []
            _flatten("", doc[section], rows)
            for k, v in rows:
                w.writerow([section, k, json.dumps(v) if not isinstance(v, str) else v, ""])
        for c in doc["certificates"]:
            w.writerow(["certificate", c["name"], c["status"], c["detail"]])
        w.writerow(["meta", "elapsed_ms", doc["elapsed_ms"], ""])
        return buf.getvalue()
    lines = [f"command: {doc['command']}"]
    for section in ("inputs", "outputs"):
        rows = []
        _flatten("", doc[section], rows)
        lines.append(f"{section}:")
        lines += [f"  {k} = {v}" for k, v in rows]
    if doc["certificates"]:
        lines.append("certificates:")
        for c in doc["certificates"]:
            lines.append(f"  [{c['status'].upper()}] {c['name']}: {c['detail']}")
    lines.append(f"elapsed_ms: {doc['elapsed_ms']}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argument helpers

def _rstype(args) -> rootsys.RootSystemType:
    if args.family is None or args.rank is None:
        raise UsageError("--family and --rank are required")
    return rootsys.RootSystemType(args.family.upper(), args.rank)


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing " + ", ".join(missing))


def _zeta(args) -> covolume.ZetaPolynomial | None:
    if args.zeta is None:
        return None
    try:
        coeffs = [int(c) for c in args.zeta.split(",")]
    except ValueError:
        raise UsageError(f"--zeta must be comma-separated integers, got {args.zeta!r}") from None
    if len(coeffs) % 2 == 0:
        raise UsageError("--zeta needs an odd number 2g+1 of coefficients")
    g = (len(coeffs) - 1) // 2
    if args.genus is not None and args.genus != g:
        raise UsageError(f"--genus {args.genus} does not match {len(coeffs)} coefficients (g={g})")
    return covolume.ZetaPolynomial(args.q, g, tuple(coeffs))


def _model(args, trunc: int) -> localgrp.GroupModel:
    t = _rstype(args)
    return localgrp.GroupModel.for_type(t, localgrp.TruncRing(args.q, trunc))


def _parse_poly(text: str, nvars: int) -> dict:
    """``"2@3,1;1@0,2"`` means 2*T1^3*T2 + T2^2."""
    terms: dict = {}
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            c, exps = chunk.split("@")
            key = tuple(int(e) for e in exps.split(","))
            terms[key] = terms.get(key, 0) + int(c)
        except ValueError:
            raise UsageError(f"cannot parse polynomial term {chunk!r} (want coef@e1,...,en)") from None
        if len(key) != nvars:
            raise UsageError(f"term {chunk!r} has {len(key)} exponents, expected {nvars}")
    return terms


# ---------------------------------------------------------------------------
# commands; each returns (inputs, outputs, certificates)

def cmd_roots(args):
    t = _rstype(args)
    rs = rootsys.build_root_system(t)
    prof = exponents(t)
    hi, l = rootsys.highest_and_l(rs)
    out = {"type": str(t), "num_roots": len(rs), "num_positive": len(rs.positive),
           "exponents": prof.exponents, "cartan": rs.cartan, "highest_root": hi, "l": l,
           "positive_roots": rs.positive}
    ok = len(rs) == 2 * prof.num_positive
    return {"family": t.family, "rank": t.rank}, out, [
        cert("root_count", ok, f"|Phi|={len(rs)}, 2*sum(m_i)={2 * prof.num_positive}")]


def cmd_order(args):
    _need(args, "q")
    t = _rstype(args)
    prof = exponents(t)
    n = group_order(t, args.q)
    out = {"group_order": n, "dim": prof.dim, "exponents": prof.exponents}
    inputs = {"family": t.family, "rank": t.rank, "q": args.q}
    if args.level is not None:
        out["ring_group_order"] = ring_group_order(t, args.q, args.level)
        inputs["level"] = args.level
    div = n % args.q ** prof.num_positive == 0 and n % (args.q - 1) ** t.rank == 0
    return inputs, out, [cert("divisibility", div, "q^(sum m_i) and (q-1)^r divide the order")]


def cmd_covol(args):
    _need(args, "q")
    t = _rstype(args)
    zeta = _zeta(args)
    inputs = {"family": t.family, "rank": t.rank, "q": args.q}
    if zeta is None or zeta.genus == 0:
        res = covolume.covol_rational(t, args.q)
        return inputs, {"value": res.value, "genus": 0}, []
    inputs["zeta"] = list(zeta.coeffs)
    rep = covolume.validate_zeta(zeta)
    certs = [cert(f"zeta_{k}", v, rep.details.get(k, "")) for k, v in rep.checks.items()]
    out = {"genus": zeta.genus, "zeta_warnings": rep.warnings}
    if "numeric_modulus_deviation" in rep.details:
        out["numeric_modulus_deviation"] = rep.details["numeric_modulus_deviation"]
    if rep.valid:
        out["value"] = covolume.covol_genus(t, zeta).value
    return inputs, out, certs


def cmd_enclosure(args):
    x = args.x if args.x is not None else args.q
    if x is None or args.depth is None:
        raise UsageError("enclosure needs --q (the base x) and --depth")
    enc = covolume.euler_enclosure(x, args.depth)
    majorant = covolume.ln2_lower() - Fraction(1, 16)
    out = {"lower": enc.interval.lower, "upper": enc.interval.upper, "width": enc.interval.width,
           "log_upper": enc.log_upper, "ln2_minus_1_16_lower": majorant,
           "approx_lower": float(enc.interval.lower)}
    certs = [cert("upper_below_2", enc.interval.upper < 2, f"upper end ~ {float(enc.interval.upper):.9f}")]
    if x >= 3:
        certs.append(cert("log_majorant", enc.log_upper < majorant,
                          f"ln F <= {float(enc.log_upper):.6f} < ln2 - 1/16"))
    return {"x": x, "depth": args.depth}, out, certs


def cmd_audit_bounds(args):
    _need(args, "q")
    t = _rstype(args)
    zeta = _zeta(args)
    inputs = {"family": t.family, "rank": t.rank, "q": args.q}
    if zeta is not None:
        inputs["zeta"] = list(zeta.coeffs)
    rep = covolume.bound_audits(t, args.q, zeta)
    certs = rep.pop("certificates")
    return inputs, rep, certs


def cmd_lemma_root(args):
    _need(args, "q")
    t = _rstype(args)
    rep = cohomlab.root_span_rank(rootsys.build_root_system(t), args.q)
    thr = 7 if t == rootsys.RootSystemType("G", 2) else 5
    detail = (f"rank {rep['rank']} of {rep['columns']}; lemma hypothesis q>{thr} "
              f"{'holds' if args.q > thr else 'does not hold'}")
    return {"family": t.family, "rank": t.rank, "q": args.q}, rep, [cert("full_rank", rep["full"], detail)]


def cmd_lemma_poly(args):
    _need(args, "q", "vars", "poly")
    terms = _parse_poly(args.poly, args.vars)
    rep = cohomlab.poly_vanish_check(args.q, args.vars, terms)
    detail = {"zero": "Q vanishes on the torus and is the zero polynomial",
              "witness": f"Q({rep['point']}) = {rep['value']} != 0",
              "counterexample": "Q vanishes on the torus but is nonzero"}[rep["status"]]
    return ({"q": args.q, "vars": args.vars, "poly": args.poly}, rep,
            [cert("vanishing_lemma", rep["status"] != "counterexample", detail)])


def cmd_p_properties(args):
    _need(args, "q", "alpha", "level", "trunc")
    model = _model(args, args.trunc)
    rep = localgrp.verify_p_properties(model, args.alpha, args.level)
    rep["p1_failures"] = [str(f) for f in rep["p1_failures"]]
    certs = [
        cert("P1", rep["p1_ok"], f"{rep['p1_checked']} root and torus elements"),
        cert("P2", rep["p2_ok"], f"observed drop {rep['observed_drop']}, bound {rep['expected_drop']}"),
        cert("P2_drop_exact", rep["p2_drop_exact"], "drop equals the alpha-coefficient of the highest root"),
        cert("P3_unipotent", rep["p3_unipotent_ok"], "xi_l images in R_u(P_alpha^-)"),
        cert("P3_parabolic", rep["p3_parabolic_ok"], "xi_(l+1) images in P_alpha^-"),
    ]
    inputs = {"family": model.rstype.family, "rank": model.rank, "q": args.q,
              "alpha": args.alpha, "level": args.level, "trunc": args.trunc}
    return inputs, rep, certs


def cmd_generation(args):
    _need(args, "q", "level", "trunc")
    model = _model(args, args.trunc)
    rep = localgrp.congruence_generation_audit(model, args.level)
    if rep["complete"]:
        c = cert("closure_order", rep["matches"],
                 f"closure {rep['closure_order']} vs kernel order {rep['expected_order']}")
    else:
        c = cert("closure_order", "undecided", rep["detail"])
    inputs = {"family": model.rstype.family, "rank": model.rank, "q": args.q,
              "level": args.level, "trunc": args.trunc}
    return inputs, rep, [c]


def _lie_center_dim(model, kind: str) -> int:
    p = model.ring.p
    if kind == "sl":
        return 1 if model.size % p == 0 else 0
    return 1 if p == 2 else 0


def cmd_h1(args):
    _need(args, "q")
    model = _model(args, 1)
    kind = args.module
    if kind == "lie":
        kind = "sl" if model.kind == "SL" else "sp"
    if kind == "sp" and model.kind != "Sp" or kind == "sl" and model.kind != "SL":
        raise UsageError(f"module {kind} does not match {model.name}")
    table = cohomlab.full_group_table(model)
    action = cohomlab.module_for_table(table, kind)
    system = cohomlab.build_cocycle_system(table, action)
    res = cohomlab.h1_dimension(table, action, system)
    coboundaries_ok = all(system.is_cocycle(system.coboundary(v)) for v in np.eye(action.dim_fp, dtype=np.int64))
    out = {"group": f"{model.name}(F_{args.q})", "group_order": table.order, "module": action.label,
           "dim_module": res.module_dim, "dim_fixed": res.dim_fixed, "dim_z1": res.dim_z1,
           "dim_b1": res.dim_b1, "dim_h1": res.dim_h1}
    certs = [
        cert("group_order", table.order == group_order(model.rstype, args.q), "BFS closure vs order formula"),
        cert("b1_identity", res.dim_b1 == res.module_dim - res.dim_fixed, "dim B^1 = d - dim M^G"),
        cert("coboundaries_in_z1", coboundaries_ok, "every basis coboundary satisfies all constraints"),
    ]
    p, q = model.ring.p, args.q
    if model.kind == "SL" and kind == "gl" and p > 2 and model.size > 2:
        certs.append(cert("vanishing", res.dim_h1 == 0, "H^1(SL_n, gl_n) = 0 for p, n > 2"))
    elif kind != "gl" and q > 9:
        want = _lie_center_dim(model, kind)
        certs.append(cert("center_dual", res.dim_h1 == want, f"q > 9 predicts dim H^1 = dim Z = {want}"))
    else:
        certs.append(cert("vanishing", "not_applicable", "no vanishing statement covers these parameters"))
    inputs = {"family": model.rstype.family, "rank": model.rank, "q": q, "module": args.module}
    return inputs, out, certs


def _random_congruence_conjugator(model, seed: int) -> np.ndarray:
    """Seeded element of the first congruence subgroup (GL_n for SL, Sp for Sp)."""
    ring = model.ring
    rng = np.random.default_rng(seed)
    g = model.identity()
    if model.kind == "SL":
        g[..., ring.e:] = rng.integers(0, ring.p, g[..., ring.e:].shape)
        return g
    gens = model.congruence_generators(1)
    for idx in rng.integers(0, len(gens), 4 * len(gens)):
        g = localgrp.matmul(ring, g, gens[idx])
    return g


def cmd_lift(args):
    _need(args, "q", "trunc")
    model = _model(args, args.trunc)
    std = model.field_generators()
    inputs = {"family": model.rstype.family, "rank": model.rank, "q": args.q, "trunc": args.trunc,
              "allow_outside_hypotheses": args.allow_outside_hypotheses}
    if args.seed is None:
        hgens = std
    else:
        inputs["seed"] = args.seed
        g0 = _random_congruence_conjugator(model, args.seed)
        hgens = localgrp.matmul(model.ring, localgrp.matmul(model.ring, g0, std),
                                localgrp.mat_inv(model.ring, g0))
    try:
        res = cohomlab.lift_conjugacy(model, hgens, args.allow_outside_hypotheses)
    except cohomlab.LiftFailure as exc:
        return inputs, exc.report, [cert("post_check", False, str(exc))]
    out = {"conjugator": res.conjugator.entries(), "rounds": res.rounds,
           "inside_hypotheses": res.inside_hypotheses}
    certs = [cert("post_check", res.verified, "g H g^-1 = G(F_q) on every element of H")]
    if not res.inside_hypotheses:
        certs.append(cert("hypotheses", "flagged", "run outside q > 9, p > 3 by request"))
    return inputs, out, certs


def cmd_centralizer(args):
    _need(args, "q", "trunc")
    model = _model(args, args.trunc)
    rep = localgrp.centralizer_audit(model)
    certs = [cert("centralizer_is_center", rep["equals_center"],
                  f"centralizer order {rep['centralizer_order']}, center order {rep['center_order']}")]
    inputs = {"family": model.rstype.family, "rank": model.rank, "q": args.q, "trunc": args.trunc}
    return inputs, rep, certs


def cmd_e6(args):
    rs = rootsys.root_system("E", 6)
    rep = rootsys.e6_inequality_audit(rs)
    total = len(rep["subsets"])
    certs = [
        cert("inequality", rep["inequality_holds"] == total,
             f"n+m+1 < {rep['num_roots']} for {rep['inequality_holds']}/{total} subsets"),
        cert("balance", rep["balance_holds"] == total,
             f"balance identity holds for {rep['balance_holds']}/{total} subsets"),
        cert("counting_identity", "info",
             f"n+m+1 = {rep['not_minus_one_count']} for {rep['identity_holds']}/{total} subsets"),
    ]
    return {"family": "E", "rank": 6}, rep, certs


def cmd_simply_laced(args):
    t = _rstype(args)
    rs = rootsys.build_root_system(t)
    viol = rootsys.simply_laced_audit(rs)
    out = {"type": str(t), "pairs_checked": len(rs) ** 2, "violations": viol}
    return {"family": t.family, "rank": t.rank}, out, [
        cert("remark", not viol, f"{len(viol)} violations over {len(rs) ** 2} ordered pairs")]


HANDLERS = {
    "roots": cmd_roots, "order": cmd_order, "covol": cmd_covol, "enclosure": cmd_enclosure,
    "audit-bounds": cmd_audit_bounds, "verify-lemma-root": cmd_lemma_root,
    "verify-lemma-poly": cmd_lemma_poly, "verify-p-properties": cmd_p_properties,
    "verify-generation": cmd_generation, "h1": cmd_h1, "lift": cmd_lift,
    "centralizer": cmd_centralizer, "e6-audit": cmd_e6, "simply-laced-audit": cmd_simply_laced,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--out", help="write the document to this file instead of stdout")
    common.add_argument("--no-timing", action="store_true",
                        help="report elapsed_ms as 0 so output is byte-reproducible")
    common.add_argument("--family")
    common.add_argument("--rank", type=int)
    common.add_argument("--q", type=int)
    common.add_argument("--x", type=int, help="base of the Euler product (defaults to --q)")
    common.add_argument("--level", type=int)
    common.add_argument("--trunc", type=int)
    common.add_argument("--genus", type=int)
    common.add_argument("--zeta", help="comma-separated coefficients a_0,...,a_2g")
    common.add_argument("--depth", type=int)
    common.add_argument("--alpha", type=int, help="1-based index of a simple root")
    common.add_argument("--vars", type=int)
    common.add_argument("--poly", help="terms coef@e1,...,en separated by ';'")
    common.add_argument("--module", choices=("gl", "sl", "lie"), default="lie")
    common.add_argument("--seed", type=int)
    common.add_argument("--allow-outside-hypotheses", action="store_true")
    parser = argparse.ArgumentParser(prog="covollab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".covollab-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        inputs, outputs, certs = HANDLERS[args.command](args)
    except (UsageError, *USAGE_ERRORS) as exc:
        print(f"covollab {args.command}: {exc}", file=sys.stderr)
        return 2
    elapsed = 0 if args.no_timing else int(round((time.perf_counter() - start) * 1000))
    doc = {"command": args.command, "inputs": jsonable(inputs), "outputs": jsonable(outputs),
           "certificates": jsonable(certs), "elapsed_ms": elapsed}
    _emit(render(doc, args.format), args.out)
    return 1 if any(c["status"] == "fail" for c in certs) else 0


if __name__ == "__main__":
    sys.exit(main())

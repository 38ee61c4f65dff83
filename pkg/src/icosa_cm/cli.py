"""Command-line interface: ``icosa-cm <command> [options]``.

Every command prints JSON (or a short text rendering with
``--format text``) to stdout, or writes it to ``--out``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

import mpmath as mp

from . import cm_field as cmf
from .ball import Ball
from .classgroup import ClassGroupShape, ShapeError, galois_structure, lemma_quantities
from .igusa import (
    InvariantError,
    SexticCurve,
    cd_from_i,
    igusa_clebsch,
    invariants_chain,
    psi5,
)
from .pipeline import PipelineConfig, ball_json, compute_cm_point, run_pipeline
from .recognition import NotRecognized, RecognitionRequest, min_poly, verify_poly
from .surfaces import emit_equation, scaling_check
from .symplectic import (
    HilbertPoint,
    NormalizationError,
    NotPrincipalError,
    PeriodMatrixError,
    Sp4Element,
    change_basis,
    lattice_vectors,
    period_matrix,
    symplectic_reduce,
)
from .theta import PoleError, ThetaError, canonical_point, eval_XY, klein_residual

log = logging.getLogger("icosa_cm")


class CliError(Exception):
    pass


# --------------------------------------------------------------------------
# input helpers
# --------------------------------------------------------------------------

def _load_spec_file(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read spec file {path}: {exc}") from None


def _spec_dict(args) -> dict:
    d = _load_spec_file(args.spec) if getattr(args, "spec", None) else {}
    if getattr(args, "field", None):
        d.update(dict(zip(("A", "B", "C", "Delta"), args.field)))
    if not {"A", "B", "C", "Delta"} <= d.keys():
        raise CliError("a field is required: use --spec FILE or --field A B C DELTA")
    return d


def _field(args) -> cmf.CMFieldSpec:
    return cmf.CMFieldSpec.from_dict(_spec_dict(args))


def _gamma(args, d: dict | None = None):
    if getattr(args, "gamma", None):
        return list(args.gamma)
    if d and d.get("gamma") is not None:
        return list(map(int, d["gamma"]))
    return None


def _basis_change(args, d: dict | None = None):
    if getattr(args, "basis_change", None):
        v = list(args.basis_change)
        return [v[4 * i:4 * i + 4] for i in range(4)]
    if d and d.get("basis_change") is not None:
        return [list(map(int, r)) for r in d["basis_change"]]
    return None


def _class_group(args, d: dict | None = None):
    if getattr(args, "cyclic", None):
        return ClassGroupShape.from_cyclic(args.cyclic)
    if getattr(args, "two_part", None) is not None or getattr(args, "odd_part", None) is not None:
        return ClassGroupShape(tuple(args.two_part or ()), tuple(args.odd_part or ()))
    if d and d.get("class_group") is not None:
        return ClassGroupShape.from_dict(d["class_group"])
    return None


def _complex(text: str) -> mp.mpc:
    """Parse 're,im' or a Python-style complex literal at the current precision."""
    text = text.strip().replace(" ", "")
    if "," in text:
        re, im = text.split(",", 1)
        return mp.mpc(mp.mpf(re), mp.mpf(im))
    return mp.mpc(complex(text)) if "j" in text else mp.mpc(mp.mpf(text))


def _tol(args) -> mp.mpf:
    e = args.precision // 2 if args.tol_exp is None else args.tol_exp
    return mp.ldexp(mp.mpf(1), -e)


def _hilbert_point(args) -> HilbertPoint:
    with mp.workprec(args.precision + 32):
        return HilbertPoint.from_values(_complex(args.z1), _complex(args.z2))


def _cm_point(args):
    d = _spec_dict(args)
    spec = cmf.CMFieldSpec.from_dict(d)
    spec.validate(require_cm=True)
    basis = cmf.integral_basis(spec)
    M = cmf.riemann_gram(basis, cmf.zeta_principal(spec))
    U = _basis_change(args, d) or symplectic_reduce(M)
    g = _gamma(args, d)
    g = Sp4Element.from_flat(g) if g else None
    return spec, U, compute_cm_point(spec, U, args.precision, g, args.depth, _tol(args))


def _omega_json(Om, prec):
    return {k: ball_json(getattr(Om, k), prec) for k in ("t1", "t2", "t3")}


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_classify(args):
    spec = _field(args)
    return {"field": vars(spec), "case": cmf.classify(spec)}


def cmd_invariants(args):
    spec = _field(args)
    inv = cmf.field_invariants(spec)
    return {"field": vars(spec), "case": cmf.classify(spec),
            "conductor": str(inv.conductor), "discriminant": str(inv.discriminant)}


def cmd_basis(args):
    spec = _field(args)
    return {"field": vars(spec), "case": cmf.classify(spec),
            "coordinates": "1, sqrt(Delta), alpha, beta",
            "basis": [[str(c) for c in b.coords] for b in cmf.integral_basis(spec)]}


def cmd_gram(args):
    spec = _field(args)
    basis = cmf.integral_basis(spec)
    if args.kappa is not None:
        spec.validate()
        zeta = cmf.zeta_for_kappa(spec, Fraction(args.kappa))
    else:
        zeta = cmf.zeta_principal(spec)
    M = cmf.riemann_gram(basis, zeta)
    closed = cmf.closed_form_gram(spec, zeta.kappa)
    return {"field": vars(spec), "case": cmf.classify(spec), "kappa": str(zeta.kappa), "gram": M,
            "matches_closed_form": closed == M, "pfaffian": cmf.pfaffian(M)}


def cmd_period(args):
    d = _spec_dict(args)
    spec = cmf.CMFieldSpec.from_dict(d)
    spec.validate(require_cm=True)
    basis = cmf.integral_basis(spec)
    M = cmf.riemann_gram(basis, cmf.zeta_principal(spec))
    U = _basis_change(args, d) or symplectic_reduce(M)
    Om = period_matrix(change_basis(lattice_vectors(basis, args.precision + 32), U, args.precision),
                       args.precision, _tol(args))
    return {"field": vars(spec), "basis_change": U, "period_matrix": _omega_json(Om, args.precision)}


def cmd_cm_point(args):
    spec, U, (Om, Om5, g, z) = _cm_point(args)
    p = args.precision
    return {"field": vars(spec), "basis_change": U, "period_matrix": _omega_json(Om, p),
            "gamma": g.flat(), "normalized_period_matrix": _omega_json(Om5, p),
            "hilbert_point": {"z1": ball_json(z.z1, p), "z2": ball_json(z.z2, p)}}


def _point_from_args(args):
    if args.z1 is not None and args.z2 is not None:
        return _hilbert_point(args), None
    _, _, (_, Om5, _, z) = _cm_point(args)
    return Om5, z


def cmd_eval_xy(args):
    pt, _ = _point_from_args(args)
    with mp.workprec(args.precision):
        X, Y = eval_XY(pt, args.precision)
    return {"X": ball_json(X, args.precision), "Y": ball_json(Y, args.precision)}


def cmd_klein_check(args):
    pt, _ = _point_from_args(args)
    p = args.precision
    with mp.workprec(p):
        P = canonical_point(pt, p)
        kr, cr = klein_residual(P), P.c_squared_residual()
    tol = _tol(args)
    return {"canonical_point": {k: ball_json(getattr(P, k), p) for k in ("A", "c", "B", "D")},
            "klein_residual": mp.nstr(kr, 8), "c2_residual": mp.nstr(cr, 8),
            "tol": mp.nstr(tol, 8), "passed": bool(kr < tol and cr < tol)}


def cmd_igusa(args):
    out = {}
    if args.roots:
        if len(args.roots) != 6:
            raise CliError("--roots needs exactly six rational roots")
        curve = SexticCurve(Fraction(args.u0), [Fraction(r) for r in args.roots])
        I = igusa_clebsch(curve)
        out["igusa_clebsch"] = [str(v) for v in I.as_tuple()]
        out["clingher_doran"] = [str(v) for v in cd_from_i(I).as_tuple()]
        try:
            J, m = invariants_chain(I)
            out["igusa_J"] = [str(v) for v in J.as_tuple()]
            out["absolute"] = [str(v) for v in m.as_tuple()]
        except InvariantError as exc:
            out["absolute_error"] = str(exc)
    if args.psi5:
        out["psi5"] = [str(v) for v in psi5(tuple(Fraction(v) for v in args.psi5)).as_tuple()]
    if not out:
        raise CliError("give --roots (six rationals) and/or --psi5 A B C")
    return out


def cmd_recognize(args):
    p = args.precision
    with mp.workprec(p + 32):
        v = mp.mpc(mp.mpf(args.value), mp.mpf(args.imag or 0))
    req = RecognitionRequest(v, args.max_degree, args.height, p, expect_real=args.imag is None)
    cand = min_poly(req)
    return {"polynomial": str(cand), "coefficients": [str(c) for c in cand.coeffs],
            "degree": cand.degree, "residual": mp.nstr(cand.residual, 8)}


def cmd_galois(args):
    d = _load_spec_file(args.spec) if args.spec else None
    shape = _class_group(args, d)
    if shape is None:
        raise CliError("class group shape required: --cyclic N... or --two-part/--odd-part")
    r = galois_structure(shape)
    return {"class_number": shape.order, "class_group": shape.cyclic_orders(),
            "structure": list(r.structure), "degree": r.degree, "lemma": lemma_quantities(shape)}


def cmd_emit_surface(args):
    poly = emit_equation(args.kind, [Fraction(p) for p in args.params])
    out = {"kind": args.kind.upper(), "equation": poly.to_text() + " = 0", "polynomial": poly.to_json()}
    if args.kappa is not None:
        if args.kind.upper() != "S":
            raise CliError("--kappa scaling check applies to kind S")
        res = scaling_check([Fraction(p) for p in args.params], Fraction(args.kappa))
        out["scaling_check"] = {"kappa": args.kappa, "zero": res.is_zero(), "residual": res.to_text()}
    return out


def cmd_pipeline(args):
    d = _spec_dict(args)
    spec = cmf.CMFieldSpec.from_dict(d)
    cfg = PipelineConfig(precision=args.precision, tol_exp=args.tol_exp, depth=args.depth,
                         gamma=_gamma(args, d), basis_change=_basis_change(args, d),
                         class_group=_class_group(args, d), recognize=not args.no_recognize,
                         recognition_precision=args.recognition_precision, max_degree=args.max_degree)
    return run_pipeline(spec, cfg).to_json()


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _common(p, field=True, numeric=True):
    p.add_argument("--out", help="write JSON to this file instead of stdout")
    p.add_argument("--format", choices=("json", "text"), default="json")
    if field:
        p.add_argument("--spec", help="JSON spec file {A, B, C, Delta, class_group?, gamma?}")
        p.add_argument("--field", nargs=4, type=int, metavar=("A", "B", "C", "DELTA"))
    if numeric:
        p.add_argument("--precision", type=int, default=128, help="working precision in bits")
        p.add_argument("--tol-exp", type=int, default=None, help="tolerance 2^-n (default precision/2)")
        p.add_argument("--depth", type=int, default=8, help="Sp(4, Z) search depth")
        p.add_argument("--gamma", nargs=16, type=int, help="Sp(4, Z) matrix, 16 integers row-major")
        p.add_argument("--basis-change", nargs=16, type=int,
                       help="symplectic basis as a 4x4 integer matrix (columns), row-major")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="icosa-cm", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, fn, numeric in [("classify", cmd_classify, False), ("invariants", cmd_invariants, False),
                              ("basis", cmd_basis, False)]:
        p = sub.add_parser(name)
        _common(p, numeric=numeric)
        p.set_defaults(func=fn)

    p = sub.add_parser("gram")
    _common(p, numeric=False)
    p.add_argument("--kappa", help="override kappa (rational); default is the principal choice")
    p.set_defaults(func=cmd_gram)

    for name, fn in [("period", cmd_period), ("cm-point", cmd_cm_point)]:
        p = sub.add_parser(name)
        _common(p)
        p.set_defaults(func=fn)

    for name, fn in [("eval-xy", cmd_eval_xy), ("klein-check", cmd_klein_check)]:
        p = sub.add_parser(name)
        _common(p)
        p.add_argument("--z1", help="'re,im' of z1 (otherwise the CM point of --spec/--field)")
        p.add_argument("--z2", help="'re,im' of z2")
        p.set_defaults(func=fn)

    p = sub.add_parser("igusa")
    _common(p, field=False, numeric=False)
    p.add_argument("--roots", nargs="+", help="six rational roots")
    p.add_argument("--u0", default="1")
    p.add_argument("--psi5", nargs=3, metavar=("A", "B", "C"))
    p.set_defaults(func=cmd_igusa)

    p = sub.add_parser("recognize")
    _common(p, field=False, numeric=False)
    p.add_argument("value", help="decimal value (real part)")
    p.add_argument("--imag", help="imaginary part; omit for a real value")
    p.add_argument("--precision", type=int, default=128)
    p.add_argument("--max-degree", type=int, default=8)
    p.add_argument("--height", type=int, default=None)
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("galois")
    _common(p, field=False, numeric=False)
    p.add_argument("--spec")
    p.add_argument("--cyclic", nargs="+", type=int, help="cyclic factor orders, e.g. 2 5")
    p.add_argument("--two-part", nargs="*", type=int, help="r_1 r_2 ... (counts of Z/2^j)")
    p.add_argument("--odd-part", nargs="*", type=int, help="odd cyclic orders")
    p.set_defaults(func=cmd_galois)

    p = sub.add_parser("emit-surface")
    _common(p, field=False, numeric=False)
    p.add_argument("--kind", required=True, choices=("S", "K", "CD", "s", "k", "cd"))
    p.add_argument("--params", nargs="+", required=True)
    p.add_argument("--kappa", help="also run the weighted scaling check with this kappa")
    p.set_defaults(func=cmd_emit_surface)

    p = sub.add_parser("pipeline")
    _common(p)
    p.add_argument("--cyclic", nargs="+", type=int, help="class group as cyclic orders")
    p.add_argument("--two-part", nargs="*", type=int)
    p.add_argument("--odd-part", nargs="*", type=int)
    p.add_argument("--no-recognize", action="store_true")
    p.add_argument("--recognition-precision", type=int, default=1024)
    p.add_argument("--max-degree", type=int, default=20)
    p.set_defaults(func=cmd_pipeline)
    return ap


def _text(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if set(obj) == {"re", "im", "err"}:
            return f"{obj['re']} + {obj['im']}i  (+/- {obj['err']})"
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_text(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        if _flat(obj):
            return "[" + ", ".join(_text(v) for v in obj) + "]"
        return "\n".join(pad + "- " + _text(v, indent + 1).lstrip() for v in obj)
    return str(obj)


def _flat(v) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) or _flat(x) and isinstance(x, list) for x in v)
    return isinstance(v, dict) and set(v) == {"re", "im", "err"}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "precision", 128) < 53:
        print("error: --precision must be at least 53", file=sys.stderr)
        return 2
    try:
        result = args.func(args)
        status = 0
    except (CliError, cmf.InvalidFieldSpec, InvariantError, ShapeError, NotPrincipalError,
            PeriodMatrixError, NormalizationError, ThetaError, PoleError, NotRecognized,
            NotImplementedError, ValueError) as exc:
        result = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        status = 1
    text = json.dumps(result, indent=2, default=str) if args.format == "json" else _text(result)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if status == 0 and isinstance(result, dict) and result.get("errors"):
        status = 3
    return status


if __name__ == "__main__":
    sys.exit(main())

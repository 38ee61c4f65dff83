"""End-to-end computation from a CM field to the class field data.

field spec -> integral basis and Riemann form -> symplectic basis ->
period matrix -> point of N5 -> Hilbert point -> theta constants ->
X, Y and the canonical point -> recognized minimal polynomials ->
Galois structure.  Every stage records its result (or a structured
error) in the report; later stages are skipped after a failure.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Sequence

import mpmath as mp

from . import cm_field as cmf
from .ball import Ball
from .classgroup import ClassGroupShape, galois_structure, lemma_quantities
from .recognition import NotRecognized, RecognitionRequest, min_poly, verify_poly
from .symplectic import (
    NormalizationError,
    NotPrincipalError,
    PeriodMatrixError,
    Sp4Element,
    change_basis,
    hilbert_from_N5,
    lattice_vectors,
    normalize_to_N5,
    out_res,
    period_matrix,
    symplectic_reduce,
)
from .theta import PoleError, ThetaError, canonical_point, eval_XY, klein_residual

log = logging.getLogger(__name__)

__all__ = ["PipelineConfig", "Report", "run_pipeline", "ball_json", "compute_cm_point"]

SCHEMA_VERSION = 1


@dataclass
class PipelineConfig:
    precision: int = 128
    tol_exp: int | None = None
    depth: int = 8
    gamma: Sequence[int] | None = None
    basis_change: Sequence[Sequence[int]] | None = None
    class_group: ClassGroupShape | None = None
    recognize: bool = True
    recognition_precision: int = 1024
    max_degree: int = 20

    def __post_init__(self):
        if self.precision < 53:
            raise ValueError("precision must be at least 53 bits")
        if self.gamma is not None and len(list(self.gamma)) != 16:
            raise ValueError("gamma must be 16 integers (row-major 4x4)")

    @property
    def tol(self) -> mp.mpf:
        e = self.precision // 2 if self.tol_exp is None else self.tol_exp
        return mp.ldexp(mp.mpf(1), -e)


def _digits(prec: int) -> int:
    return max(15, int(prec * 0.30103) + 1)


def ball_json(b: Ball, prec: int) -> dict:
    d = _digits(prec)
    return {
        "re": mp.nstr(b.mid.real, d, strip_zeros=False),
        "im": mp.nstr(b.mid.imag, d, strip_zeros=False),
        "err": mp.nstr(b.rad, 5),
    }


def _num(x) -> str:
    return mp.nstr(x, 8)


def _check(name: str, residual, tol) -> dict:
    return {"name": name, "passed": bool(residual < tol), "residual": _num(residual), "tol": _num(tol)}


@dataclass
class Report:
    data: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.data[key]

    def get(self, key, default=None):
        return self.data.get(key, default)

    @property
    def ok(self) -> bool:
        return not self.data["errors"] and all(c["passed"] for c in self.data["checks"])

    def to_json(self) -> dict:
        return self.data


def _error(stage: str, exc: Exception) -> dict:
    return {"stage": stage, "type": type(exc).__name__, "message": str(exc)}


def _lattice(spec: cmf.CMFieldSpec, U, prec: int):
    basis = cmf.integral_basis(spec)
    return change_basis(lattice_vectors(basis, prec + 32), U, prec)


def compute_cm_point(spec: cmf.CMFieldSpec, U, prec: int, gamma: Sp4Element | None = None,
                     depth: int = 8, tol=None):
    """Period matrix, its image on N5 and the Hilbert point at ``prec`` bits."""
    Om = period_matrix(_lattice(spec, U, prec), prec, tol)
    Om5, g = normalize_to_N5(Om, depth=depth, gamma=gamma, prec=prec, tol=tol)
    z = hilbert_from_N5(Om5, prec, tol)
    return Om, Om5, g, z


def _recognize(value: Ball, value2: Ball, prec: int, prec2: int, max_degree: int) -> dict:
    with mp.workprec(prec):
        expect_real = abs(value.mid.imag) <= mp.ldexp(max(1, abs(value.mid)), -(prec // 2))
    try:
        cand = min_poly(RecognitionRequest(value, max_degree=max_degree, prec=prec, expect_real=expect_real))
    except NotRecognized as exc:
        return {"recognized": False, "message": str(exc)}
    cand = verify_poly(cand, value2, prec2, prec)
    with mp.workprec(prec2):
        shrink = cand.residual / cand.verify_residual if cand.verify_residual else mp.inf
        log2_shrink = mp.log(shrink, 2) if shrink != mp.inf else mp.inf
    out = {
        "recognized": True,
        "degree": cand.degree,
        "coefficients": [str(c) for c in cand.coeffs],
        "polynomial": str(cand),
        "residual": _num(cand.residual),
        "verify_precision": prec2,
        "verify_residual": _num(cand.verify_residual),
        "log2_shrink": _num(log2_shrink),
        "verified": bool(cand.verified and log2_shrink >= 32),
        "real": bool(expect_real),
    }
    if cand.degree == 1:
        out["rational"] = str(cand.root_rational())
    return out


def run_pipeline(spec: cmf.CMFieldSpec, cfg: PipelineConfig | None = None) -> Report:
    cfg = cfg or PipelineConfig()
    prec = cfg.precision
    tol = cfg.tol
    t0 = time.perf_counter()
    data = {"schema": SCHEMA_VERSION, "field": {"A": spec.A, "B": spec.B, "C": spec.C, "Delta": spec.Delta},
            "precision": prec, "tolerance": _num(tol), "checks": [], "errors": []}
    rep = Report(data)
    checks = data["checks"]

    # field data
    try:
        spec.validate(require_cm=True)
        case = cmf.classify(spec)
        inv = cmf.field_invariants(spec)
        data.update(case=case, conductor=str(inv.conductor), discriminant=str(inv.discriminant))
        basis = cmf.integral_basis(spec)
        data["integral_basis"] = [[str(c) for c in b.coords] for b in basis]
        zeta = cmf.zeta_principal(spec)
        data["kappa"] = str(zeta.kappa)
        M = cmf.riemann_gram(basis, zeta)
        data["gram"] = M
        data["pfaffian"] = cmf.pfaffian(M)
    except (cmf.InvalidFieldSpec, NotImplementedError, ValueError) as exc:
        data["errors"].append(_error("field", exc))
        return rep

    # symplectic basis
    try:
        if cfg.basis_change is not None:
            U = [list(map(int, r)) for r in cfg.basis_change]
            JU = [[sum(U[a][i] * M[a][b] * U[b][j] for a in range(4) for b in range(4))
                   for j in range(4)] for i in range(4)]
            if JU != [list(r) for r in cmf.STANDARD_J]:
                raise NotPrincipalError("supplied basis change is not symplectic for this Riemann form")
            data["basis_source"] = "supplied"
        else:
            U = symplectic_reduce(M)
            data["basis_source"] = "symplectic_reduce"
        data["basis_change"] = U
    except NotPrincipalError as exc:
        data["errors"].append(_error("symplectic", exc))
        return rep

    # period matrix and N5
    gamma = Sp4Element.from_flat(cfg.gamma) if cfg.gamma is not None else None
    try:
        Om, Om5, g, z = compute_cm_point(spec, U, prec, gamma, cfg.depth, tol)
    except NormalizationError as exc:
        err = _error("normalize", exc)
        if exc.best_residual is not None:
            err["best_residual"] = _num(exc.best_residual)
        err["hint"] = "supply --gamma (16 integers) mapping the period matrix into N5"
        data["errors"].append(err)
        return rep
    except (PeriodMatrixError, ThetaError) as exc:
        data["errors"].append(_error("period", exc))
        return rep
    data["period_matrix"] = {k: ball_json(getattr(Om, k), prec) for k in ("t1", "t2", "t3")}
    data["gamma"] = g.flat()
    data["gamma_source"] = "supplied" if gamma is not None else "search"
    data["normalized_period_matrix"] = {k: ball_json(getattr(Om5, k), prec) for k in ("t1", "t2", "t3")}
    hres = out_res(Om5, prec)
    data["humbert_residual"] = _num(hres)
    checks.append(_check("humbert", hres, tol))
    data["hilbert_point"] = {"z1": ball_json(z.z1, prec), "z2": ball_json(z.z2, prec)}

    # modular forms
    try:
        with mp.workprec(prec):
            X, Y = eval_XY(Om5, prec)
            P = canonical_point(Om5, prec)
            kr = klein_residual(P)
            cres = P.c_squared_residual()
    except (PoleError, ThetaError) as exc:
        data["errors"].append(_error("theta", exc))
        return rep
    data["X"] = ball_json(X, prec)
    data["Y"] = ball_json(Y, prec)
    data["klein_residual"] = _num(kr)
    data["c2_residual"] = _num(cres)
    checks.append(_check("klein", kr, tol))
    checks.append(_check("c_squared", cres, tol))

    # recognition: recompute at high precision, verify at double that
    if cfg.recognize:
        rp = max(cfg.recognition_precision, prec)
        rp2 = 2 * rp
        try:
            Xr, Yr = _xy_at(spec, U, g, rp)
            Xv, Yv = _xy_at(spec, U, g, rp2)
            rec = {"precision": rp,
                   "X": _recognize(Xr, Xv, rp, rp2, cfg.max_degree),
                   "Y": _recognize(Yr, Yv, rp, rp2, cfg.max_degree)}
        except (NormalizationError, ThetaError, PoleError) as exc:
            data["errors"].append(_error("recognition", exc))
            rec = None
        if rec is not None:
            data["recognition"] = rec
            for k in ("X", "Y"):
                checks.append({"name": f"recognized_{k}", "passed": rec[k].get("verified", False),
                               "residual": rec[k].get("verify_residual", "nan"), "tol": "verified"})

    # class group
    if cfg.class_group is not None:
        gr = galois_structure(cfg.class_group)
        data["galois"] = {"class_number": cfg.class_group.order,
                          "class_group": cfg.class_group.cyclic_orders(),
                          "structure": list(gr.structure), "degree": gr.degree,
                          "lemma": lemma_quantities(cfg.class_group)}
        rec = data.get("recognition")
        if rec and all(rec[k].get("recognized") for k in ("X", "Y")):
            degs = [rec[k]["degree"] for k in ("X", "Y")]
            data["galois"]["recognized_degrees"] = degs
            checks.append({"name": "degree_bound", "passed": max(degs) <= gr.degree,
                           "residual": str(max(degs)), "tol": str(gr.degree)})
    data["elapsed_seconds"] = round(time.perf_counter() - t0, 3)
    return rep


def _xy_at(spec, U, g: Sp4Element, prec: int):
    _, Om5, _, _ = compute_cm_point(spec, U, prec, g)
    with mp.workprec(prec):
        return eval_XY(Om5, prec)

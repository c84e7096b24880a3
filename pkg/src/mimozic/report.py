"""Serialization of regime reports, sum-rate results and regions.

Rate fields carry a ``_nats`` suffix; matrices use the scenario encoding.
"""

from __future__ import annotations

import io
import json

import numpy as np

from .scenario import encode_matrix


def _f(x):
    return None if x is None else float(x)


def _factor(chk):
    return {
        "holds": bool(chk.holds),
        "A": encode_matrix(chk.A),
        "residual": float(chk.residual),
        "spectral_norm": float(chk.norm),
    }


def _relaxed(chk):
    if chk is None:
        return None
    d = _factor(chk)
    d["B"] = encode_matrix(chk.B)
    return d


def regime_report_to_dict(rep) -> dict:
    vs = rep.very_strong
    cert = rep.genie_certificate
    return {
        "very_strong": {
            "holds": bool(vs.holds),
            "lhs_nats": float(vs.lhs),
            "rhs_nats": float(vs.rhs),
            "S1": encode_matrix(vs.S1),
            "S2": encode_matrix(vs.S2),
        },
        "aligned_strong": _factor(rep.aligned_strong),
        "aligned_strong_relaxed": _relaxed(rep.aligned_strong_relaxed),
        "noisy": _factor(rep.noisy),
        "noisy_relaxed": _relaxed(rep.noisy_relaxed),
        "genie_certificate": None if cert is None else {
            "certified": bool(cert.certified),
            "A": encode_matrix(cert.A),
            "S1": encode_matrix(cert.S1),
            "S2": encode_matrix(cert.S2),
            "residual": float(cert.residual),
            "value_nats": float(cert.value),
            "upper_bound_nats": _f(cert.upper_bound),
        },
    }


def sumrate_to_dict(res, method: str) -> dict:
    return {
        "method": method,
        "status": res.status,
        "value_nats": float(res.value),
        "upper_bound_nats": _f(res.upper_bound),
        "bound_gap_nats": _f(res.bound_gap),
        "S1": encode_matrix(res.S1),
        "S2": encode_matrix(res.S2),
        "certificate": None if res.certificate is None else {
            "A": encode_matrix(res.certificate.A),
            "residual": float(res.certificate.residual),
        },
    }


def region_to_dict(region) -> dict:
    def rows(pts):
        return [{"R1_nats": float(p.r1), "R2_nats": float(p.r2)} for p in pts]

    return {
        "kind": region.kind,
        "boundary": rows(region.boundary),
        "convex_hull": None if region.hull is None else rows(region.hull),
    }


def to_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def region_to_csv(region) -> str:
    buf = io.StringIO()
    buf.write("R1_nats,R2_nats\n")
    for p in region.boundary:
        buf.write(f"{p.r1!r},{p.r2!r}\n")
    if region.hull is not None:
        buf.write("\n# convex hull (time sharing)\nR1_nats,R2_nats\n")
        for p in region.hull:
            buf.write(f"{p.r1!r},{p.r2!r}\n")
    return buf.getvalue()


def _yn(b):
    return "yes" if b else "no"


def regime_report_text(rep) -> str:
    vs = rep.very_strong
    lines = [
        f"very strong interference : {_yn(vs.holds)}  "
        f"(joint {vs.lhs:.4f} nats vs interference-free {vs.rhs:.4f} nats)",
    ]
    a = rep.aligned_strong
    lines.append(
        f"aligned strong           : {_yn(a.holds)}  (residual {a.residual:.2e}, ||A|| = {a.norm:.4f})"
    )
    if rep.aligned_strong_relaxed is not None:
        r = rep.aligned_strong_relaxed
        lines.append(f"  relaxed (covariance)   : {_yn(r.holds)}  (residual {r.residual:.2e}, ||A|| = {r.norm:.4f})")
    n = rep.noisy
    lines.append(f"noisy interference       : {_yn(n.holds)}  (residual {n.residual:.2e}, ||A|| = {n.norm:.4f})")
    if rep.noisy_relaxed is not None:
        r = rep.noisy_relaxed
        lines.append(f"  relaxed (covariance)   : {_yn(r.holds)}  (residual {r.residual:.2e}, ||A|| = {r.norm:.4f})")
    c = rep.genie_certificate
    if c is not None:
        lines.append(
            f"genie min-max certificate: {_yn(c.certified)}  (residual {c.residual:.2e}, "
            f"TIN {c.value:.4f} nats, bound {c.upper_bound:.4f} nats)"
        )
    return "\n".join(lines) + "\n"


def sumrate_text(res, method: str) -> str:
    lines = [
        f"method      : {method}",
        f"status      : {res.status}",
        f"sum rate    : {res.value:.4f} nats",
    ]
    if res.upper_bound is not None:
        lines.append(f"upper bound : {res.upper_bound:.4f} nats (gap {res.bound_gap:.2e} nats)")
    if res.certificate is not None:
        lines.append(f"certificate residual: {res.certificate.residual:.2e}")
    lines.append("S1 =\n" + _fmt_matrix(res.S1))
    lines.append("S2 =\n" + _fmt_matrix(res.S2))
    return "\n".join(lines) + "\n"


def region_text(region) -> str:
    lines = [f"region kind: {region.kind}", "R1 (nats)  R2 (nats)"]
    lines += [f"{p.r1:9.4f}  {p.r2:9.4f}" for p in region.boundary]
    if region.hull is not None:
        lines.append("convex hull:")
        lines += [f"{p.r1:9.4f}  {p.r2:9.4f}" for p in region.hull]
    return "\n".join(lines) + "\n"


def _fmt_matrix(M):
    M = np.asarray(M)
    # roundoff-level entries would otherwise print as "-0."
    M = np.where(np.abs(M) < 1e-12, 0.0, M)
    return np.array2string(M, precision=4, suppress_small=True)

"""JSON records for period matrices, points, characteristics and singularity reports.

Schema::

    complex          {"re": "<decimal>", "im": "<decimal>"}
    tau              list of rows of complex
    z                list of complex
    char             "eps|delta", e.g. "01|11"
    rational         "p/q" or "p"
    candidate        {"tau": ..., "z": ..., "provenance": {"kind": "two_torsion", "char": "..."}
                                                       | {"kind": "product", "g1": 1, "g2": 2}
                                                       | {"kind": "manual"}}

Decimal strings use ``repr(float)`` so a round trip is exact.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .singular import Manual, Product, SingCandidate, SingReport, TwoTorsion
from .theta import Characteristic, PeriodMatrix


def complex_to_json(c) -> dict:
    c = complex(c)
    return {"re": repr(c.real), "im": repr(c.imag)}


def complex_from_json(obj) -> complex:
    if isinstance(obj, dict):
        return complex(float(obj["re"]), float(obj.get("im", "0")))
    if isinstance(obj, str):
        return complex(obj.replace(" ", "").replace("i", "j"))
    return complex(obj)


def vector_to_json(z) -> list:
    return [complex_to_json(x) for x in np.atleast_1d(z)]


def vector_from_json(obj) -> np.ndarray:
    return np.array([complex_from_json(x) for x in obj], dtype=complex)


def tau_to_json(tau) -> list:
    t = tau.tau if isinstance(tau, PeriodMatrix) else np.asarray(tau)
    return [[complex_to_json(x) for x in row] for row in t]


def tau_from_json(obj) -> PeriodMatrix:
    if isinstance(obj, list) and obj and not isinstance(obj[0], list):
        obj = [obj]
    return PeriodMatrix([[complex_from_json(x) for x in row] for row in obj])


def rational_to_json(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def rational_from_json(s) -> Fraction:
    return Fraction(s)


def provenance_to_json(p) -> dict:
    if isinstance(p, TwoTorsion):
        return {"kind": p.kind, "char": str(p.char)}
    if isinstance(p, Product):
        return {"kind": p.kind, "g1": p.g1, "g2": p.g2}
    return {"kind": "manual"}


def provenance_from_json(obj):
    kind = (obj or {}).get("kind", "manual")
    if kind == "two_torsion":
        return TwoTorsion(Characteristic.parse(obj["char"]))
    if kind == "product":
        return Product(int(obj["g1"]), int(obj["g2"]))
    if kind == "manual":
        return Manual()
    raise ValueError(f"unknown provenance kind {kind!r}")


def candidate_to_json(c: SingCandidate) -> dict:
    return {"tau": tau_to_json(c.tau), "z": vector_to_json(c.z), "provenance": provenance_to_json(c.provenance)}


def candidate_from_json(obj) -> SingCandidate:
    tau = tau_from_json(obj["tau"])
    prov = provenance_from_json(obj.get("provenance"))
    if isinstance(prov, TwoTorsion) and "z" not in obj:
        from .singular import two_torsion_point

        z = two_torsion_point(tau, prov.char)
    else:
        z = vector_from_json(obj["z"])
    return SingCandidate(tau, z, prov)


def report_to_json(r: SingReport) -> dict:
    return {
        "value_norm": repr(float(r.value_norm)),
        "grad_norm": repr(float(r.grad_norm)),
        "hess_singular_values": [repr(float(s)) for s in r.hess_singular_values],
        "numeric_rank": int(r.numeric_rank),
        "singular": bool(r.singular),
        "in_Snull": bool(r.in_Snull),
        "in_Sdec": bool(r.in_Sdec),
        "hess_degenerate": bool(r.hess_degenerate),
        "sing_tol": repr(r.sing_tol),
        "rank_tol": repr(r.rank_tol),
    }


def report_from_json(obj) -> SingReport:
    return SingReport(
        value_norm=float(obj["value_norm"]),
        grad_norm=float(obj["grad_norm"]),
        hess_singular_values=np.array([float(s) for s in obj["hess_singular_values"]]),
        numeric_rank=int(obj["numeric_rank"]),
        in_Snull=bool(obj["in_Snull"]),
        in_Sdec=bool(obj["in_Sdec"]),
        hess_degenerate=bool(obj["hess_degenerate"]),
        sing_tol=float(obj["sing_tol"]),
        rank_tol=float(obj["rank_tol"]),
    )


def load(path) -> dict:
    """Read a JSON input file and parse the fields it contains (tau, z, char, provenance)."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return parse_record(raw)


def parse_record(raw: dict) -> dict:
    out = dict(raw)
    if "tau" in raw:
        out["tau"] = tau_from_json(raw["tau"])
    if "z" in raw:
        out["z"] = vector_from_json(raw["z"])
    if "char" in raw:
        out["char"] = Characteristic.parse(raw["char"])
    if "provenance" in raw:
        out["provenance"] = provenance_from_json(raw["provenance"])
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)

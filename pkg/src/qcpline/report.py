"""Assemble verification runs into a report document and serialize it.

A document is a plain ``dict`` with a fixed key order.  JSON output is
deterministic: keys are emitted in insertion order and every float is written
as ``%.16e``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import ncwords, pullback, qcp

SECTIONS = ("symbolic", "decompose", "weights", "spectrum", "symbol", "index", "gauge", "h0-probe")
SUBCOMMAND_SECTIONS = {
    "verify-symbolic": {"symbolic"},
    "decompose": {"decompose"},
    "weights": {"weights"},
    "spectrum": {"spectrum"},
    "symbol": {"symbol"},
    "index": {"index"},
    "gauge": {"gauge"},
    "h0-probe": {"h0-probe"},
    "report": set(SECTIONS),
}

TRUSTED_TOL = 1e-10
SYMBOL_TOL = pullback.SYMBOL_TOL
SMALL_INSTANCE_TOL = 1e-3


@dataclass
class RunConfig:
    subcommand: str = "report"
    q: float = 2.0
    c: float = 1.0
    t1_angle: float = 0.0
    N: int = 256
    K: int = 40
    tol: float = 1e-10
    margin: int = 64
    fmt: str = "json"
    output: str = "-"
    q_grid: list[float] | None = None
    c_grid: list[float] | None = None
    gauge_angles: list[float] = field(default_factory=lambda: [0.0, math.pi / 3])

    def points(self) -> list[tuple[float, float]]:
        qs = self.q_grid if self.q_grid is not None else [self.q]
        cs = self.c_grid if self.c_grid is not None else [self.c]
        return [(q, c) for q in qs for c in cs]

    def context(self, q: float, c: float) -> qcp.TruncationContext:
        return qcp.TruncationContext.from_angle(q, c, self.t1_angle, self.N, self.tol, self.margin)

    def validate(self) -> None:
        for q, c in self.points():
            self.context(q, c)
        if self.K < 4:
            raise ValueError("K must be at least 4")
        if self.fmt not in ("json", "csv"):
            raise ValueError(f"unknown output format {self.fmt!r}")

    def as_params(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "q": self.q,
            "c": self.c,
            "t1_angle": self.t1_angle,
            "N": self.N,
            "K": self.K,
            "tol": self.tol,
            "margin": self.margin,
            "q_grid": self.q_grid,
            "c_grid": self.c_grid,
            "gauge_angles": list(self.gauge_angles),
        }


class Checks:
    """Collects hard checks; each reads pass, fail or inconclusive."""

    def __init__(self):
        self.rows: list[dict] = []

    def add(self, name: str, value, threshold, ok: bool | None, tag: dict | None = None) -> None:
        status = "inconclusive" if ok is None else ("pass" if ok else "fail")
        self.rows.append({**(tag or {}), "check": name, "value": value, "threshold": threshold, "status": status})

    def below(self, name, value, threshold, tag=None):
        self.add(name, value, threshold, bool(value < threshold), tag)

    def equal(self, name, value, expected, tag=None):
        self.add(name, value, expected, bool(value == expected), tag)

    @property
    def status(self) -> str:
        states = {r["status"] for r in self.rows}
        if "fail" in states:
            return "fail"
        if "inconclusive" in states:
            return "inconclusive"
        return "pass"


def _empty_document(config: RunConfig) -> dict:
    return {
        "params": config.as_params(),
        "status": "pass",
        "symbolic": [],
        "eigenvalues": [],
        "weights": [],
        "gram_max_dev": None,
        "intertwine_residual": None,
        "decomposition": [],
        "symbols": [],
        "winding": [],
        "pullback_pass": None,
        "compact_remainder": [],
        "h0_probe": [],
        "gauge": [],
        "spectrum": [],
        "cross_engine": [],
        "checks": [],
    }


def _symbolic_section(doc: dict, checks: Checks) -> None:
    doc["symbolic"] = ncwords.symbolic_suite()
    for row in doc["symbolic"]:
        checks.add(f"symbolic: {row['identity']}", row["proven"], True, row["proven"])


_EXPANSIONS = ("x1*x1", "x2*x2", "x1*x2", "x2*x1", "x1x1*", "x2x2*")


def _cross_engine(ctx: qcp.TruncationContext, x1: np.ndarray, x2: np.ndarray) -> list[dict]:
    h = lambda m: m.conj().T  # noqa: E731
    numeric = {
        "x1*x1": h(x1) @ x1,
        "x2*x2": h(x2) @ x2,
        "x1*x2": h(x1) @ x2,
        "x2*x1": h(x2) @ x1,
        "x1x1*": x1 @ h(x1),
        "x2x2*": x2 @ h(x2),
    }
    return [
        {"product": name, "residual": qcp.cross_engine_residual(ncwords.nc_expand_canonical(name), numeric[name], ctx)}
        for name in _EXPANSIONS
    ]


def run_point(config: RunConfig, q: float, c: float, doc: dict, checks: Checks, sections: set[str]) -> None:
    ctx = config.context(q, c)
    tag = {"q": q, "c": c, "t1_angle": config.t1_angle}
    needs_dec = sections & {"decompose", "weights", "symbol", "index", "h0-probe"}
    dec = rep = None
    if needs_dec:
        dec = qcp.decompose(ctx, config.K)
        rep = qcp.measure_decomposition(dec)

    if "decompose" in sections:
        doc["gram_max_dev"] = max(doc["gram_max_dev"] or 0.0, rep.gram_max_dev)
        doc["intertwine_residual"] = max(doc["intertwine_residual"] or 0.0, rep.intertwine_residual)
        doc["decomposition"].append({
            **tag,
            "gram_max_dev": rep.gram_max_dev,
            "tail_mass": rep.tail_mass,
            "trace_p1": rep.trace_p1,
            "trace_p2": rep.trace_p2,
            "idempotency_p1": rep.idempotency_p1,
            "idempotency_p2": rep.idempotency_p2,
            "seed_overlap": rep.seed_overlap,
            "x2t_isometry_defect": rep.x2t_isometry_defect,
            "x1t_coisometry_defect": rep.x1t_coisometry_defect,
            "kernel_overlap": rep.kernel_overlap,
            "kernel_residual": rep.kernel_residual,
            "intertwine_residual": rep.intertwine_residual,
            "matrix_unit_residual": rep.matrix_unit_residual,
            "small_singular_x1": rep.small_singular_x1,
            "small_singular_x2": rep.small_singular_x2,
            "trusted_kernel_x1": rep.trusted_kernel_x1,
            "trusted_kernel_x2": rep.trusted_kernel_x2,
        })
        checks.below("gram deviation", rep.gram_max_dev, qcp.PASS_TOL, tag)
        checks.below("x2t isometry defect", rep.x2t_isometry_defect, TRUSTED_TOL, tag)
        checks.below("x1t coisometry defect", rep.x1t_coisometry_defect, qcp.PASS_TOL, tag)
        checks.below("|trace p1 - 1|", abs(rep.trace_p1 - 1), 1e-6, tag)
        checks.below("|trace p2 - 1|", abs(rep.trace_p2 - 1), 1e-6, tag)
        checks.below("|<v1, v2>|", rep.seed_overlap, qcp.PASS_TOL, tag)
        checks.below("1 - kernel overlap", 1 - rep.kernel_overlap, qcp.PASS_TOL, tag)
        checks.below("kernel residual", rep.kernel_residual, TRUSTED_TOL, tag)
        checks.below("intertwining residual", rep.intertwine_residual, qcp.PASS_TOL, tag)
        checks.below("matrix unit residual", rep.matrix_unit_residual, qcp.PASS_TOL, tag)
        checks.equal("trusted kernel dim x1", rep.trusted_kernel_x1, 1, tag)
        checks.equal("trusted kernel dim x2", rep.trusted_kernel_x2, 0, tag)
        rows = _cross_engine(ctx, dec.x1, dec.x2)
        doc["cross_engine"].extend({**tag, **r} for r in rows)
        checks.below("cross-engine residual", max(r["residual"] for r in rows), TRUSTED_TOL, tag)

    if "weights" in sections or "decompose" in sections:
        for r in rep.eigen_rows:
            doc["eigenvalues"].append({**tag, "k": r["k"], "formula": r["formula"], "measured": r["measured"], "residual": r["residual"]})
        checks.below("eigenvalue deviation", rep.max_eigen_deviation, qcp.PASS_TOL, tag)
        checks.below("eigenvector residual", rep.max_eigen_residual, qcp.PASS_TOL, tag)
    if "weights" in sections:
        for r in rep.weight_rows:
            doc["weights"].append({**tag, "k": r["k"], "formula": r["formula"], "measured": r["measured"], "residual": r["residual"], "leakage": r["leakage"]})
        checks.below("weight residual", rep.max_weight_residual, qcp.PASS_TOL, tag)
        checks.below("off-shift leakage", rep.max_leakage, qcp.PASS_TOL, tag)

    if "spectrum" in sections:
        rows = qcp.small_instance_match(q, c, N=16, count=6, t1=ctx.t1)
        doc["spectrum"].extend({**tag, "N": 16, **r} for r in rows)
        if dec is None:
            seq = qcp.eigen_sequence(q, c, config.K)
            for k in range(1, config.K + 1):
                doc["eigenvalues"].append({**tag, "k": k, "formula": float(seq[k]), "measured": None, "residual": None})
        checks.below("small-instance eigenvalue distance", max(r["distance"] for r in rows), SMALL_INSTANCE_TOL, tag)

    if "symbol" in sections:
        _symbol_section(dec, doc, checks, tag)

    if "index" in sections:
        _index_section(dec, doc, checks, tag)

    if "h0-probe" in sections:
        probe = qcp.h0_probe(ctx, dec.basis.vectors, dec.x1sx1)
        wold = qcp.wold_summary(dec)
        doc["h0_probe"].append({
            **tag,
            "complement_dim": probe.complement_dim,
            "max_deviation": probe.max_deviation,
            "median_deviation": probe.median_deviation,
            **wold,
        })
        checks.equal("range codimension of x1t*x2t", wold["range_codimension"], 2, tag)

    if "gauge" in sections:
        angles = list(dict.fromkeys(list(config.gauge_angles) + [config.t1_angle]))
        g = qcp.gauge_check(ctx, [complex(np.exp(1j * a)) for a in angles], K=config.K)
        doc["gauge"].append({
            "q": q,
            "c": c,
            "angles": angles,
            "spectrum_dev": g.spectrum_dev,
            "singular_dev": g.singular_dev,
            "conjugation_dev": g.conjugation_dev,
            "x1sx1_conjugation_dev": g.x1sx1_conjugation_dev,
            "weight_dev": g.weight_dev,
        })
        checks.below("gauge spectrum deviation", g.spectrum_dev, TRUSTED_TOL, tag)
        checks.below("gauge singular value deviation", g.singular_dev, TRUSTED_TOL, tag)
        checks.below("gauge conjugation identity", g.conjugation_dev, TRUSTED_TOL, tag)


def decay_corner(q: float, c: float, tol: float) -> int:
    """Smallest subspace position n with max(1, c) * q^(-2(n-1)) below ``tol``.

    Band entries of the diagonal operators approach their symbol at this rate,
    so symbol windows and remainder corners must start at or beyond it.
    """
    return math.ceil(math.log(max(1.0, c) / tol) / (2 * math.log(q))) + 1


def _symbol_section(dec: qcp.Decomposition, doc: dict, checks: Checks, tag: dict) -> None:
    c = float(dec.ctx.c)
    B = dec.basis.vectors
    ops = {"x1t*x2t": dec.shift, "x1*x1": dec.x1sx1, "x2*x2": dec.x2sx2, "x1*x2": dec.x1sx2}
    result = pullback.pullback_check(ops, B, max_freq=2, tol=SYMBOL_TOL)
    corner = decay_corner(float(dec.ctx.q), c, SYMBOL_TOL)
    # the estimate window in each subspace starts near 3/4 of its length
    resolvable = corner <= math.ceil(3 * (dec.K // 2) / 4)
    all_trusted = resolvable
    for row in result.rows:
        for sub in ("H1", "H2"):
            s = row[sub]
            all_trusted &= s.trusted
            doc["symbols"].append({
                **tag,
                "operator": row["operator"],
                "subspace": sub,
                "coeffs": s.as_pairs(),
                "scatter_max": max(s.scatter.values()),
                "trusted": s.trusted,
                "resolvable": resolvable,
            })
    pb_ok = result.passed if all_trusted else None
    if pb_ok is not None:
        doc["pullback_pass"] = pb_ok if doc["pullback_pass"] is None else (doc["pullback_pass"] and pb_ok)
    checks.add("pullback: H1/H2 symbols agree", max(r["max_diff"] for r in result.rows), SYMBOL_TOL, pb_ok, tag)

    expected = {
        "x1*x1": {0: c},
        "x2*x2": {0: 1.0},
        "x1t*x2t": {1: 1.0},
    }
    for row in result.rows:
        name = row["operator"]
        if name not in expected:
            continue
        for sub in ("H1", "H2"):
            s = row[sub]
            dev = max(abs(s.coeff(d) - expected[name].get(d, 0.0)) for d in s.coeffs)
            checks.add(f"symbol of {name} on {sub}", dev, SYMBOL_TOL, (dev < SYMBOL_TOL) if s.trusted and resolvable else None, tag)
    for sub in ("H1", "H2"):
        s = next(r for r in result.rows if r["operator"] == "x1*x2")[sub]
        dev = abs(abs(s.coeff(1)) - math.sqrt(c))
        checks.add(f"|symbol coeff 1| of x1*x2 on {sub} = sqrt(c)", dev, SYMBOL_TOL, (dev < SYMBOL_TOL) if s.trusted and resolvable else None, tag)

    for sub, i in (("H1", 1), ("H2", 2)):
        s = next(r for r in result.rows if r["operator"] == "x1*x1")[sub]
        rem = pullback.compact_remainder_check(dec.x1sx1, B, i, s, corner, SYMBOL_TOL)
        doc["compact_remainder"].append({**tag, "operator": "x1*x1", "subspace": sub, **rem})
        checks.add(f"compact remainder of x1*x1 on {sub}", rem["max_outside"], SYMBOL_TOL,
                   rem["pass"] if s.trusted and resolvable else None, tag)


def _ambient_basis(ctx: qcp.TruncationContext) -> np.ndarray:
    return np.eye(ctx.N, dtype=complex)[:, : ctx.trusted]


def _index_section(dec: qcp.Decomposition, doc: dict, checks: Checks, tag: dict) -> None:
    E = _ambient_basis(dec.ctx)
    cases = [
        ("x2", dec.x2, E, "ambient", -1),
        ("x1", dec.x1, E, "ambient", 1),
        ("x1*x2", dec.x1sx2, E, "ambient", -2),
        ("x1t*x2t", dec.shift, dec.basis.vectors, "v-basis interleaved", -2),
    ]
    for name, T, basis, label, expected in cases:
        s = pullback.symbol_estimate(T, basis, None, max_freq=2, strict=False)
        try:
            wind = pullback.winding_index(s)
            index = -wind
        except pullback.IndexUndefinedError:
            wind = index = None
        doc["winding"].append({
            **tag,
            "operator": name,
            "basis": label,
            "winding": wind,
            "index": index,
            "expected_index": expected,
            "trusted": s.trusted,
        })
        ok = (index == expected) if s.trusted and index is not None else None
        checks.add(f"Fredholm index of {name}", index, expected, ok, tag)


def build_document(config: RunConfig) -> dict:
    sections = SUBCOMMAND_SECTIONS[config.subcommand]
    doc = _empty_document(config)
    checks = Checks()
    if "symbolic" in sections:
        _symbolic_section(doc, checks)
    numeric = sections - {"symbolic"}
    if numeric:
        for q, c in config.points():
            run_point(config, q, c, doc, checks, numeric)
    doc["checks"] = checks.rows
    doc["status"] = checks.status
    return doc


# -- serialization -------------------------------------------------------


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return format(x, ".16e")


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, bool) or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return _encode([obj.real, obj.imag], indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(doc: dict, indent: int = 2) -> str:
    return _encode(doc, indent, 0) + "\n"


CSV_FIELDS = ("table", "q", "c", "t1_angle", "k", "formula", "measured", "residual")


def to_csv(doc: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for table, rows in (("eigenvalue", doc["eigenvalues"]), ("weight", doc["weights"])):
        for r in rows:
            cells = [table]
            for key in CSV_FIELDS[1:]:
                v = r.get(key)
                if v is None:
                    cells.append("")
                elif isinstance(v, float):
                    cells.append(_fmt_float(v))
                else:
                    cells.append(str(v))
            writer.writerow(cells)
    return buf.getvalue()


def emit(doc: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return to_json(doc)
    if fmt == "csv":
        return to_csv(doc)
    raise ValueError(f"unknown format {fmt!r}")

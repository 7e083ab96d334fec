"""Job documents, result tables and their text forms.

Jobs are JSON objects with a ``kind`` and kind-specific fields.  Matrices are
lists of rows of polynomial strings in the grammar

    poly   := term ("+" term)*
    term   := "0" | "1" | factor (["*"] factor)*
    factor := "x" INDEX ["^" ["-"] INT]

Coefficients are implicit (GF(2)), so repeated terms cancel:
``x0^-1*x1`` is the monomial with exponent (-1, 1).
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError

KINDS = ("entropy", "betti", "covers", "fixpoints", "duality", "grothendieck", "oracle", "tiling-verify")
CSV_HEADER = ("n", "volume", "dim", "value", "uncertainty", "crosscheck")

EXIT_OK = 0
EXIT_ARGUMENT = 2
EXIT_RESOURCE = 3
EXIT_VERIFICATION = 4
EXIT_UNSETTLED = 5

_FACTOR = re.compile(r"x(\d+)(?:\^(-?\d+))?")


def parse_poly(text: str, dim: int):
    from .laurent import LaurentPoly

    if not isinstance(text, str):
        raise ArgumentError(f"expected a polynomial string, got {text!r}")
    body = text.strip()
    if not body:
        raise ArgumentError("empty polynomial")
    terms = []
    for raw in body.split("+"):
        term = raw.strip()
        if not term:
            raise ArgumentError(f"empty term in {text!r}")
        if term == "0":
            continue
        if term == "1":
            terms.append((0,) * dim)
            continue
        exp = [0] * dim
        seen = 0
        for part in re.split(r"[\s*]+", term):
            if not part:
                continue
            mt = _FACTOR.fullmatch(part)
            if not mt:
                raise ArgumentError(f"bad monomial {term!r}")
            i = int(mt.group(1))
            if i >= dim:
                raise ArgumentError(f"variable x{i} out of range for d={dim}")
            exp[i] += int(mt.group(2)) if mt.group(2) is not None else 1
            seen += 1
        if not seen:
            raise ArgumentError(f"bad monomial {term!r}")
        terms.append(tuple(exp))
    return LaurentPoly(dim, terms)


# -- job documents ----------------------------------------------------------------


@dataclass
class JobDocument:
    kind: str
    payload: dict
    seed: int | None = None

    def to_dict(self):
        out = {"kind": self.kind, **self.payload}
        if self.seed is not None:
            out["seed"] = self.seed
        return out


class _Path:
    def __init__(self, parts=()):
        self.parts = tuple(parts)

    def __truediv__(self, key):
        return _Path(self.parts + (key,))

    def __str__(self):
        s = ""
        for p in self.parts:
            s += f"[{p}]" if isinstance(p, int) else (f".{p}" if s else p)
        return s or "<root>"

    def fail(self, msg):
        raise ArgumentError(f"{self}: {msg}")


def _int(obj, path, lo=None, hi=None):
    if isinstance(obj, bool) or not isinstance(obj, int):
        path.fail(f"expected an integer, got {obj!r}")
    if lo is not None and obj < lo:
        path.fail(f"must be >= {lo}")
    if hi is not None and obj > hi:
        path.fail(f"must be <= {hi}")
    return obj


def _list(obj, path):
    if not isinstance(obj, list):
        path.fail(f"expected a list, got {type(obj).__name__}")
    return obj


def _matrix(obj, path, d, cols=None):
    """Canonical string matrix; checks rectangular shape and grammar."""
    rows = _list(obj, path)
    out = []
    for i, row in enumerate(rows):
        row = _list(row, path / i)
        if cols is not None and len(row) != cols:
            (path / i).fail(f"expected {cols} entries, got {len(row)}")
        cols = len(row)
        canon = []
        for j, cell in enumerate(row):
            try:
                canon.append(str(parse_poly(cell, d)))
            except ArgumentError as exc:
                (path / i / j).fail(str(exc))
        out.append(canon)
    return out


def _schedule(obj, path):
    sched = [_int(n, path / i, lo=1) for i, n in enumerate(_list(obj, path))]
    if not sched:
        path.fail("empty schedule")
    if any(b <= a for a, b in zip(sched, sched[1:])):
        path.fail("schedule must be strictly increasing")
    return sched


def _points(obj, path, d):
    if isinstance(obj, dict):
        lo = [_int(x, path / "lo" / i) for i, x in enumerate(_list(obj.get("lo"), path / "lo"))]
        hi = [_int(x, path / "hi" / i) for i, x in enumerate(_list(obj.get("hi"), path / "hi"))]
        if len(lo) != d or len(hi) != d:
            path.fail(f"box corners must have length {d}")
        return {"hi": hi, "lo": lo}
    pts = []
    for i, pt in enumerate(_list(obj, path)):
        pt = _list(pt, path / i)
        if len(pt) != d:
            (path / i).fail(f"point must have {d} coordinates")
        pts.append([_int(x, path / i / k) for k, x in enumerate(pt)])
    return pts


def _presentation_fields(doc, path, out):
    d = _int(doc.get("d"), path / "d", 1, 3)
    out["d"] = d
    rel = doc.get("relations", [])
    if rel == "random":
        out["relations"] = "random"
        if "r" in doc:
            out["r"] = _int(doc["r"], path / "r", 1)
        return d
    rel = _matrix(rel, path / "relations", d)
    out["relations"] = rel
    if "r" in doc:
        r = _int(doc["r"], path / "r", 1)
        if rel and len(rel[0]) != r:
            (path / "relations").fail(f"rows have {len(rel[0])} entries but r = {r}")
        out["r"] = r
    elif rel:
        out["r"] = len(rel[0])
    else:
        (path / "r").fail("r is required when relations are empty")
    return d


def _complex_field(obj, path):
    from .betti import EXAMPLES

    if isinstance(obj, str):
        if obj not in EXAMPLES:
            path.fail(f"unknown complex {obj!r}")
        return obj
    if not isinstance(obj, dict):
        path.fail("expected a preset name or a complex object")
    d = _int(obj.get("d"), path / "d", 1, 3)
    cells = [_int(c, path / "cells" / i, 0) for i, c in enumerate(_list(obj.get("cells"), path / "cells"))]
    cob = _list(obj.get("coboundaries", []), path / "coboundaries")
    if len(cob) != len(cells) - 1:
        (path / "coboundaries").fail(f"expected {len(cells) - 1} coboundaries")
    mats = []
    for p, m in enumerate(cob):
        mp = _matrix(m, path / "coboundaries" / p, d, cols=cells[p])
        if len(mp) != cells[p + 1]:
            (path / "coboundaries" / p).fail(f"expected {cells[p + 1]} rows")
        mats.append(mp)
    return {"cells": cells, "coboundaries": mats, "d": d}


def validate_job(doc) -> JobDocument:
    root = _Path()
    if not isinstance(doc, dict):
        root.fail("job must be a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        (root / "kind").fail(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    seed = doc.get("seed")
    if seed is not None:
        _int(seed, root / "seed")
    p = {}
    known = {"kind", "seed"}

    def opt_schedule():
        if "schedule" in doc:
            p["schedule"] = _schedule(doc["schedule"], root / "schedule")
        known.add("schedule")

    if kind in ("entropy", "fixpoints", "duality", "grothendieck", "oracle"):
        d = _presentation_fields(doc, root, p)
        known |= {"d", "r", "relations"}
        if p["relations"] == "random" and seed is None:
            (root / "seed").fail("a seed is required for random relations")
    if kind == "entropy":
        opt_schedule()
        if "extra" in doc:
            if p["relations"] == "random":
                (root / "extra").fail("extra relations need explicit relations")
            p["extra"] = _matrix(doc["extra"], root / "extra", d, cols=p["r"])
        known.add("extra")
    elif kind == "duality":
        opt_schedule()
    elif kind == "grothendieck":
        opt_schedule()
        p["extra"] = _matrix(doc.get("extra", []), root / "extra", d, cols=p.get("r"))
        known.add("extra")
    elif kind == "fixpoints":
        p["sides"] = _schedule(doc.get("sides", [2, 4, 8]), root / "sides")
        known.add("sides")
    elif kind == "oracle":
        p["box"] = _int(doc.get("box"), root / "box", 1)
        known.add("box")
    elif kind in ("betti", "covers"):
        p["complex"] = _complex_field(doc.get("complex"), root / "complex")
        known.add("complex")
        if "degree" in doc:
            p["degree"] = _int(doc["degree"], root / "degree", 0)
        known.add("degree")
        if kind == "betti":
            opt_schedule()
            if "crosscheck" in doc:
                if not isinstance(doc["crosscheck"], bool):
                    (root / "crosscheck").fail("expected a boolean")
                p["crosscheck"] = doc["crosscheck"]
            known.add("crosscheck")
        else:
            p["sides"] = _schedule(doc.get("sides", [2, 4, 8]), root / "sides")
            known.add("sides")
    elif kind == "tiling-verify":
        d = _int(doc.get("d"), root / "d", 1, 3)
        p["d"] = d
        eps = doc.get("epsilon", 0)
        if isinstance(eps, bool) or not isinstance(eps, (int, float)) or not 0 <= eps < 1:
            (root / "epsilon").fail(f"epsilon {eps!r} outside [0, 1)")
        p["epsilon"] = eps
        tiles = _list(doc.get("tiles"), root / "tiles")
        centers = _list(doc.get("centers"), root / "centers")
        if len(tiles) != len(centers):
            (root / "centers").fail(f"{len(tiles)} tiles but {len(centers)} center sets")
        p["tiles"] = [_points(t, root / "tiles" / i, d) for i, t in enumerate(tiles)]
        p["centers"] = [_points(c, root / "centers" / i, d) for i, c in enumerate(centers)]
        p["target"] = _points(doc.get("target"), root / "target", d)
        known |= {"d", "epsilon", "tiles", "centers", "target"}
    unknown = sorted(set(doc) - known)
    if unknown:
        (root / unknown[0]).fail("unexpected field")
    return JobDocument(kind, p, seed)


def parse_job(text: str) -> JobDocument:
    """Parse and validate a JSON job; errors name the offending field path."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArgumentError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return validate_job(doc)


def serialize_job(job: JobDocument) -> str:
    """Canonical JSON text; parse_job(serialize_job(j)) == j."""
    return json.dumps(job.to_dict(), sort_keys=True, indent=2) + "\n"


# -- result tables --------------------------------------------------------------------


@dataclass
class ResultTable:
    kind: str
    rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    residuals: list | None = None
    exit_code: int = EXIT_OK

    def to_dict(self):
        return {"exit_code": self.exit_code, "kind": self.kind, "residuals": self.residuals, "rows": self.rows, "summary": self.summary}

    @classmethod
    def from_dict(cls, obj):
        return cls(obj["kind"], obj["rows"], obj["summary"], obj["residuals"], obj["exit_code"])


def _row(n, volume, dim, value, uncertainty, crosscheck):
    row = {"n": int(n), "volume": int(volume), "dim": int(dim), "value": float(value),
           "uncertainty": float(uncertainty), "crosscheck": None if crosscheck is None else float(crosscheck)}
    for key in ("value", "uncertainty", "crosscheck"):
        if row[key] is not None and not math.isfinite(row[key]):
            raise ArgumentError(f"non-finite {key} in result row")
    return row


def emit(table: ResultTable, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(table.to_dict(), sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in table.rows:
            w.writerow(["" if row[k] is None else (repr(row[k]) if isinstance(row[k], float) else row[k]) for k in CSV_HEADER])
        return buf.getvalue()
    raise ArgumentError(f"unknown format {fmt!r}")


def parse_table(text: str) -> ResultTable:
    return ResultTable.from_dict(json.loads(text))


# -- running jobs ---------------------------------------------------------------------


def _presentation(p, seed):
    from .subshift import SubshiftPresentation, random_presentation

    if p["relations"] == "random":
        rng = np.random.default_rng(seed)
        kw = {"cols": p["r"]} if "r" in p else {}
        return random_presentation(rng, d=p["d"], **kw)
    return SubshiftPresentation.from_strings(p["d"], p["relations"], r=p["r"])


def _complex(obj):
    from .betti import PeriodicComplex, example_complex
    from .laurent import LaurentMatrix

    if isinstance(obj, str):
        return example_complex(obj)
    d = obj["d"]
    cells = obj["cells"]
    mats = [LaurentMatrix(d, m, cells[p + 1], cells[p]) for p, m in enumerate(obj["coboundaries"])]
    return PeriodicComplex(d, cells, mats)


def _window(obj, d):
    from .lattice import LatticeWindow, box

    if isinstance(obj, dict):
        return box(obj["lo"], obj["hi"])
    return LatticeWindow(d, obj)


def _degrees(p, cx):
    if "degree" not in p:
        return list(range(cx.top + 1))
    if p["degree"] > cx.top:
        raise ArgumentError(f"degree: {p['degree']} exceeds top degree {cx.top}")
    return [p["degree"]]


def _estimate_rows(est, crosscheck=None):
    cc = crosscheck if crosscheck is not None else est.crosscheck
    return [
        _row(n, v, dim, val, u, None if cc is None else cc[i])
        for i, (n, v, dim, val, u) in enumerate(zip(est.schedule, est.volumes, est.dims, est.values, est.uncertainty))
    ]


def _snap_summary(est):
    s = est.snapped
    return {"snapped": "unsettled" if s is None else s}


def run_job(job: JobDocument, max_cells=None, require_snap=False) -> ResultTable:
    """Dispatch a validated job; deterministic for a fixed document and seed."""
    import importlib

    B = importlib.import_module(".betti", __package__)
    D = importlib.import_module(".duality", __package__)
    S = importlib.import_module(".subshift", __package__)
    from .laurent import LaurentMatrix
    from .lattice import finite_quotient, folner_box, verify_quasi_tiling

    p = job.payload
    kind = job.kind
    table = ResultTable(kind)
    sched = p.get("schedule")

    if kind == "entropy":
        pres = _presentation(p, job.seed)
        if "extra" in p:
            extra = LaurentMatrix(p["d"], p["extra"], len(p["extra"]), pres.r)
            est = S.quotient_entropy(pres, extra, sched, max_cells)
        else:
            est = S.entropy(pres, sched, max_cells)
            gaps, unc = est.crosscheck_gaps(), est.combined_uncertainty()
            table.residuals = gaps
            if any(g > u for g, u in zip(gaps, unc)):
                table.exit_code = EXIT_VERIFICATION
        table.rows = _estimate_rows(est)
        table.summary = {**_snap_summary(est), "r": pres.r, "d": pres.d, "relations": [[str(x) for x in row] for row in pres.relations.entries]}
    elif kind == "duality":
        pres = _presentation(p, job.seed)
        res = D.perp_entropy_check(pres, sched)
        est = S.entropy(pres, res.schedule, max_cells, crosscheck=False)
        table.rows = _estimate_rows(est, crosscheck=res.parts["perp_values"])
        table.residuals = res.residuals
        table.summary = {**_snap_summary(est), "within_uncertainty": res.within(-1)}
        if not res.within(-1):
            table.exit_code = EXIT_VERIFICATION
    elif kind == "grothendieck":
        pres = _presentation(p, job.seed)
        module = D.ModulePresentation(pres.relations)
        extra = LaurentMatrix(p["d"], p["extra"], len(p["extra"]), pres.r) if p["extra"] else LaurentMatrix.empty(p["d"], pres.r)
        res = D.grothendieck_additivity_check(module, extra, sched)
        sched = res.schedule
        vols = [n ** p["d"] for n in sched]
        table.rows = [_row(n, v, round(m * v), m, u, diff) for n, v, m, u, diff in
                      zip(sched, vols, res.parts["rank_M"], res.uncertainty, res.parts["difference"])]
        table.residuals = res.residuals
        s = S.snap_integer(res.parts["difference"])
        table.summary = {"snapped": "unsettled" if s is None else s, "within_uncertainty": res.within(-1)}
        if not res.within(-1):
            table.exit_code = EXIT_VERIFICATION
    elif kind == "fixpoints":
        pres = _presentation(p, job.seed)
        sides = p["sides"]
        est = S.entropy(pres, sides, max_cells, crosscheck=False)
        for i, n in enumerate(sides):
            q = finite_quotient(np.diag([n] * pres.d))
            dim = S.fixed_point_log_count(pres, q)
            table.rows.append(_row(n, q.index, dim, dim / q.index, est.uncertainty[i], est.values[i]))
        table.residuals = [abs(r["value"] - r["crosscheck"]) for r in table.rows]
        s = S.snap_integer([r["value"] for r in table.rows])
        table.summary = {"snapped": "unsettled" if s is None else s}
    elif kind == "oracle":
        pres = _presentation(p, job.seed)
        w = folner_box(p["box"], pres.d)
        patterns = S.enumerate_oracle(pres, w)
        count = len(patterns)
        log2 = int(round(math.log2(count)))
        kdim = S.local_kernel_dim(pres, w)
        u = pres.r * S.boundary_volume(w, pres.k) / len(w)
        table.rows = [_row(p["box"], len(w), log2, log2 / len(w), u, kdim / len(w))]
        table.summary = {"patterns": count, "local_kernel_dim": kdim, "agree": count == 2**kdim}
        if count != 2**kdim:
            table.exit_code = EXIT_VERIFICATION
    elif kind == "betti":
        cx = _complex(p["complex"])
        degrees = _degrees(p, cx)
        snapped = {}
        for g in degrees:
            est = B.betti(cx, g, sched, crosscheck=p.get("crosscheck", False))
            rows = _estimate_rows(est)
            for r in rows:
                r["degree"] = g
            table.rows += rows
            snapped[str(g)] = _snap_summary(est)["snapped"]
        eu = B.euler_check(cx, sched)
        table.residuals = eu.residuals
        table.summary = {"snapped": snapped, "euler": cx.euler, "euler_within_uncertainty": eu.within(-1)}
        if not eu.within(-1):
            table.exit_code = EXIT_VERIFICATION
        if require_snap and any(v == "unsettled" for v in snapped.values()):
            table.exit_code = EXIT_UNSETTLED
        return table
    elif kind == "covers":
        cx = _complex(p["complex"])
        degrees = _degrees(p, cx)
        exact = True
        for n in p["sides"]:
            q = finite_quotient(np.diag([n] * cx.d))
            dims = B.cover_cohomology(cx, q)
            exact &= sum((-1) ** g * x for g, x in enumerate(dims)) == q.index * cx.euler
            f = folner_box(n, cx.d)
            for g in degrees:
                u = max(cx.cells[g], 1) * S.boundary_volume(f, cx.radius) / q.index
                row = _row(n, q.index, dims[g], dims[g] / q.index, u, None)
                row["degree"] = g
                table.rows.append(row)
        table.summary = {"euler": cx.euler, "euler_multiplicative": exact}
        if not exact:
            table.exit_code = EXIT_VERIFICATION
        return table
    elif kind == "tiling-verify":
        d = p["d"]
        rep = verify_quasi_tiling(
            [_window(t, d) for t in p["tiles"]],
            [_window(c, d) for c in p["centers"]],
            _window(p["target"], d),
            p["epsilon"],
        )
        table.summary = {
            "passed": rep.passed,
            "failed_conditions": rep.failed_conditions(),
            "coverage": f"{rep.coverage.numerator}/{rep.coverage.denominator}",
            "cross_disjoint": rep.cross_disjoint,
            "eps_disjoint": rep.eps_disjoint,
            "covers": rep.covers,
            "nested": rep.nested,
            "kept_sizes": rep.kept_sizes,
            "overlaps": [[i, j, list(pt)] for i, j, pt in rep.overlaps],
            "deficits": [[i, list(c), kept, float(need)] for i, c, kept, need in rep.deficits],
        }
        if not rep.passed:
            table.exit_code = EXIT_VERIFICATION
        return table

    if require_snap and table.summary.get("snapped") == "unsettled":
        table.exit_code = EXIT_UNSETTLED
    return table

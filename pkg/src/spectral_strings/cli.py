"""``spectral-strings`` command line: terms, verify, sweep.

Model files are JSON documents::

    {"K": [[1, 0], [0, 1]], "L": [[2, 0], [0, 3]], "phi": [1, 0], "kappa": 1}

Sweep files wrap a model::

    {"base": {...model...}, "parameter": "L.1.1", "range": [1, 3],
     "steps": 3, "outputs": ["v_int"]}

Exit codes: 0 ok, 1 verification failure, 2 parse error, 3 singular or
rejected zweibein, 4 quadrature did not converge, 5 I/O error.
"""

from __future__ import annotations

import argparse
import copy
import csv
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import analytic
from .geometry import MIN_ABS_DET, SingularZweibeinError
from .linalg2 import det2
from .quadrature import QuadratureConfig
from .symbols import DoubledGeometry
from .terms import numeric_terms

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_SINGULAR, EXIT_QUAD, EXIT_IO = range(6)

SWEEP_OUTPUTS = ("cosmological", "mass_correction", "v1", "v_int", "det_X")

# closed forms checked by ``verify``, keyed by the integrand they should match;
# tests substitute entries here as a negative control
CLOSED_FORMS = {
    "cosmological": lambda g: analytic.cosmological_term(g.K, g.L),
    "mass_correction": lambda g: analytic.mass_correction(g.K, g.L, g.phi, g.kappa),
    "v1": lambda g: analytic.v1_invariant(g.K, g.L, g.phi, g.kappa),
}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class Model:
    K: list
    L: list
    phi: complex
    kappa: int


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_PARSE, f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _real(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise CliError(EXIT_PARSE, f"field {where}: expected a number, got {x!r}")
    if not math.isfinite(x):
        raise CliError(EXIT_PARSE, f"field {where}: value must be finite")
    return float(x)


def _matrix(doc, name: str) -> list:
    m = doc.get(name)
    if not (isinstance(m, list) and len(m) == 2 and all(isinstance(r, list) and len(r) == 2 for r in m)):
        raise CliError(EXIT_PARSE, f"field {name}: expected a 2x2 array")
    return [[_real(m[i][j], f"{name}.{i}.{j}") for j in range(2)] for i in range(2)]


def parse_model(doc, where: str = "model") -> Model:
    if not isinstance(doc, dict):
        raise CliError(EXIT_PARSE, f"{where}: expected an object")
    for key in ("K", "L", "phi", "kappa"):
        if key not in doc:
            raise CliError(EXIT_PARSE, f"{where}: missing field {key}")
    K = _matrix(doc, "K")
    L = _matrix(doc, "L")
    phi = doc["phi"]
    if not (isinstance(phi, list) and len(phi) == 2):
        raise CliError(EXIT_PARSE, "field phi: expected [re, im]")
    phi = complex(_real(phi[0], "phi.0"), _real(phi[1], "phi.1"))
    kappa = doc["kappa"]
    if kappa not in (1, -1) or isinstance(kappa, bool):
        raise CliError(EXIT_PARSE, f"field kappa: expected +1 or -1, got {kappa!r}")
    return Model(K, L, phi, int(kappa))


def build_geometry(model: Model, *, strict: bool = False) -> DoubledGeometry:
    for name in ("K", "L"):
        d = det2(np.array(getattr(model, name)))
        if abs(d) < MIN_ABS_DET:
            raise CliError(EXIT_SINGULAR, f"zweibein {name} is singular (det={d!r})")
        if strict and d < 0:
            raise CliError(EXIT_SINGULAR, f"--paper-strict needs det {name} > 0, got {d!r}")
    try:
        return DoubledGeometry(model.K, model.L, model.phi, model.kappa)
    except SingularZweibeinError as exc:
        raise CliError(EXIT_SINGULAR, str(exc)) from exc


def terms_record(geom: DoubledGeometry, *, strict: bool = False) -> dict:
    K, L, phi, kappa = geom.K, geom.L, geom.phi, geom.kappa
    td = analytic.contracted_transition(K, L)
    return {
        "cosmological": analytic.cosmological_term(K, L, strict=strict),
        "mass_correction": analytic.mass_correction(K, L, phi, kappa, strict=strict),
        "v1": analytic.v1_invariant(K, L, phi, kappa, strict=strict),
        "v_int": analytic.v_int(K, L, phi, kappa, strict=strict),
        "det_X": det2(td.X),
        "det_sign": td.det_sign,
        "kappa": kappa,
        "self_adjoint": kappa == 1,
    }


def cmd_terms(args) -> int:
    model = parse_model(_load_json(args.model))
    geom = build_geometry(model, strict=args.paper_strict)
    rec = terms_record(geom, strict=args.paper_strict)
    if args.json:
        print(json.dumps(rec))
        return EXIT_OK
    for key in ("cosmological", "mass_correction", "v1", "v_int", "det_X"):
        print(f"{key:16s} {rec[key]:.17g}")
    print(f"{'det_sign':16s} {rec['det_sign']:+d}")
    if geom.kappa == -1:
        print("note: kappa = -1 makes sigma anti-Hermitian; D is not self-adjoint")
    return EXIT_OK


def cmd_verify(args) -> int:
    model = parse_model(_load_json(args.model))
    geom = build_geometry(model)
    cfg = QuadratureConfig(rel_tol=min(1e-8, 1e-2 * args.rel_tol))
    num = numeric_terms(geom, cfg)
    worst, worst_name, ok, converged = 0.0, None, True, True
    for name, closed in CLOSED_FORMS.items():
        ref = closed(geom)
        term = getattr(num, name)
        diff = abs(term.value - ref)
        dev = diff / abs(ref) if ref != 0 else diff
        passed = diff <= max(args.rel_tol * abs(ref), cfg.abs_tol)
        converged &= term.converged
        status = "pass" if passed else "FAIL"
        print(f"{name:16s} closed={ref:.17g} numeric={term.value:.17g} "
              f"err_est={term.error_estimate:.3g} deviation={dev:.3g} {status}")
        if not passed:
            ok = False
            if dev >= worst:
                worst, worst_name = dev, name
    if not converged:
        print("quadrature did not converge", file=sys.stderr)
        return EXIT_QUAD
    if not ok:
        print(f"verification failed; worst term {worst_name} (deviation {worst:.3g})", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def _set_path(doc: dict, path: str, value: float):
    parts = path.split(".")
    node = doc
    try:
        for p in parts[:-1]:
            node = node[int(p)] if isinstance(node, list) else node[p]
        last = int(parts[-1]) if isinstance(node, list) else parts[-1]
        old = node[last]
    except (KeyError, IndexError, ValueError, TypeError):
        raise CliError(EXIT_PARSE, f"parameter path {path!r} does not address a model entry") from None
    if isinstance(old, bool) or not isinstance(old, (int, float)) or parts[0] == "kappa":
        raise CliError(EXIT_PARSE, f"parameter path {path!r} does not address a real scalar")
    node[last] = value


def parse_sweep(doc) -> dict:
    if not isinstance(doc, dict):
        raise CliError(EXIT_PARSE, "sweep: expected an object")
    for key in ("base", "parameter", "range", "steps", "outputs"):
        if key not in doc:
            raise CliError(EXIT_PARSE, f"sweep: missing field {key}")
    parse_model(doc["base"], "base")
    rng = doc["range"]
    if not (isinstance(rng, list) and len(rng) == 2):
        raise CliError(EXIT_PARSE, "field range: expected [start, stop]")
    start, stop = _real(rng[0], "range.0"), _real(rng[1], "range.1")
    steps = doc["steps"]
    if isinstance(steps, bool) or not isinstance(steps, int) or steps < 2:
        raise CliError(EXIT_PARSE, f"field steps: expected an integer >= 2, got {steps!r}")
    outputs = doc["outputs"]
    if not (isinstance(outputs, list) and outputs and all(o in SWEEP_OUTPUTS for o in outputs)):
        raise CliError(EXIT_PARSE, f"field outputs: expected a non-empty list drawn from {SWEEP_OUTPUTS}")
    _set_path(copy.deepcopy(doc["base"]), doc["parameter"], 0.0)
    return {"base": doc["base"], "parameter": doc["parameter"], "start": start,
            "stop": stop, "steps": steps, "outputs": outputs}


def sweep_rows(spec: dict) -> list[list[float]]:
    rows = []
    for value in np.linspace(spec["start"], spec["stop"], spec["steps"]):
        doc = copy.deepcopy(spec["base"])
        _set_path(doc, spec["parameter"], float(value))
        model = parse_model(doc)
        try:
            rec = terms_record(build_geometry(model))
            row = [rec[o] for o in spec["outputs"]]
        except CliError:
            # singular zweibein at this parameter value
            row = [math.nan] * len(spec["outputs"])
        rows.append([float(value)] + row)
    return rows


def cmd_sweep(args) -> int:
    spec = parse_sweep(_load_json(args.sweep))
    rows = sweep_rows(spec)
    try:
        with open(args.output, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["param", *spec["outputs"]])
            for row in rows:
                w.writerow([repr(x) for x in row])
    except OSError as exc:
        print(f"cannot write {args.output}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spectral-strings",
                                description="Spectral-action terms of two coupled constant zweibeins.")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("terms", help="closed-form action terms of a model")
    t.add_argument("model")
    t.add_argument("--json", action="store_true", help="emit a JSON record")
    t.add_argument("--paper-strict", action="store_true",
                   help="signed determinants; rejects negatively oriented zweibeins")
    t.set_defaults(func=cmd_terms)

    v = sub.add_parser("verify", help="compare closed forms with the quadrature oracle")
    v.add_argument("model")
    v.add_argument("--rel-tol", type=float, default=1e-6)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="sweep one model entry and write CSV")
    s.add_argument("sweep")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())

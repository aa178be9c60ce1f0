"""Command-line front end: verification suites, sphere twistor checks, and
mesh spectra with machine-readable reports.

Subcommands
    verify-fiber    exhaustive fiber/curvature identity suites
    twistor         closed-form twistor family checks on S^n
    mesh-spectrum   discrete Hodge spectra, Betti numbers, inequalities

Every run emits one JSON report (schema "dirac-lab/1") that echoes its
configuration, lists one record per check with the identity it tests, and
is byte-for-byte reproducible for a fixed config and seed. Exit codes:
0 pass, 2 check failure, 3 solver failure, 64 usage, 65 input data.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from . import curvature as cv
from . import dec as dc
from . import mesh as ms
from . import sphere as sph
from .fibersuite import run_fiber_suite

EXIT_OK = 0
EXIT_CHECK_FAILED = 2
EXIT_SOLVER_FAILED = 3
EXIT_USAGE = 64
EXIT_DATA = 65

DEFAULTS = {
    "analytic_tol": 1e-8,
    "spectral_rel_tol": 0.02,
    "solver_tol": 1e-8,
    "betti_tol": 1e-6,
    "shift": dc.DEFAULT_SHIFT,
    "seed": 42,
    "samples": 100,
    "max_dim": 5,
    "num_eigenvalues": 10,
    "energy_bound_grid": [0.1, 1.0, 10.0],
}

SCHEMA = "dirac-lab/1"


@dataclass
class RunConfig:
    """Validated, fully resolved settings for one command invocation."""

    command: str
    params: dict = field(default_factory=dict)

    def echo(self) -> dict:
        return {"command": self.command, **self.params}


def _json_safe(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, np.ndarray):
        return [_json_safe(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def build_report(config: RunConfig, records: list[dict]) -> dict:
    records = sorted(records, key=lambda r: r["name"])
    overall = "pass" if all(r["status"] in ("pass", "skipped") for r in records) else "fail"
    return _json_safe({
        "schema": SCHEMA,
        "tool": {"name": "dirac-lab", "version": __version__},
        "config": config.echo(),
        "checks": records,
        "status": overall,
    })


def render_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _record(name, anchor, status, max_residual=None, **details) -> dict:
    rec = {"name": name, "anchor": anchor, "status": status,
           "max_residual": max_residual}
    if details:
        rec["details"] = details
    return rec


# -- verify-fiber -----------------------------------------------------------------


def run_verify_fiber(max_dim: int, exact: bool, seed: int = 42) -> tuple[int, dict]:
    config = RunConfig("verify-fiber", {"max_dim": max_dim, "exact": exact, "seed": seed})
    records = run_fiber_suite(max_dim, exact, seed=seed)
    report = build_report(config, records)
    return (EXIT_OK if report["status"] == "pass" else EXIT_CHECK_FAILED), report


# -- twistor ----------------------------------------------------------------------


def _family_dimension_record(n: int, samples: int, seed: int) -> dict:
    basis = sph.twistor_basis(n)
    points = sph.sample_points(n, max(4, samples // 10), seed + 1)
    rows = []
    for section in basis:
        row = []
        for point in points:
            frame = sph.tangent_frame(point)
            value = sph.evaluate(section, point, frame)
            row.extend(value.coeff(mask) for mask in range(1 << n))
        rows.append(row)
    rank = int(np.linalg.matrix_rank(np.array(rows), tol=1e-9))
    expected = 2 * n + 4
    return _record(
        "twistor-family-dimension",
        "the closed-form family has dimension 2n + 4",
        "pass" if rank == expected else "fail",
        max_residual=float(abs(rank - expected)),
        rank=rank, expected=expected,
    )


def _gap_table_record(n: int) -> dict:
    rows = sph.eigenvalue_gap_table(n)
    bad = [r for r in rows if r["relation"] == "violated"]
    middle_ok = all(r["relation"] == "strict" for r in rows if 2 <= r["p"] <= n - 2)
    edge_ok = all(r["relation"] == "equal" for r in rows if r["p"] in (1, n - 1))
    status = "pass" if (not bad and middle_ok and edge_ok) else "fail"
    return _record(
        "twistor-eigenvalue-gap-table",
        "n/(n-1) p(n-p) below the p-form spectrum strictly for 2 <= p <= n-2, met at p in {1, n-1}",
        status,
        max_residual=0.0 if status == "pass" else 1.0,
        table=[{k: _json_safe(v) for k, v in r.items()} for r in rows],
    )


def run_twistor(n: int, samples: int, tol: float, seed: int,
                ricci_mode: str = "auto") -> tuple[int, dict]:
    config = RunConfig("twistor", {"n": n, "samples": samples, "tol": tol,
                                   "seed": seed, "ricci_mode": ricci_mode})
    suite = sph.verify_identity_suite(n, samples=samples, tol=tol, seed=seed)
    records = []
    for name, rec in suite.items():
        out = _record(name, rec["anchor"], rec["status"],
                      max_residual=rec["max_residual"])
        if rec.get("details"):
            out["details"] = {"note": rec["details"]}
        records.append(out)
    if ricci_mode == "force" and n == 2:
        for rec in records:
            if rec["name"] == "dirac-derivative-endomorphism":
                rec["status"] = "skipped"
                rec["details"] = {"note": "requested explicitly, but unsupported for n = 2"}
    records.append(_family_dimension_record(n, samples, seed))
    records.append(_gap_table_record(n))
    report = build_report(config, records)
    return (EXIT_OK if report["status"] == "pass" else EXIT_CHECK_FAILED), report


# -- mesh-spectrum ----------------------------------------------------------------


def parse_mesh_spec(spec: str) -> ms.SimplicialSurface:
    """Build a mesh from 'icosphere:k', 'torus:m', or an OFF file path."""
    if ":" in spec:
        kind, _, arg = spec.partition(":")
        try:
            value = int(arg)
        except ValueError as exc:
            raise ms.MeshError(f"mesh parameter {arg!r} is not an integer") from exc
        if kind == "icosphere":
            if not 0 <= value <= 7:
                raise ms.MeshError(f"icosphere level {value} out of range 0..7")
            return ms.icosphere(value)
        if kind == "torus":
            if value < 3:
                raise ms.MeshError(f"torus resolution {value} must be >= 3")
            return ms.flat_torus(value)
        raise ms.MeshError(f"unknown mesh kind {kind!r}")
    path = Path(spec)
    if not path.exists():
        raise ms.MeshError(f"mesh file {spec!r} does not exist")
    return ms.load_off(path)


def _mesh_curvature(mesh: ms.SimplicialSurface) -> float | None:
    if mesh.name.startswith("icosphere:"):
        return 1.0
    if mesh.name.startswith("torus:"):
        return 0.0
    return None


def spectrum_csv(result: dc.SpectrumResult) -> str:
    lines = ["degree,index,eigenvalue,residual"]
    for i, (lam, res) in enumerate(zip(result.eigenvalues, result.residuals)):
        lines.append(f"{result.degree},{i},{float(lam)!r},{float(res)!r}")
    return "\n".join(lines) + "\n"


def run_mesh_spectrum(mesh_spec: str, degree: int, num: int, tol: float,
                      seed: int, betti_tol: float = 1e-6,
                      window_rel: float = 0.05) -> tuple[int, dict, str]:
    config = RunConfig("mesh-spectrum", {
        "mesh": mesh_spec, "degree": degree, "num": num, "tol": tol,
        "seed": seed, "betti_tol": betti_tol, "window_rel": window_rel,
    })
    mesh = parse_mesh_spec(mesh_spec)
    dec = dc.build_dec(mesh)
    records = [_record(
        "mesh-validation",
        "closed oriented triangulated surface with positive dual weights",
        "pass",
        max_residual=0.0,
        counts=[mesh.num_vertices, mesh.num_edges, mesh.num_triangles],
        euler_characteristic=mesh.euler_characteristic(),
        scheme=dec.meta["scheme"], floored_edges=dec.meta["floored_edges"],
    )]

    results = []
    main_result = dc.spectrum(dec, degree, min(num, dec.cochain_dim(degree) - 2),
                              tol=tol, seed=seed)
    results.append(main_result)
    records.append(_record(
        "spectrum-residuals",
        "generalized eigenpairs with defect below the requested tolerance",
        "pass" if float(main_result.residuals.max()) <= tol else "fail",
        max_residual=float(main_result.residuals.max()),
        eigenvalues=[float(v) for v in main_result.eigenvalues],
    ))

    betti_numbers = []
    for p in (0, 1, 2):
        if p == degree:
            vals = main_result.eigenvalues
        else:
            extra = dc.spectrum(dec, p, min(6, dec.cochain_dim(p) - 2), tol=tol, seed=seed)
            results.append(extra)
            vals = extra.eigenvalues
        betti_numbers.append(int(np.sum(vals < betti_tol)))
    expected_betti = None
    if mesh.euler_characteristic() == 2:
        expected_betti = [1, 0, 1]
    elif mesh.euler_characteristic() == 0:
        expected_betti = [1, 2, 1]
    betti_status = "pass" if expected_betti in (None, betti_numbers) else "fail"
    records.append(_record(
        "betti-numbers",
        "harmonic cochain counts match the surface topology",
        betti_status,
        max_residual=0.0 if betti_status == "pass" else 1.0,
        betti=betti_numbers, expected=expected_betti,
    ))

    positive = main_result.positive(betti_tol)
    if positive.size:
        target = float(positive[0])
        window = window_rel * target
        mult = main_result.multiplicity_near(target, window)
        records.append(_record(
            "first-cluster-multiplicity",
            "multiplicity of the lowest positive eigenvalue cluster",
            "pass",
            max_residual=0.0,
            target=target, window=window, multiplicity=int(mult),
        ))

    kappa = _mesh_curvature(mesh)
    if kappa is not None:
        r0_value = cv.r0(cv.CurvatureTensor.constant_curvature(2, Fraction(kappa).limit_denominator()))
        ineq = dc.inequality_checks(
            results, r0_value,
            curvature_min=kappa if kappa > 0 else None,
            t_grid=tuple(DEFAULTS["energy_bound_grid"]),
            tol=DEFAULTS["analytic_tol"], harmonic_tol=betti_tol)
        for name, rec in ineq.items():
            records.append(_record(name, rec["anchor"], rec["status"],
                                   max_residual=float(-min(rec["margin"], 0.0)),
                                   **{k: _json_safe(v) for k, v in rec.items()
                                      if k not in ("anchor", "status", "margin")}))
    else:
        records.append(_record(
            "eigenvalue-lower-bound", "mu^2 >= n/(n-1) R0", "skipped",
            note="curvature of a file mesh is unknown; bound not evaluated"))

    report = build_report(config, records)
    csv_text = spectrum_csv(main_result)
    return (EXIT_OK if report["status"] == "pass" else EXIT_CHECK_FAILED), report, csv_text


# -- argument parsing ---------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


class _ConfigError(Exception):
    pass


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _ConfigError(f"cannot load config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise _ConfigError("config file must hold a JSON object")
    return data


def _resolve(args, key, file_config, cast=None):
    """Flag beats config file beats built-in default."""
    value = getattr(args, key.replace("-", "_"), None)
    if value is None:
        value = file_config.get(key, DEFAULTS.get(key))
    return cast(value) if cast is not None and value is not None else value


def make_parser() -> _Parser:
    parser = _Parser(prog="dirac-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"dirac-lab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="deterministic RNG seed")
    common.add_argument("--config", default=None, help="optional JSON config file")
    common.add_argument("--out", default=None, help="write the JSON report here instead of stdout")

    p_fiber = sub.add_parser("verify-fiber", parents=[common],
                             help="run the exhaustive fiber/curvature identity suites")
    p_fiber.add_argument("--max-dim", type=int, default=None,
                         help="largest fiber dimension to sweep (2..8)")
    p_fiber.add_argument("--exact", action="store_true",
                         help="exact rational arithmetic with zero tolerance")

    p_tw = sub.add_parser("twistor", parents=[common],
                          help="verify the closed-form twistor family on S^n")
    p_tw.add_argument("--n", type=int, default=2, help="sphere dimension (>= 2)")
    p_tw.add_argument("--samples", type=int, default=None, help="sample point count")
    p_tw.add_argument("--tol", type=float, default=None, help="residual tolerance")
    p_tw.add_argument("--ricci-check", choices=("auto", "force"), default="auto",
                      help="force the derivative endomorphism record even when n = 2")

    p_ms = sub.add_parser("mesh-spectrum", parents=[common],
                          help="discrete Hodge spectrum of a triangulated surface")
    p_ms.add_argument("--mesh", required=True,
                      help="'icosphere:k', 'torus:m', or a path to an OFF file")
    p_ms.add_argument("--degree", type=int, choices=(0, 1, 2), default=0)
    p_ms.add_argument("--num", type=int, default=None, help="number of eigenvalues")
    p_ms.add_argument("--tol", type=float, default=None, help="solver residual tolerance")
    p_ms.add_argument("--csv-out", default=None, help="write the spectrum CSV here")
    return parser


def _emit(report: dict, out_path: str | None) -> None:
    text = render_report(report)
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        file_config = _load_config_file(getattr(args, "config", None))
    except _ConfigError as exc:
        sys.stderr.write(f"dirac-lab: {exc}\n")
        return EXIT_DATA
    seed = _resolve(args, "seed", file_config, int)

    if args.command == "verify-fiber":
        max_dim = _resolve(args, "max_dim", file_config, int)
        if not 2 <= max_dim <= 8:
            sys.stderr.write(f"dirac-lab: --max-dim must be in 2..8, got {max_dim}\n")
            return EXIT_USAGE
        code, report = run_verify_fiber(max_dim, args.exact, seed=seed)
        _emit(report, args.out)
        return code

    if args.command == "twistor":
        if args.n < 2:
            sys.stderr.write(f"dirac-lab: --n must be >= 2, got {args.n}\n")
            return EXIT_USAGE
        samples = _resolve(args, "samples", file_config, int)
        tol = args.tol if args.tol is not None else float(
            file_config.get("analytic_tol", DEFAULTS["analytic_tol"]))
        code, report = run_twistor(args.n, samples, tol, seed, ricci_mode=args.ricci_check)
        _emit(report, args.out)
        return code

    if args.command == "mesh-spectrum":
        num = args.num if args.num is not None else int(
            file_config.get("num_eigenvalues", DEFAULTS["num_eigenvalues"]))
        tol = args.tol if args.tol is not None else float(
            file_config.get("solver_tol", DEFAULTS["solver_tol"]))
        try:
            code, report, csv_text = run_mesh_spectrum(args.mesh, args.degree, num, tol, seed)
        except ms.MeshError as exc:
            sys.stderr.write(f"dirac-lab: mesh error: {exc}\n")
            return EXIT_DATA
        except dc.SolverError as exc:
            sys.stderr.write(f"dirac-lab: solver error: {exc}\n")
            return EXIT_SOLVER_FAILED
        if args.csv_out:
            Path(args.csv_out).write_text(csv_text, encoding="utf-8")
        _emit(report, args.out)
        return code

    return EXIT_USAGE  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

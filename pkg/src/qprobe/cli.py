"""Command-line interface: effect evaluation, fidelity computation,
scenario sampling, histogramming, the controlled-NOT sweep, and a
self-verification suite.

Exit codes: 0 success, 1 validation or constraint failure, 2 usage
error, 3 I/O error. Angle flags accept pi arithmetic; use the
--flag=value form for values with a leading minus, e.g. --a1=-pi/2.
All output is deterministic given the flags; float fields are written
with 17 significant digits so they round-trip exactly.
"""

from __future__ import annotations

import argparse
import math
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import model, piexpr, qmat, sampler, tradeoff
from .model import (
    CartanParams,
    Effect,
    ModelPoint,
    ProbeParams,
    ProjectorParams,
    ValidationError,
)
from .sampler import COLUMNS, Scenario, ScenarioError

__all__ = ["main", "run", "run_verification", "CheckResult"]


def _number(text: str) -> float:
    try:
        return piexpr.evaluate(text)
    except piexpr.PiExprError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from exc
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive count, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}") from exc
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be >= 0")
    return value


def _fmt(x: float) -> str:
    return "%.17g" % x


def _thread_count() -> int:
    raw = os.environ.get("QPROBE_THREADS", "").strip()
    if not raw:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValidationError(f"QPROBE_THREADS must be an integer, got {raw!r}") from exc
    if n < 1:
        raise ValidationError(f"QPROBE_THREADS must be >= 1, got {n}")
    return n


def _add_point_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("measurement parameters (radians; pi arithmetic accepted)")
    group.add_argument("--mu", type=_number, default=0.5, help="probe purity in [1/2, 1] (default 0.5)")
    group.add_argument("--theta", type=_number, default=0.0, help="probe polar angle in [0, pi]")
    group.add_argument("--phi", type=_number, default=0.0, help="probe azimuth in [0, 2*pi)")
    group.add_argument("--a1", type=_number, default=0.0, help="coupling angle, -pi <= a1 <= 0")
    group.add_argument("--a2", type=_number, default=0.0, help="coupling angle, 0 <= a2 <= -a1")
    group.add_argument("--a3", type=_number, default=0.0, help="coupling angle, a1+a2 <= 2*a3 <= 0")
    group.add_argument("--alpha", type=_number, default=0.0, help="readout polar angle in [0, pi]")
    group.add_argument("--beta", type=_number, default=0.0, help="readout phase in [0, 2*pi)")


def _point_from_args(args: argparse.Namespace) -> ModelPoint:
    return ModelPoint(
        probe=ProbeParams(args.mu, args.theta, args.phi),
        projector=ProjectorParams(args.alpha, args.beta),
        cartan=CartanParams(args.a1, args.a2, args.a3),
    )


def cmd_effect(args: argparse.Namespace) -> int:
    effect = model.effect_closed_form(_point_from_args(args))
    report = model.validate_effect(effect)
    print(f"a0 = {_fmt(effect.a0)}")
    print(f"ax = {_fmt(effect.a[0])}")
    print(f"ay = {_fmt(effect.a[1])}")
    print(f"az = {_fmt(effect.a[2])}")
    print(f"abs_a = {_fmt(effect.abs_a)}")
    print(f"projector = {'yes' if report.projector else 'no'}")
    print(f"valid = {'yes' if report.valid else 'no'}")
    if not report.valid:
        print("violated: " + ", ".join(report.violations), file=sys.stderr)
        return 1
    return 0


def cmd_tradeoff(args: argparse.Namespace) -> int:
    effect = model.effect_closed_form(_point_from_args(args))
    point = tradeoff.tradeoff_point(effect)
    print(f"F = {_fmt(point.F)}")
    print(f"G = {_fmt(point.G)}")
    print(f"T = {_fmt(point.T)}")
    print(f"saturated = {'yes' if point.saturated else 'no'}")
    return 0


def _resolve_scenario(ref: str) -> Scenario:
    try:
        return sampler.scenario_by_name(ref)
    except ScenarioError:
        if os.path.exists(ref):
            return sampler.load_scenario(ref)
        raise


def _write_records_csv(batch: sampler.RecordBatch, fh) -> None:
    fh.write(",".join(COLUMNS) + "\n")
    head = [batch.scenario, str(batch.seed)]
    index = batch.column("index")
    floats = [batch.column(name) for name in COLUMNS[3:]]
    for i in range(len(batch)):
        row = head + [str(int(index[i]))] + [_fmt(col[i]) for col in floats]
        fh.write(",".join(row) + "\n")


def _write_records_json(batch: sampler.RecordBatch, fh) -> None:
    rows = []
    index = batch.column("index")
    floats = {name: batch.column(name) for name in COLUMNS[3:]}
    for i in range(len(batch)):
        row: dict = {"scenario": batch.scenario, "seed": batch.seed, "index": int(index[i])}
        for name in COLUMNS[3:]:
            row[name] = float(floats[name][i])
        rows.append(row)
    json.dump(rows, fh, separators=(",", ":"))
    fh.write("\n")


def cmd_sample(args: argparse.Namespace) -> int:
    scenario = _resolve_scenario(args.scenario)
    batch = sampler.draw_batch(scenario, args.seed, args.count, threads=_thread_count())
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        if args.format == "csv":
            _write_records_csv(batch, fh)
        else:
            _write_records_json(batch, fh)
    return 0


def _read_gf_columns(path: str) -> tuple[np.ndarray, np.ndarray]:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header.split(",") != list(COLUMNS):
            raise ValidationError(f"{path}: header does not match the record schema")
        g_idx = COLUMNS.index("G")
        f_idx = COLUMNS.index("F")
        g: list[float] = []
        f: list[float] = []
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != len(COLUMNS):
                raise ValidationError(f"{path}:{lineno}: expected {len(COLUMNS)} fields")
            try:
                g.append(float(parts[g_idx]))
                f.append(float(parts[f_idx]))
            except ValueError as exc:
                raise ValidationError(f"{path}:{lineno}: non-numeric fidelity field") from exc
    if not g:
        raise ValidationError(f"{path}: no records")
    return np.array(g), np.array(f)


def cmd_hist(args: argparse.Namespace) -> int:
    g, f = _read_gf_columns(args.infile)
    hist = sampler.histogram_values(g, f, args.g_bins, args.f_bins)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("g_lo,g_hi,f_lo,f_hi,count\n")
        for gi in range(args.g_bins):
            for fi in range(args.f_bins):
                fh.write(
                    ",".join(
                        [
                            _fmt(hist.g_edges[gi]),
                            _fmt(hist.g_edges[gi + 1]),
                            _fmt(hist.f_edges[fi]),
                            _fmt(hist.f_edges[fi + 1]),
                            str(int(hist.counts[gi, fi])),
                        ]
                    )
                    + "\n"
                )
    return 0


def cmd_cnot_sweep(args: argparse.Namespace) -> int:
    rows = sampler.cnot_sweep(args.steps, args.mu, args.alpha, args.beta, args.phi)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("theta,F,G,T\n")
        for theta, f, g, t in rows:
            fh.write(",".join([_fmt(theta), _fmt(f), _fmt(g), _fmt(t)]) + "\n")
    return 0


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _param_columns(batch: sampler.RecordBatch) -> tuple[np.ndarray, ...]:
    return tuple(
        batch.column(name)
        for name in ("mu", "theta", "phi", "a1", "a2", "a3", "alpha", "beta")
    )


def run_verification(n: int, seed: int, threads: int = 1) -> list[CheckResult]:
    """Cross-checks mirroring the runtime-verifiable acceptance points."""
    results: list[CheckResult] = []

    def check(name: str, passed: bool, detail: str) -> None:
        results.append(CheckResult(name=name, passed=bool(passed), detail=detail))

    full = sampler.scenario_by_name("full")
    batch = sampler.draw_batch(full, seed, n, threads=threads)
    params = _param_columns(batch)

    closed = model.closed_form_coefficients(*params)
    traced = model.partial_trace_coefficients(*params)
    dual_dev = max(float(np.max(np.abs(c - t))) for c, t in zip(closed, traced))
    check("dual-path coefficients", dual_dev <= 1e-12, f"max deviation {dual_dev:.3e} (tol 1e-12)")

    a0, ax, ay, az = (np.asarray(c) for c in closed)
    abs_a = np.sqrt(ax * ax + ay * ay + az * az)
    worst_margin = float(
        np.min(np.stack([0.5 - abs_a, a0 - abs_a, 1.0 - a0 - abs_a]))
    )
    check(
        "effect positivity (both outcomes)",
        worst_margin >= -1e-10,
        f"worst constraint margin {worst_margin:.3e} (tol -1e-10)",
    )

    f_vals = tradeoff.disturbance_from_coeffs(a0, abs_a)
    g_vals = tradeoff.information_from_coeffs(abs_a)
    t_vals = tradeoff.tradeoff_from_fidelities(g_vals, f_vals)
    t_excess = float(np.max(t_vals)) - tradeoff.TRADEOFF_BOUND
    check("tradeoff bound", t_excess <= 1e-10, f"max T - 1/9 = {t_excess:.3e} (tol 1e-10)")

    half = sampler.draw_batch(sampler.scenario_by_name("mu-half"), seed + 1, n, threads=threads)
    half_dev = float(np.max(np.abs(half.column("T") - tradeoff.TRADEOFF_BOUND)))
    check("mixed-probe saturation", half_dev <= 1e-10, f"max |T - 1/9| = {half_dev:.3e} (tol 1e-10)")

    v0_dev = float(np.max(np.abs(qmat.cartan_exp(0.0, 0.0, 0.0) - np.eye(4))))
    vx = qmat.cartan_exp(-math.pi, 0.0, 0.0)
    vx_dev = float(np.max(np.abs(vx - 1j * qmat.kron(qmat.SIGMA_X, qmat.SIGMA_X))))
    swap = np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=float
    )
    vs = qmat.cartan_exp(-0.5 * math.pi, -0.5 * math.pi, -0.5 * math.pi)
    vs_dev = float(np.max(np.abs(np.abs(vs) - swap)))
    readout = ProjectorParams(0.7, 1.9)
    swap_effect = model.effect_matrix_path(
        ModelPoint(
            probe=ProbeParams(0.8, 1.1, 2.2),
            projector=readout,
            cartan=CartanParams(-math.pi, 0.0, -0.5 * math.pi),
        )
    )
    proj_dev = float(np.max(np.abs(swap_effect.matrix() - model.projector_matrix(readout))))
    special_dev = max(vx_dev, vs_dev, proj_dev)
    check(
        "special couplings",
        v0_dev == 0.0 and special_dev <= 1e-12,
        f"identity deviation {v0_dev:.3e} (exact), others {special_dev:.3e} (tol 1e-12)",
    )

    sharp = Effect(0.5, np.array([0.0, 0.0, 0.5]))
    idle = Effect(1.0, np.zeros(3))
    fixed_dev = max(
        abs(tradeoff.disturbance_fidelity(sharp) - 2.0 / 3.0),
        abs(tradeoff.information_fidelity(sharp)[0] - 2.0 / 3.0),
        abs(tradeoff.disturbance_fidelity(idle) - 1.0),
        abs(tradeoff.information_fidelity(idle)[0] - 0.5),
    )
    check("fixed-point fidelities", fixed_dev <= 1e-12, f"max deviation {fixed_dev:.3e} (tol 1e-12)")

    probe_effects = [
        Effect(float(a0[i]), np.array([ax[i], ay[i], az[i]]))
        for i in range(0, min(len(batch), 8))
    ]
    sphere_dev = max(
        abs(tradeoff.sphere_average_disturbance(e) - tradeoff.disturbance_fidelity(e))
        for e in probe_effects
    )
    check(
        "sphere-average identity",
        sphere_dev <= 1e-12,
        f"max |average - closed form| = {sphere_dev:.3e} (tol 1e-12)",
    )

    n_mc = max(4096, n)
    mc_worst = 0.0
    for i, effect in enumerate(probe_effects[:4]):
        est_f = tradeoff.mc_disturbance_fidelity(effect, n_mc, seed + 100 + i, threads=threads)
        est_g = tradeoff.mc_information_fidelity(effect, n_mc, seed + 200 + i, threads=threads)
        ref_f = tradeoff.disturbance_fidelity(effect)
        ref_g, _ = tradeoff.information_fidelity(effect)
        for est, ref in ((est_f, ref_f), (est_g, ref_g)):
            if est.std_error > 0.0:
                mc_worst = max(mc_worst, abs(est.mean - ref) / est.std_error)
    check(
        "monte-carlo fidelities",
        mc_worst <= 5.0,
        f"worst |MC - closed form| = {mc_worst:.2f} std errors (tol 5)",
    )

    envelope_worst = -math.inf
    a0_excess = -math.inf
    for name in ("mu-051", "mu-07", "mu-075"):
        scenario = sampler.scenario_by_name(name)
        sub = sampler.draw_batch(scenario, seed + 2, n, threads=threads)
        bound = 0.5 * math.sqrt(2.0 * scenario.mu[1] - 1.0)
        a0_excess = max(
            a0_excess, float(np.max(np.abs(sub.column("a0") - 0.5))) - bound
        )
        mu_col = sub.column("mu")
        live = mu_col > 0.5
        if np.any(live):
            f_env = (4.0 * sub.column("a0")[live] - 2.0) / np.sqrt(2.0 * mu_col[live] - 1.0)
            envelope_worst = max(envelope_worst, float(np.max(np.abs(f_env))) - 2.0)
    check(
        "a0 envelope",
        a0_excess <= 1e-12 and envelope_worst <= 1e-9,
        f"max |a0-1/2| excess {a0_excess:.3e} (tol 1e-12), "
        f"max |envelope| - 2 = {envelope_worst:.3e} (tol 1e-9)",
    )

    rows = sampler.cnot_sweep(100, 1.0)
    sweep_dev = max(abs(t - tradeoff.TRADEOFF_BOUND) for _, _, _, t in rows)
    _, f_first, g_first, _ = rows[0]
    _, f_last, g_last, _ = rows[-1]
    end_dev = max(
        abs(g_first - 2.0 / 3.0),
        abs(f_first - 2.0 / 3.0),
        abs(g_last - 0.5),
        abs(f_last - 1.0),
    )
    check(
        "controlled-NOT sweep",
        sweep_dev <= 1e-10 and end_dev <= 1e-10,
        f"max |T - 1/9| = {sweep_dev:.3e}, endpoint deviation {end_dev:.3e} (tol 1e-10)",
    )

    return results


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_verification(args.count, args.seed, threads=_thread_count())
    failed = [r for r in results if not r.passed]
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
    if failed:
        print(f"{len(failed)} of {len(results)} checks failed", file=sys.stderr)
        return 1
    print(f"all {len(results)} checks passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qprobe",
        description="Indirect qubit measurement: effects, fidelities, parameter sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("effect", help="evaluate the induced effect coefficients")
    _add_point_args(p)
    p.set_defaults(func=cmd_effect)

    p = sub.add_parser("tradeoff", help="evaluate the fidelities F, G and the tradeoff T")
    _add_point_args(p)
    p.set_defaults(func=cmd_tradeoff)

    p = sub.add_parser("sample", help="draw scenario records to CSV or JSON")
    p.add_argument("--scenario", required=True, help="builtin scenario name or scenario file path")
    p.add_argument("-n", "--count", type=_positive_int, default=10000, help="records to draw")
    p.add_argument("--seed", type=_seed, default=42)
    p.add_argument("--out", required=True, help="output file path")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("hist", help="bin a record CSV into a (G, F) histogram CSV")
    p.add_argument("--in", dest="infile", required=True, help="record CSV from the sample command")
    p.add_argument("--g-bins", type=_positive_int, default=25)
    p.add_argument("--f-bins", type=_positive_int, default=25)
    p.add_argument("--out", required=True, help="output file path")
    p.set_defaults(func=cmd_hist)

    p = sub.add_parser("cnot-sweep", help="sweep the controlled-NOT-class coupling over theta")
    p.add_argument("--steps", type=_positive_int, default=100, help="grid points on [0, pi/2]")
    p.add_argument("--mu", type=_number, default=1.0, help="probe purity (default 1)")
    p.add_argument("--alpha", type=_number, default=0.5 * math.pi, help="readout polar angle")
    p.add_argument("--beta", type=_number, default=0.5 * math.pi, help="readout phase")
    p.add_argument("--phi", type=_number, default=0.0, help="probe azimuth")
    p.add_argument("--out", required=True, help="output file path")
    p.set_defaults(func=cmd_cnot_sweep)

    p = sub.add_parser("verify", help="run the self-verification cross-checks")
    p.add_argument("-n", "--count", type=_positive_int, default=20000, help="random draws per check")
    p.add_argument("--seed", type=_seed, default=7)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, ScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except piexpr.PiExprError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def run() -> None:
    raise SystemExit(main())

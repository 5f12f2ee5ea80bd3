"""Scenario-driven sampling of the 8-parameter measurement space.

A scenario is a set of intervals for the probe, readout, and coupling
parameters. The two dependent coupling bounds from the chamber
constraints are supported by name: the a2 upper bound may be -a1
(optionally scaled), and the a3 lower bound may be (a1 + a2)/2. Drawing
is sequential-uniform: a1 first, then a2 in its (possibly a1-dependent)
interval, then a3; the remaining five parameters are independent
uniforms. The induced joint density is uniform per conditional
interval, not uniform over the chamber polytope by volume.

Records are evaluated in fixed-size index chunks, each with its own
counter-derived RNG substream, and concatenated in chunk order, so
output is byte-identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from . import model, piexpr, tradeoff

__all__ = [
    "ScenarioError",
    "Scenario",
    "SampleRecord",
    "RecordBatch",
    "Histogram2D",
    "COLUMNS",
    "G_RANGE",
    "F_RANGE",
    "builtin_scenarios",
    "scenario_by_name",
    "load_scenario",
    "draw",
    "draw_batch",
    "histogram",
    "histogram_values",
    "cnot_sweep",
    "CNOT_CARTAN",
]

# fixed CSV/record field order
COLUMNS = (
    "scenario",
    "seed",
    "index",
    "mu",
    "theta",
    "phi",
    "a1",
    "a2",
    "a3",
    "alpha",
    "beta",
    "a0",
    "ax",
    "ay",
    "az",
    "abs_a",
    "F",
    "G",
    "T",
)

_NUMERIC = COLUMNS[2:]

# scenario-independent histogram domain (analytic fidelity bounds)
G_RANGE = (0.5, 5.0 / 6.0)
F_RANGE = (2.0 / 3.0, 1.0)

# records per RNG substream
_CHUNK = 4096

# canonical coupling of the controlled-NOT class
CNOT_CARTAN = model.CartanParams(-0.5 * math.pi, 0.5 * math.pi, 0.0)


class ScenarioError(ValueError):
    """Malformed scenario definition or an empty dependent interval."""


@dataclass(frozen=True)
class Scenario:
    """Sampling ranges; a2_hi None means 'up to -a1 * a2_scale',
    a3_lo None means 'down to (a1 + a2)/2'."""

    name: str
    mu: tuple[float, float] = (0.5, 1.0)
    theta: tuple[float, float] = (0.0, math.pi)
    phi: tuple[float, float] = (0.0, 2.0 * math.pi)
    alpha: tuple[float, float] = (0.0, math.pi)
    beta: tuple[float, float] = (0.0, 2.0 * math.pi)
    a1: tuple[float, float] = (-math.pi, 0.0)
    a2_lo: float = 0.0
    a2_hi: float | None = None
    a2_scale: float = 1.0
    a3_lo: float | None = None
    a3_hi: float = 0.0

    def validate(self) -> None:
        boxes = {
            "mu": (self.mu, 0.5, 1.0),
            "theta": (self.theta, 0.0, math.pi),
            "phi": (self.phi, 0.0, 2.0 * math.pi),
            "alpha": (self.alpha, 0.0, math.pi),
            "beta": (self.beta, 0.0, 2.0 * math.pi),
            "a1": (self.a1, -math.pi, 0.0),
        }
        for key, ((lo, hi), dlo, dhi) in boxes.items():
            if not (dlo <= lo <= hi <= dhi):
                raise ScenarioError(
                    f"scenario {self.name!r}: {key} interval [{lo:.17g}, {hi:.17g}] "
                    f"outside [{dlo:.17g}, {dhi:.17g}] or reversed"
                )
        if self.a2_lo < 0.0:
            raise ScenarioError(f"scenario {self.name!r}: a2 lower bound must be >= 0")
        if self.a2_hi is None and not 0.0 < self.a2_scale <= 1.0:
            raise ScenarioError(f"scenario {self.name!r}: a2 scale must be in (0, 1]")
        if self.a3_hi > 0.0:
            raise ScenarioError(f"scenario {self.name!r}: a3 upper bound must be <= 0")
        if self.a3_lo is not None and self.a3_lo > self.a3_hi:
            raise ScenarioError(f"scenario {self.name!r}: a3 interval reversed")


@dataclass(frozen=True)
class SampleRecord:
    scenario: str
    seed: int
    index: int
    mu: float
    theta: float
    phi: float
    a1: float
    a2: float
    a3: float
    alpha: float
    beta: float
    a0: float
    ax: float
    ay: float
    az: float
    abs_a: float
    F: float
    G: float
    T: float


@dataclass(frozen=True, eq=False)
class RecordBatch:
    """Column-oriented result of a draw (fast path for file output)."""

    scenario: str
    seed: int
    columns: dict[str, np.ndarray]

    def __len__(self) -> int:
        return len(self.columns["index"])

    def column(self, name: str) -> np.ndarray:
        return self.columns[name]

    def records(self) -> Iterator[SampleRecord]:
        cols = [self.columns[name] for name in _NUMERIC]
        for i in range(len(self)):
            values = [c[i] for c in cols]
            yield SampleRecord(
                self.scenario,
                self.seed,
                int(values[0]),
                *map(float, values[1:]),
            )


@dataclass(frozen=True, eq=False)
class Histogram2D:
    g_edges: np.ndarray
    f_edges: np.ndarray
    counts: np.ndarray
    total: int


def builtin_scenarios() -> tuple[Scenario, ...]:
    pi = math.pi
    return (
        Scenario(name="full"),
        Scenario(name="mu-07", mu=(0.5, 0.7)),
        Scenario(name="mu-051", mu=(0.5, 0.51)),
        Scenario(name="mu-half", mu=(0.5, 0.5)),
        Scenario(name="mu-075", mu=(0.5, 0.75)),
        Scenario(name="a1-third", a1=(-pi / 3.0, 0.0)),
        Scenario(name="a1-tenth", a1=(-pi / 10.0, 0.0)),
        Scenario(name="a2-34", a1=(-pi, -0.75 * pi), a2_lo=0.75 * pi),
        Scenario(name="a2-910", a1=(-pi, -0.9 * pi), a2_lo=0.9 * pi),
        Scenario(name="a3-34", a1=(-pi, -0.75 * pi), a2_scale=1.0 / 3.0, a3_hi=-pi / 6.0),
        Scenario(name="a3-910", a1=(-pi, -0.9 * pi), a2_scale=1.0 / 9.0, a3_hi=-pi / 3.0),
    )


def scenario_by_name(name: str) -> Scenario:
    for s in builtin_scenarios():
        if s.name == name:
            return s
    known = ", ".join(s.name for s in builtin_scenarios())
    raise ScenarioError(f"unknown scenario {name!r} (builtin: {known})")


def _parse_interval(key: str, value: str, path: str) -> tuple[float, float]:
    parts = value.split()
    if len(parts) != 2:
        raise ScenarioError(f"{path}: {key} needs two values, got {value!r}")
    try:
        return piexpr.evaluate(parts[0]), piexpr.evaluate(parts[1])
    except piexpr.PiExprError as exc:
        raise ScenarioError(f"{path}: bad {key} value: {exc}") from exc


def load_scenario(path: str | Path) -> Scenario:
    """Read a scenario from a flat key/value file.

    Lines are `key = value` with `#` comments. Keys mu, theta, phi,
    alpha, beta, a1 take two pi-expressions (lo hi). a2 takes `lo hi`
    where hi may be `neg_a1` or `neg_a1*<expr>`. a3 takes `lo hi` where
    lo may be `half_sum_lower`. Missing keys keep the full ranges.
    """
    path = Path(path)
    fields: dict = {"name": path.stem}
    text = path.read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "name":
            fields["name"] = value
        elif key in ("mu", "theta", "phi", "alpha", "beta", "a1"):
            fields[key] = _parse_interval(key, value, str(path))
        elif key == "a2":
            parts = value.split()
            if len(parts) != 2:
                raise ScenarioError(f"{path}:{lineno}: a2 needs two values")
            try:
                fields["a2_lo"] = piexpr.evaluate(parts[0])
            except piexpr.PiExprError as exc:
                raise ScenarioError(f"{path}:{lineno}: bad a2 lower bound: {exc}") from exc
            hi = parts[1]
            if hi == "neg_a1":
                fields["a2_hi"] = None
            elif hi.startswith("neg_a1*"):
                fields["a2_hi"] = None
                try:
                    fields["a2_scale"] = piexpr.evaluate(hi[len("neg_a1*"):])
                except piexpr.PiExprError as exc:
                    raise ScenarioError(f"{path}:{lineno}: bad a2 scale: {exc}") from exc
            else:
                try:
                    fields["a2_hi"] = piexpr.evaluate(hi)
                except piexpr.PiExprError as exc:
                    raise ScenarioError(f"{path}:{lineno}: bad a2 upper bound: {exc}") from exc
        elif key == "a3":
            parts = value.split()
            if len(parts) != 2:
                raise ScenarioError(f"{path}:{lineno}: a3 needs two values")
            if parts[0] == "half_sum_lower":
                fields["a3_lo"] = None
            else:
                try:
                    fields["a3_lo"] = piexpr.evaluate(parts[0])
                except piexpr.PiExprError as exc:
                    raise ScenarioError(f"{path}:{lineno}: bad a3 lower bound: {exc}") from exc
            try:
                fields["a3_hi"] = piexpr.evaluate(parts[1])
            except piexpr.PiExprError as exc:
                raise ScenarioError(f"{path}:{lineno}: bad a3 upper bound: {exc}") from exc
        else:
            raise ScenarioError(f"{path}:{lineno}: unknown key {key!r}")
    scenario = Scenario(**fields)
    scenario.validate()
    return scenario


def _uniform(u: np.ndarray, lo, hi) -> np.ndarray:
    return np.clip(lo + u * (np.asarray(hi) - lo), lo, hi)


def _draw_chunk(scenario: Scenario, seed: int, chunk_index: int, count: int) -> dict[str, np.ndarray]:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, chunk_index])))
    u = rng.random((count, 8))

    a1 = _uniform(u[:, 0], *scenario.a1)
    a2_hi = -a1 * scenario.a2_scale if scenario.a2_hi is None else np.full(count, scenario.a2_hi)
    if np.any(a2_hi < scenario.a2_lo):
        raise ScenarioError(
            f"scenario {scenario.name!r}: empty a2 interval "
            f"(lower {scenario.a2_lo:.17g} above upper bound for some a1)"
        )
    a2 = _uniform(u[:, 1], scenario.a2_lo, a2_hi)
    a3_lo = 0.5 * (a1 + a2) if scenario.a3_lo is None else np.full(count, scenario.a3_lo)
    if np.any(a3_lo > scenario.a3_hi):
        raise ScenarioError(
            f"scenario {scenario.name!r}: empty a3 interval "
            f"(upper {scenario.a3_hi:.17g} below (a1+a2)/2 for some draws)"
        )
    a3 = _uniform(u[:, 2], a3_lo, scenario.a3_hi)

    mu = _uniform(u[:, 3], *scenario.mu)
    theta = _uniform(u[:, 4], *scenario.theta)
    phi = _uniform(u[:, 5], *scenario.phi)
    alpha = _uniform(u[:, 6], *scenario.alpha)
    beta = _uniform(u[:, 7], *scenario.beta)

    checks = (
        ("-pi <= a1 <= 0", (-math.pi <= a1) & (a1 <= 0.0)),
        ("0 <= a2 <= -a1", (0.0 <= a2) & (a2 <= -a1)),
        ("a1 + a2 <= 2*a3 <= 0", (a1 + a2 <= 2.0 * a3) & (a3 <= 0.0)),
    )
    for inequality, ok in checks:
        if not np.all(ok):
            raise ScenarioError(
                f"scenario {scenario.name!r}: drawn coupling angles violate {inequality}"
            )

    a0, ax, ay, az = model.closed_form_coefficients(mu, theta, phi, a1, a2, a3, alpha, beta)
    abs_a = np.sqrt(ax * ax + ay * ay + az * az)
    f = tradeoff.disturbance_from_coeffs(a0, abs_a)
    g = tradeoff.information_from_coeffs(abs_a)
    t = tradeoff.tradeoff_from_fidelities(g, f)

    start = chunk_index * _CHUNK
    return {
        "index": np.arange(start, start + count, dtype=np.int64),
        "mu": mu,
        "theta": theta,
        "phi": phi,
        "a1": a1,
        "a2": a2,
        "a3": a3,
        "alpha": alpha,
        "beta": beta,
        "a0": a0,
        "ax": ax,
        "ay": ay,
        "az": az,
        "abs_a": abs_a,
        "F": f,
        "G": g,
        "T": t,
    }


def draw_batch(scenario: Scenario, seed: int, n: int, threads: int = 1) -> RecordBatch:
    """Draw n records as columns. Deterministic for fixed (scenario,
    seed, n) regardless of `threads`."""
    if n < 1:
        raise ValueError("record count must be >= 1")
    if seed < 0:
        raise ValueError("seed must be >= 0")
    scenario.validate()
    tasks = [
        (i, min(_CHUNK, n - i * _CHUNK)) for i in range((n + _CHUNK - 1) // _CHUNK)
    ]

    def one(task):
        index, count = task
        return _draw_chunk(scenario, seed, index, count)

    if threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(one, tasks))
    else:
        parts = [one(task) for task in tasks]

    columns = {
        name: np.concatenate([p[name] for p in parts]) for name in _NUMERIC
    }
    return RecordBatch(scenario=scenario.name, seed=seed, columns=columns)


def draw(scenario: Scenario, seed: int, n: int, threads: int = 1) -> Iterator[SampleRecord]:
    """Draw n fully evaluated records, in index order."""
    yield from draw_batch(scenario, seed, n, threads).records()


def histogram(
    records: RecordBatch | Iterable[SampleRecord], g_bins: int, f_bins: int
) -> Histogram2D:
    """Bin the (G, F) pairs of a record stream or batch."""
    if isinstance(records, RecordBatch):
        g = np.asarray(records.column("G"), dtype=float)
        f = np.asarray(records.column("F"), dtype=float)
    else:
        pairs = [(r.G, r.F) for r in records]
        g = np.array([p[0] for p in pairs])
        f = np.array([p[1] for p in pairs])
    return histogram_values(g, f, g_bins, f_bins)


def histogram_values(g: np.ndarray, f: np.ndarray, g_bins: int, f_bins: int) -> Histogram2D:
    """Bin (G, F) arrays over the fixed domain. Bins are right-open with
    the last bin closed, so boundary values always land inside."""
    if g_bins < 1 or f_bins < 1:
        raise ValueError("bin counts must be >= 1")
    g = np.asarray(g, dtype=float)
    f = np.asarray(f, dtype=float)
    if len(g) == 0:
        raise ValueError("no records to bin")

    g_edges = np.linspace(G_RANGE[0], G_RANGE[1], g_bins + 1)
    f_edges = np.linspace(F_RANGE[0], F_RANGE[1], f_bins + 1)
    gi = np.clip(
        np.floor((g - G_RANGE[0]) / (G_RANGE[1] - G_RANGE[0]) * g_bins).astype(np.int64),
        0,
        g_bins - 1,
    )
    fi = np.clip(
        np.floor((f - F_RANGE[0]) / (F_RANGE[1] - F_RANGE[0]) * f_bins).astype(np.int64),
        0,
        f_bins - 1,
    )
    counts = np.bincount(gi * f_bins + fi, minlength=g_bins * f_bins).reshape(g_bins, f_bins)
    return Histogram2D(g_edges=g_edges, f_edges=f_edges, counts=counts, total=int(len(g)))


def cnot_sweep(
    steps: int,
    mu: float = 1.0,
    alpha: float = 0.5 * math.pi,
    beta: float = 0.5 * math.pi,
    phi: float = 0.0,
) -> list[tuple[float, float, float, float]]:
    """Fidelities of the controlled-NOT-class coupling as the probe
    population angle theta sweeps [0, pi/2].

    The default readout/phase parameters put theta = 0 at the sharp
    projective corner (G = F = 2/3) and theta = pi/2 at the
    no-information point (G = 1/2, F = 1); every point saturates the
    tradeoff bound. Returns (theta, F, G, T) rows.
    """
    if steps < 2:
        raise ValueError("steps must be >= 2")
    readout = model.ProjectorParams(alpha, beta)
    rows = []
    for theta in np.linspace(0.0, 0.5 * math.pi, steps):
        point = model.ModelPoint(
            probe=model.ProbeParams(mu, float(theta), phi),
            projector=readout,
            cartan=CNOT_CARTAN,
        )
        effect = model.effect_closed_form(point)
        f = tradeoff.disturbance_fidelity(effect)
        g, _ = tradeoff.information_fidelity(effect)
        t, _ = tradeoff.tradeoff_value(g, f)
        rows.append((float(theta), f, g, t))
    return rows

"""Information and disturbance fidelities of a two-outcome qubit POVM.

The disturbance fidelity F averages the overlap between the input state
and the post-measurement state over the pure-state sphere (normalized
measure); the information fidelity G averages the probability that the
optimal guess state matches the input. Both have closed forms in the
effect coefficients, and both get an independent Monte Carlo estimator
over Haar-random pure states for cross-checking.

F and G obey (F - 2/3)^2 + 4*(G - 1/2)^2 <= 1/9, with equality exactly
on the unbiased (a0 = 1/2) effects.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import qmat
from .model import Effect, ValidationError, pauli_decompose, validate_effect

__all__ = [
    "TradeoffPoint",
    "InferencePair",
    "MCEstimate",
    "TRADEOFF_BOUND",
    "SATURATION_ATOL",
    "disturbance_fidelity",
    "information_fidelity",
    "tradeoff_value",
    "tradeoff_point",
    "disturbance_from_coeffs",
    "information_from_coeffs",
    "tradeoff_from_fidelities",
    "sphere_average_disturbance",
    "mc_disturbance_fidelity",
    "mc_information_fidelity",
]

TRADEOFF_BOUND = 1.0 / 9.0
SATURATION_ATOL = 1e-10

# samples per RNG substream in the Monte Carlo estimators; fixed so the
# sample-to-stream assignment never depends on worker count
MC_CHUNK = 1 << 16


@dataclass(frozen=True)
class TradeoffPoint:
    G: float
    F: float
    T: float
    saturated: bool


@dataclass(frozen=True, eq=False)
class InferencePair:
    """Optimal guess states for the two outcomes (top eigenvectors of
    the effect and of its complement)."""

    phi0: np.ndarray
    phi1: np.ndarray


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    std_error: float
    n_samples: int


def _require_valid(e: Effect, atol: float) -> None:
    report = validate_effect(e, atol)
    if not report.valid:
        raise ValidationError(
            "invalid effect: violated " + ", ".join(report.violations)
        )


def disturbance_from_coeffs(a0, abs_a):
    """F from (a0, |a|), elementwise. Radicands are clamped at zero to
    absorb roundoff on the boundary a0 = |a|."""
    a0 = np.asarray(a0, dtype=float)
    abs_a = np.asarray(abs_a, dtype=float)
    s = np.sqrt(np.clip(a0 * a0 - abs_a * abs_a, 0.0, None))
    t = np.sqrt(np.clip((1.0 - a0) * (1.0 - a0) - abs_a * abs_a, 0.0, None))
    return (4.0 + 2.0 * s + 2.0 * t) / 6.0


def information_from_coeffs(abs_a):
    """G from |a|, elementwise."""
    return (3.0 + 2.0 * np.asarray(abs_a, dtype=float)) / 6.0


def tradeoff_from_fidelities(g, f):
    g = np.asarray(g, dtype=float)
    f = np.asarray(f, dtype=float)
    return (f - 2.0 / 3.0) ** 2 + 4.0 * (g - 0.5) ** 2


def disturbance_fidelity(e: Effect, atol: float = 1e-10) -> float:
    _require_valid(e, atol)
    return float(disturbance_from_coeffs(e.a0, e.abs_a))


def information_fidelity(e: Effect, atol: float = 1e-10) -> tuple[float, InferencePair]:
    """G plus the guess states realizing it."""
    _require_valid(e, atol)
    _, vecs0 = qmat.eig_h2(e.matrix())
    _, vecs1 = qmat.eig_h2(e.complement().matrix())
    pair = InferencePair(phi0=vecs0[:, 0].copy(), phi1=vecs1[:, 0].copy())
    return float(information_from_coeffs(e.abs_a)), pair


def tradeoff_value(g: float, f: float) -> tuple[float, bool]:
    """The tradeoff functional and whether it saturates the 1/9 bound."""
    t = float(tradeoff_from_fidelities(g, f))
    return t, abs(t - TRADEOFF_BOUND) <= SATURATION_ATOL


def tradeoff_point(e: Effect, atol: float = 1e-10) -> TradeoffPoint:
    f = disturbance_fidelity(e, atol)
    g, _ = information_fidelity(e, atol)
    t, saturated = tradeoff_value(g, f)
    return TradeoffPoint(G=g, F=f, T=t, saturated=saturated)


def sphere_average_disturbance(e: Effect, atol: float = 1e-10) -> float:
    """F by the exact sphere average: for each outcome the integrand is
    (c0 + c.n)^2 with (c0, c) the Pauli coefficients of the effect's
    square root, and the average over the unit sphere is c0^2 + |c|^2/3.
    Non-stochastic and independent of the eigenvalue closed form."""
    _require_valid(e, atol)
    total = 0.0
    for part in (e, e.complement()):
        c0, c = pauli_decompose(qmat.sqrt_psd2(part.matrix()))
        total += c0 * c0 + float(c @ c) / 3.0
    return total


def _sphere_points(seed: int, chunk_index: int, count: int) -> np.ndarray:
    """Unit vectors, uniform on the sphere: substream `chunk_index` of
    the given seed, consuming exactly 2*count uniforms."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, chunk_index])))
    u = rng.random((count, 2))
    z = 1.0 - 2.0 * u[:, 0]
    az = 2.0 * math.pi * u[:, 1]
    s = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    return np.column_stack([s * np.cos(az), s * np.sin(az), z])


def _mc_mean(
    integrand: Callable[[np.ndarray], np.ndarray], n: int, seed: int, threads: int
) -> MCEstimate:
    """Estimate the sphere average of the integrand over n points.

    Samples are partitioned into fixed-size substreams reduced in index
    order, so the result is byte-identical for any thread count.
    """
    if n < 1:
        raise ValueError("sample count must be >= 1")
    chunks = [
        (i, min(MC_CHUNK, n - i * MC_CHUNK))
        for i in range((n + MC_CHUNK - 1) // MC_CHUNK)
    ]

    def one(task):
        index, count = task
        values = integrand(_sphere_points(seed, index, count))
        center = float(np.mean(values))
        return count, center, float(np.sum((values - center) ** 2))

    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(one, chunks))
    else:
        partials = [one(task) for task in chunks]

    # pairwise mean/M2 combination: centered per chunk, so near-constant
    # integrands keep a correct (tiny) variance instead of cancelling
    count, mean, m2 = partials[0]
    for part_count, part_mean, part_m2 in partials[1:]:
        delta = part_mean - mean
        combined = count + part_count
        mean += delta * part_count / combined
        m2 += part_m2 + delta * delta * count * part_count / combined
        count = combined
    if n > 1:
        std_error = math.sqrt(m2 / (n - 1) / n)
    else:
        std_error = math.inf
    return MCEstimate(mean=mean, std_error=std_error, n_samples=n)


def mc_disturbance_fidelity(
    e: Effect, n: int, seed: int, threads: int = 1, atol: float = 1e-10
) -> MCEstimate:
    """Monte Carlo F: average of sum_k <psi|sqrt(E_k)|psi>^2 over Haar
    pure states (the outcome probability cancels; zero-probability
    outcomes contribute zero)."""
    _require_valid(e, atol)
    roots = [
        pauli_decompose(qmat.sqrt_psd2(part.matrix()))
        for part in (e, e.complement())
    ]

    def integrand(points: np.ndarray) -> np.ndarray:
        acc = np.zeros(len(points))
        for c0, c in roots:
            overlap = c0 + points @ c
            acc += overlap * overlap
        return acc

    return _mc_mean(integrand, n, seed, threads)


def mc_information_fidelity(
    e: Effect, n: int, seed: int, threads: int = 1, atol: float = 1e-10
) -> MCEstimate:
    """Monte Carlo G: average of sum_k p_k(psi) |<psi|phi_k>|^2 with the
    guess states from information_fidelity."""
    _require_valid(e, atol)
    _, pair = information_fidelity(e, atol)
    terms = []
    for part, phi in ((e, pair.phi0), (e.complement(), pair.phi1)):
        q0, q = pauli_decompose(np.outer(phi, phi.conj()))
        terms.append((part.a0, part.a, q0, q))

    def integrand(points: np.ndarray) -> np.ndarray:
        acc = np.zeros(len(points))
        for e0, evec, q0, qvec in terms:
            acc += (e0 + points @ evec) * (q0 + points @ qvec)
        return acc

    return _mc_mean(integrand, n, seed, threads)

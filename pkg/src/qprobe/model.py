"""Parametrization of an indirect qubit measurement and its induced effect.

A signal qubit is probed by coupling it to a probe qubit (purity mu,
Bloch direction theta/phi), applying the canonical two-qubit coupling
with Cartan angles (a1, a2, a3), and projecting the probe onto a pure
state (alpha, beta). The back-action on the signal is a two-outcome
POVM whose first element is written a0*I + a.sigma.

Two independent constructions of the coefficients are provided: the
partial-trace route (build the 4x4 operators and trace the probe out)
and the direct trigonometric closed form. They agree to near machine
precision and cross-validate each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qmat

__all__ = [
    "ValidationError",
    "ProbeParams",
    "ProjectorParams",
    "CartanParams",
    "ModelPoint",
    "Effect",
    "EffectValidity",
    "EFFECT_ATOL",
    "bloch_vector",
    "probe_density",
    "projector_matrix",
    "cartan_unitary",
    "effect_matrix_path",
    "effect_closed_form",
    "closed_form_coefficients",
    "partial_trace_coefficients",
    "pauli_decompose",
    "validate_effect",
    "envelope_factor",
]

# uniform tolerance for the effect positivity constraints
EFFECT_ATOL = 1e-10


class ValidationError(ValueError):
    """A parameter or effect violates its domain constraints."""


def _require(condition: bool, inequality: str, **values: float) -> None:
    if not condition:
        detail = ", ".join(f"{k}={v:.17g}" for k, v in values.items())
        raise ValidationError(f"violated {inequality} ({detail})")


@dataclass(frozen=True)
class ProbeParams:
    """Probe preparation: purity mu and Bloch direction (theta, phi)."""

    mu: float
    theta: float
    phi: float

    def __post_init__(self):
        _require(0.5 <= self.mu <= 1.0, "1/2 <= mu <= 1", mu=self.mu)
        _require(0.0 <= self.theta <= math.pi, "0 <= theta <= pi", theta=self.theta)
        _require(0.0 <= self.phi < 2.0 * math.pi, "0 <= phi < 2*pi", phi=self.phi)


@dataclass(frozen=True)
class ProjectorParams:
    """Probe readout direction: the projector is onto
    cos(alpha/2)|0> + exp(i beta) sin(alpha/2)|1>."""

    alpha: float
    beta: float

    def __post_init__(self):
        _require(0.0 <= self.alpha <= math.pi, "0 <= alpha <= pi", alpha=self.alpha)
        _require(0.0 <= self.beta < 2.0 * math.pi, "0 <= beta < 2*pi", beta=self.beta)


@dataclass(frozen=True)
class CartanParams:
    """Canonical coupling angles, restricted to the chamber
    -pi <= a1 <= 0, 0 <= a2 <= -a1, a1 + a2 <= 2*a3 <= 0,
    and a1 - a2 >= -pi whenever a3 = 0."""

    a1: float
    a2: float
    a3: float

    def __post_init__(self):
        _require(-math.pi <= self.a1 <= 0.0, "-pi <= a1 <= 0", a1=self.a1)
        _require(0.0 <= self.a2 <= -self.a1, "0 <= a2 <= -a1", a1=self.a1, a2=self.a2)
        _require(
            self.a1 + self.a2 <= 2.0 * self.a3 <= 0.0,
            "a1 + a2 <= 2*a3 <= 0",
            a1=self.a1,
            a2=self.a2,
            a3=self.a3,
        )
        if self.a3 == 0.0:
            _require(
                self.a1 - self.a2 >= -math.pi,
                "a1 - a2 >= -pi when a3 = 0",
                a1=self.a1,
                a2=self.a2,
            )


@dataclass(frozen=True)
class ModelPoint:
    """The full 8-parameter description of one measurement setup."""

    probe: ProbeParams
    projector: ProjectorParams
    cartan: CartanParams


@dataclass(frozen=True, eq=False)
class Effect:
    """One POVM element in Pauli form, a0*I + a.sigma."""

    a0: float
    a: np.ndarray

    def __post_init__(self):
        vec = np.array(self.a, dtype=float).reshape(3)
        vec.setflags(write=False)
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "a", vec)

    @property
    def abs_a(self) -> float:
        return float(np.linalg.norm(self.a))

    def matrix(self) -> np.ndarray:
        ax, ay, az = self.a
        return np.array(
            [[self.a0 + az, ax - 1j * ay], [ax + 1j * ay, self.a0 - az]],
            dtype=complex,
        )

    def complement(self) -> "Effect":
        """The second POVM element, I minus this one."""
        return Effect(1.0 - self.a0, -self.a)


@dataclass(frozen=True)
class EffectValidity:
    valid: bool
    projector: bool
    violations: tuple[str, ...]


def bloch_vector(p: ProbeParams) -> np.ndarray:
    """Probe Bloch vector; its norm is sqrt(2*mu - 1)."""
    r = math.sqrt(2.0 * p.mu - 1.0)
    st = math.sin(p.theta)
    return np.array(
        [r * st * math.cos(p.phi), r * st * math.sin(p.phi), r * math.cos(p.theta)]
    )


def probe_density(p: ProbeParams) -> np.ndarray:
    rx, ry, rz = bloch_vector(p)
    return 0.5 * np.array(
        [[1.0 + rz, rx - 1j * ry], [rx + 1j * ry, 1.0 - rz]], dtype=complex
    )


def projector_matrix(q: ProjectorParams) -> np.ndarray:
    c = math.cos(0.5 * q.alpha)
    s = math.sin(0.5 * q.alpha)
    ket = np.array([c, s * np.exp(1j * q.beta)], dtype=complex)
    return np.outer(ket, ket.conj())


def cartan_unitary(c: CartanParams) -> np.ndarray:
    """The canonical coupling unitary for the chamber point c."""
    return qmat.cartan_exp(0.5 * (c.a1 - c.a2), 0.5 * (c.a1 + c.a2), c.a3)


def pauli_decompose(m: np.ndarray) -> tuple[float, np.ndarray]:
    """Coefficients (a0, a) of a Hermitian 2x2 matrix in the Pauli basis."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    if not np.allclose(m, qmat.dagger(m), rtol=0.0, atol=EFFECT_ATOL):
        raise ValueError("matrix is not Hermitian")
    a0 = 0.5 * (m[0, 0] + m[1, 1]).real
    a = np.array(
        [
            0.5 * (m[0, 1] + m[1, 0]).real,
            (0.5j * (m[0, 1] - m[1, 0])).real,
            0.5 * (m[0, 0] - m[1, 1]).real,
        ]
    )
    return a0, a


def effect_matrix_path(point: ModelPoint) -> Effect:
    """Effect via the operator route: couple, project the probe, trace it out."""
    v = cartan_unitary(point.cartan)
    joint = (
        qmat.kron(qmat.ID2, probe_density(point.probe))
        @ qmat.dagger(v)
        @ qmat.kron(qmat.ID2, projector_matrix(point.projector))
        @ v
    )
    a0, a = pauli_decompose(qmat.partial_trace_probe(joint))
    return Effect(a0, a)


def closed_form_coefficients(mu, theta, phi, a1, a2, a3, alpha, beta):
    """Effect coefficients (a0, ax, ay, az) by direct trigonometry.

    Accepts scalars or broadcastable arrays; performs no range
    validation, so callers feeding raw arrays must guarantee ranges.
    """
    mu, theta, phi, a1, a2, a3, alpha, beta = map(
        np.asarray, (mu, theta, phi, a1, a2, a3, alpha, beta)
    )
    m = np.sqrt(2.0 * mu - 1.0)
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    sa, ca = np.sin(alpha), np.cos(alpha)
    sb, cb = np.sin(beta), np.cos(beta)
    s1, c1 = np.sin(a1), np.cos(a1)
    s2, c2 = np.sin(a2), np.cos(a2)
    s3, c3 = np.sin(a3), np.cos(a3)
    # half sum / half difference of the first two coupling angles
    shp, chp = np.sin(0.5 * (a1 + a2)), np.cos(0.5 * (a1 + a2))
    shm, chm = np.sin(0.5 * (a1 - a2)), np.cos(0.5 * (a1 - a2))

    a0 = 0.25 * (
        2.0 + m * (ca * ct * (c1 + c2) + 2.0 * c3 * sa * st * (chp * cb * cp + chm * sb * sp))
    )
    ax = 0.25 * (
        2.0 * cb * sa * shp * s3
        + m * (ca * (s1 - s2) * st * sp - 2.0 * c3 * ct * sa * shm * sb)
    )
    ay = 0.25 * (
        2.0 * sa * shm * s3 * sb
        + m * (2.0 * c3 * cb * ct * sa * shp - ca * cp * (s1 + s2) * st)
    )
    az = 0.25 * (
        ca * (c2 - c1)
        + 2.0 * m * sa * s3 * st * (chm * cp * sb - chp * cb * sp)
    )
    return a0, ax, ay, az


def partial_trace_coefficients(mu, theta, phi, a1, a2, a3, alpha, beta):
    """Effect coefficients by the operator route, batched.

    Same contract as closed_form_coefficients but every value passes
    through the 4x4 construction: coupling unitary, probe projection,
    partial trace. Cross-validates the trigonometric route.
    """
    mu, theta, phi, a1, a2, a3, alpha, beta = np.broadcast_arrays(
        *map(np.asarray, (mu, theta, phi, a1, a2, a3, alpha, beta))
    )
    shape = mu.shape

    m = np.sqrt(2.0 * mu - 1.0)
    rx = m * np.sin(theta) * np.cos(phi)
    ry = m * np.sin(theta) * np.sin(phi)
    rz = m * np.cos(theta)
    rho = np.empty(shape + (2, 2), dtype=complex)
    rho[..., 0, 0] = 0.5 * (1.0 + rz)
    rho[..., 0, 1] = 0.5 * (rx - 1j * ry)
    rho[..., 1, 0] = 0.5 * (rx + 1j * ry)
    rho[..., 1, 1] = 0.5 * (1.0 - rz)

    kc = np.cos(0.5 * alpha)
    ks = np.sin(0.5 * alpha) * np.exp(1j * beta)
    proj = np.empty(shape + (2, 2), dtype=complex)
    proj[..., 0, 0] = kc * kc
    proj[..., 0, 1] = kc * np.conj(ks)
    proj[..., 1, 0] = kc * ks
    proj[..., 1, 1] = ks * np.conj(ks)

    def embed(block):
        out = np.zeros(shape + (4, 4), dtype=complex)
        out[..., :2, :2] = block
        out[..., 2:, 2:] = block
        return out

    v = qmat.cartan_exp(0.5 * (a1 - a2), 0.5 * (a1 + a2), a3)
    joint = embed(rho) @ qmat.dagger(v) @ embed(proj) @ v
    pi = qmat.partial_trace_probe(joint)

    a0 = (0.5 * (pi[..., 0, 0] + pi[..., 1, 1])).real
    ax = (0.5 * (pi[..., 0, 1] + pi[..., 1, 0])).real
    ay = (0.5j * (pi[..., 0, 1] - pi[..., 1, 0])).real
    az = (0.5 * (pi[..., 0, 0] - pi[..., 1, 1])).real
    return a0, ax, ay, az


def effect_closed_form(point: ModelPoint) -> Effect:
    """Effect via the trigonometric closed form."""
    a0, ax, ay, az = closed_form_coefficients(
        point.probe.mu,
        point.probe.theta,
        point.probe.phi,
        point.cartan.a1,
        point.cartan.a2,
        point.cartan.a3,
        point.projector.alpha,
        point.projector.beta,
    )
    return Effect(float(a0), np.array([ax, ay, az], dtype=float))


def validate_effect(e: Effect, atol: float = EFFECT_ATOL) -> EffectValidity:
    """Check the positivity constraints 0 <= |a| <= 1/2 and
    |a| <= a0 <= 1 - |a|, and flag the projector corner a0 = |a| = 1/2."""
    n = e.abs_a
    violations = []
    if n > 0.5 + atol:
        violations.append("|a| <= 1/2")
    if e.a0 < n - atol:
        violations.append("|a| <= a0")
    if e.a0 > 1.0 - n + atol:
        violations.append("a0 <= 1 - |a|")
    projector = abs(e.a0 - 0.5) <= atol and abs(n - 0.5) <= atol
    return EffectValidity(valid=not violations, projector=projector, violations=tuple(violations))


def envelope_factor(e: Effect, p: ProbeParams) -> float:
    """How far a0 sits from 1/2 in units of the probe Bloch length:
    (4*a0 - 2)/sqrt(2*mu - 1). Lands in [-2, 2] for model-generated
    effects. Undefined for a maximally mixed probe."""
    if p.mu == 0.5:
        raise ValidationError("envelope factor undefined at mu = 1/2 (division by zero)")
    return (4.0 * e.a0 - 2.0) / math.sqrt(2.0 * p.mu - 1.0)

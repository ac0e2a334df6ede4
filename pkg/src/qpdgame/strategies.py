"""Player moves: named gates, the two-angle restricted family, mixtures,
the A-to-B mirror map and the ideal counter-move."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .qmath import (
    IDENTITY,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    STRUCT_TOL,
    as_su2,
    dagger,
)

WEIGHT_TOL = 1e-9


class Role(enum.Enum):
    A = "A"
    B = "B"

    @property
    def other(self) -> "Role":
        return Role.B if self is Role.A else Role.A


class NamedStrategy(enum.Enum):
    C = "C"
    D = "D"
    Q = "Q"
    SX = "SX"
    SY = "SY"
    SZ = "SZ"

    @property
    def matrix(self) -> np.ndarray:
        return _NAMED[self].copy()


_NAMED = {
    NamedStrategy.C: IDENTITY,
    NamedStrategy.D: 1j * SIGMA_Y,
    NamedStrategy.Q: 1j * SIGMA_Z,
    NamedStrategy.SX: 1j * SIGMA_X,
    NamedStrategy.SY: 1j * SIGMA_Y,
    NamedStrategy.SZ: 1j * SIGMA_Z,
}

C = _NAMED[NamedStrategy.C]
D = _NAMED[NamedStrategy.D]
Q = _NAMED[NamedStrategy.Q]


class StrategyError(ValueError):
    """Raised for malformed strategies (bad weights, bad parameters)."""


@dataclass(frozen=True)
class Pure:
    move: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "move", as_su2(self.move))


@dataclass(frozen=True)
class Mixed:
    """Finite mixture; ``components`` is a tuple of ``(weight, move)`` pairs."""

    components: tuple

    def __post_init__(self):
        comps = tuple((float(w), as_su2(u)) for w, u in self.components)
        if not comps:
            raise StrategyError("mixture needs at least one component")
        weights = np.array([w for w, _ in comps])
        if np.any(~np.isfinite(weights)) or np.any(weights < 0):
            raise StrategyError("mixture weights must be finite and non-negative")
        if abs(weights.sum() - 1.0) > WEIGHT_TOL:
            raise StrategyError(f"mixture weights sum to {weights.sum():.12g}, not 1")
        object.__setattr__(self, "components", comps)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.components])

    @property
    def moves(self) -> np.ndarray:
        return np.stack([u for _, u in self.components])


@dataclass(frozen=True)
class HaarRandom:
    pass


Strategy = Union[Pure, Mixed, HaarRandom]


def describe(strategy: Strategy) -> dict:
    """JSON-friendly description of a strategy."""
    from .serialize import matrix_to_json

    if isinstance(strategy, Pure):
        return {"kind": "pure", "move": matrix_to_json(strategy.move)}
    if isinstance(strategy, Mixed):
        return {
            "kind": "mixed",
            "components": [
                {"weight": w, "move": matrix_to_json(u)} for w, u in strategy.components
            ],
        }
    return {"kind": "haar"}


@dataclass(frozen=True)
class EwlParams:
    theta: float
    phi: float

    def __post_init__(self):
        t, p = float(self.theta), float(self.phi)
        if not (math.isfinite(t) and math.isfinite(p)):
            raise StrategyError("angles must be finite")
        if not (-STRUCT_TOL <= t <= math.pi + STRUCT_TOL):
            raise StrategyError(f"theta={t!r} outside [0, pi]")
        if not (-STRUCT_TOL <= p <= math.pi / 2 + STRUCT_TOL):
            raise StrategyError(f"phi={p!r} outside [0, pi/2]")
        object.__setattr__(self, "theta", min(max(t, 0.0), math.pi))
        object.__setattr__(self, "phi", min(max(p, 0.0), math.pi / 2))


def ewl_unitary(theta, phi=None) -> np.ndarray:
    """The restricted two-angle move ``U(theta, phi)``.

    Accepts an :class:`EwlParams` or the two angles.  Arrays of angles are
    accepted without range checking and yield a stack of matrices.
    """
    if isinstance(theta, EwlParams):
        theta, phi = theta.theta, theta.phi
    elif np.ndim(theta) == 0 and np.ndim(phi) == 0:
        p = EwlParams(theta, phi)
        theta, phi = p.theta, p.phi
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    out = np.empty(theta.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = np.exp(1j * phi) * c
    out[..., 0, 1] = s
    out[..., 1, 0] = -s
    out[..., 1, 1] = np.exp(-1j * phi) * c
    return out


def ewl_membership(u, tol: float = STRUCT_TOL) -> Optional[EwlParams]:
    """Angles ``(theta, phi)`` with ``ewl_unitary(theta, phi) == u``, or None.

    At ``theta = pi`` the phase is unobservable and ``phi = 0`` is reported.
    """
    u = as_su2(u)
    u11, u12 = u[0, 0], u[0, 1]
    if abs(u12.imag) > tol or u12.real < -tol:
        return None
    cos_half = abs(u11)
    theta = 2.0 * math.atan2(max(u12.real, 0.0), cos_half)
    if cos_half <= tol:
        phi = 0.0
    else:
        phi = math.atan2(u11.imag, u11.real)
        if not (-tol <= phi <= math.pi / 2 + tol):
            return None
    params = EwlParams(theta, phi)
    if np.max(np.abs(ewl_unitary(params) - u)) > tol:
        return None
    return params


def mirror(x) -> np.ndarray:
    """Move for B equivalent to A playing ``x`` on the maximally entangled state.

    Solving ``(x (x) I) J|CC> = (I (x) y) J|CC>`` amplitude by amplitude gives
    ``y11 = x11`` and ``y12 = i * conj(x12)``; the map is an involution.
    """
    x = as_su2(x)
    y = np.empty_like(x)
    y[..., 0, 0] = x[..., 0, 0]
    y[..., 0, 1] = 1j * np.conj(x[..., 0, 1])
    y[..., 1, 0] = 1j * x[..., 0, 1]
    y[..., 1, 1] = x[..., 1, 1]
    return y


def counter_strategy(opponent_move, who_counters: Role = Role.B) -> np.ndarray:
    """Move that forces the countering player's temptation outcome.

    Against A's ``x``, B plays ``D mirror(x)^dagger`` and the game ends in
    ``|CD>``; against B's ``y``, A plays ``D mirror(y)^dagger`` and the game
    ends in ``|DC>``.  Valid for maximal entanglement only.
    """
    Role(who_counters)
    # same formula for both roles: J|CC> is symmetric under swapping the qubits
    return D @ dagger(mirror(opponent_move))


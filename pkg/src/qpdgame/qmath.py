"""Small complex linear algebra for 2x2 SU(2) moves and two-qubit states.

Moves are plain ``numpy`` complex arrays of shape ``(2, 2)``; every function
that takes a move also accepts a stack of shape ``(..., 2, 2)``.  States are
length-4 complex vectors in the basis ``CC, CD, DC, DD`` (first letter is
player A's qubit).
"""
from __future__ import annotations

import numpy as np

STRUCT_TOL = 1e-9
ALGEBRA_TOL = 1e-10

BASIS_LABELS = ("CC", "CD", "DC", "DD")

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class SU2Error(ValueError):
    """A matrix is not an element of SU(2) within tolerance."""


class StateError(ValueError):
    """A two-qubit state is malformed or not normalized."""


def su2_violation(u) -> np.ndarray:
    """Largest deviation from the SU(2) structure, per matrix in the stack."""
    u = np.asarray(u, dtype=complex)
    d1 = np.abs(u[..., 0, 0] - np.conj(u[..., 1, 1]))
    d2 = np.abs(u[..., 0, 1] + np.conj(u[..., 1, 0]))
    det = u[..., 0, 0] * u[..., 1, 1] - u[..., 0, 1] * u[..., 1, 0]
    d3 = np.abs(det - 1.0)
    return np.maximum(np.maximum(d1, d2), d3)


def is_su2(u, tol: float = STRUCT_TOL) -> bool:
    u = np.asarray(u, dtype=complex)
    if u.shape[-2:] != (2, 2) or not np.all(np.isfinite(u)):
        return False
    return bool(np.all(su2_violation(u) <= tol))


def as_su2(u, tol: float = STRUCT_TOL) -> np.ndarray:
    """Return ``u`` as a complex array, raising :class:`SU2Error` if invalid."""
    arr = np.asarray(u, dtype=complex)
    if arr.shape[-2:] != (2, 2):
        raise SU2Error(f"expected a 2x2 matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise SU2Error("matrix has non-finite entries")
    worst = float(np.max(su2_violation(arr)))
    if worst > tol:
        raise SU2Error(f"matrix is not in SU(2) (violation {worst:.3g} > {tol:g})")
    return arr


def su2_from_row(u11: complex, u12: complex, tol: float = STRUCT_TOL) -> np.ndarray:
    """Complete a top row ``(u11, u12)`` to the unique SU(2) matrix with it."""
    u11, u12 = complex(u11), complex(u12)
    norm2 = abs(u11) ** 2 + abs(u12) ** 2
    if not np.isfinite(norm2) or abs(norm2 - 1.0) > tol:
        raise SU2Error(
            f"top row has squared norm {norm2:.12g}; determinant 1 is unreachable"
        )
    return np.array([[u11, u12], [-np.conj(u12), np.conj(u11)]], dtype=complex)


def su2_from_quaternion(q) -> np.ndarray:
    """Map unit quaternions ``(a, b, c, d)`` (last axis) to SU(2)."""
    q = np.asarray(q, dtype=float)
    a, b, c, d = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    out = np.empty(q.shape[:-1] + (2, 2), dtype=complex)
    out[..., 0, 0] = a + 1j * b
    out[..., 0, 1] = c + 1j * d
    out[..., 1, 0] = -c + 1j * d
    out[..., 1, 1] = a - 1j * b
    return out


def su2_to_quaternion(u) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    return np.stack(
        [u[..., 0, 0].real, u[..., 0, 0].imag, u[..., 0, 1].real, u[..., 0, 1].imag],
        axis=-1,
    )


def dagger(u) -> np.ndarray:
    return np.conj(np.swapaxes(np.asarray(u, dtype=complex), -1, -2))


def mat_mul(u, v) -> np.ndarray:
    """Matrix product ``u @ v`` of two SU(2) elements (stacks broadcast)."""
    return as_su2(u) @ as_su2(v)


def equal_up_to_sign(u, v, tol: float = ALGEBRA_TOL) -> bool:
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    plus = np.max(np.abs(u - v), axis=(-2, -1))
    minus = np.max(np.abs(u + v), axis=(-2, -1))
    return bool(np.all(np.minimum(plus, minus) <= tol))


def basis_state(label: str) -> np.ndarray:
    psi = np.zeros(4, dtype=complex)
    psi[BASIS_LABELS.index(label)] = 1.0
    return psi


def as_state(s, tol: float = STRUCT_TOL) -> np.ndarray:
    arr = np.asarray(s, dtype=complex)
    if arr.shape[-1:] != (4,):
        raise StateError(f"expected 4 amplitudes, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise StateError("state has non-finite amplitudes")
    norm2 = np.sum(np.abs(arr) ** 2, axis=-1)
    if np.any(np.abs(norm2 - 1.0) > tol):
        raise StateError("state is not normalized")
    return arr


def tensor_apply(a, b, s) -> np.ndarray:
    """Apply ``a`` to player A's qubit and ``b`` to player B's qubit.

    Uses the amplitude-matrix identity ``(a (x) b) vec(M) = vec(a M b^T)``
    with ``M[i, j]`` the amplitude of ``|ij>``.
    """
    a = as_su2(a)
    b = as_su2(b)
    s = as_state(s)
    m = s.reshape(s.shape[:-1] + (2, 2))
    out = a @ m @ np.swapaxes(b, -1, -2)
    return out.reshape(out.shape[:-2] + (4,))


def state_fidelity(s, t) -> float:
    """``|<s|t>|``, clipped to ``[0, 1]``; equals 1 iff equal up to phase."""
    s = as_state(s)
    t = as_state(t)
    return float(min(1.0, abs(np.vdot(s, t))))


class SeededRng:
    """Reproducible random stream; a thin wrapper over a PCG64 generator."""

    def __init__(self, seed: int = 0):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.seed = seed
        self._gen = np.random.Generator(np.random.PCG64(seed))

    def normal(self, size) -> np.ndarray:
        return self._gen.standard_normal(size)

    def uniform(self, low=0.0, high=1.0, size=None):
        return self._gen.uniform(low, high, size)

    def spawn(self, index: int) -> "SeededRng":
        """Independent child stream for shard ``index``; depends only on seed."""
        ss = np.random.SeedSequence([self.seed, int(index)])
        return SeededRng(int(ss.generate_state(1, np.uint64)[0]))


def haar_sample(rng: SeededRng, size: int | None = None) -> np.ndarray:
    """Haar-random SU(2) element(s).

    Four i.i.d. standard normals normalized onto the unit 3-sphere give a
    uniform unit quaternion, and the quaternion map is an isometry onto
    SU(2), so the result is exactly Haar distributed.
    """
    shape = (4,) if size is None else (int(size), 4)
    q = rng.normal(shape)
    q /= np.linalg.norm(q, axis=-1, keepdims=True)
    return su2_from_quaternion(q)

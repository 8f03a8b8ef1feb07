"""Builders for spin observables, CHSH operators and witnesses, and the
three-party Svetlichny operator."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg

UNIT_TOL = 1e-12

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)

_PAULI = {"x": PAULI_X, "y": PAULI_Y, "z": PAULI_Z}

# B = sum of signs . (A0B0, A0B1, A1B0, A1B1).
SIGNS_DEFAULT = (1, 1, 1, -1)
# Alternate pattern used by one worked example: its witness is written
# 2I - A0B0 + A0B1 - A1B0 - A1B1, i.e. B = A0B0 - A0B1 + A1B0 + A1B1.
SIGNS_VARIANT = (1, -1, 1, 1)

PLANES = ("xy", "xz", "yz")


class OperatorError(ValueError):
    pass


@dataclass(frozen=True)
class UnitVector3:
    x: float
    y: float
    z: float

    def __post_init__(self):
        norm2 = self.x * self.x + self.y * self.y + self.z * self.z
        if abs(norm2 - 1.0) > UNIT_TOL:
            raise OperatorError(f"direction ({self.x}, {self.y}, {self.z}) has |v|^2 = {norm2!r}")

    @classmethod
    def from_array(cls, v) -> "UnitVector3":
        a = np.asarray(v, dtype=float)
        n = float(np.linalg.norm(a))
        if n == 0.0:
            raise OperatorError("zero vector has no direction")
        return cls(float(a[0] / n), float(a[1] / n), float(a[2] / n))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class SvetlichnySettings:
    a: UnitVector3
    a_prime: UnitVector3
    b: UnitVector3
    b_prime: UnitVector3
    c: UnitVector3
    c_prime: UnitVector3

    def vectors(self) -> tuple[np.ndarray, ...]:
        return tuple(v.as_array() for v in (self.a, self.a_prime, self.b,
                                            self.b_prime, self.c, self.c_prime))


@dataclass(frozen=True)
class ChshSettings:
    """Four 2x2 Hermitian observables.

    Dichotomic +-1 observables have spectrum exactly {-1, +1}; observables
    whose spectral radius exceeds 1 are accepted (one published example
    uses them) but flagged via within_unit_ball = False.
    """

    A0: np.ndarray
    A1: np.ndarray
    B0: np.ndarray
    B1: np.ndarray
    within_unit_ball: bool = field(init=False)

    def __post_init__(self):
        radius = 0.0
        for name in ("A0", "A1", "B0", "B1"):
            obs = np.asarray(getattr(self, name), dtype=complex)
            if obs.shape != (2, 2):
                raise OperatorError(f"{name} must be 2x2, got {obs.shape}")
            spec = linalg.hermitian_eigenvalues(obs)  # raises if not Hermitian
            radius = max(radius, abs(spec.lambda_min), abs(spec.lambda_max))
        object.__setattr__(self, "within_unit_ball", radius <= 1.0 + 1e-9)


def pauli(axis: str) -> np.ndarray:
    try:
        return _PAULI[axis].copy()
    except KeyError:
        raise OperatorError(f"axis must be one of x, y, z; got {axis!r}") from None


def spin_observable(n: UnitVector3) -> np.ndarray:
    """n . sigma; Hermitian with eigenvalues exactly {-1, +1}."""
    return n.x * PAULI_X + n.y * PAULI_Y + n.z * PAULI_Z


def chsh_operator(settings: ChshSettings, signs=SIGNS_DEFAULT) -> np.ndarray:
    """Two-party Bell operator sum(signs . Ai (x) Bj).

    The default sign pattern is (+, +, +, -); SIGNS_VARIANT gives the
    alternate (+, -, +, +) arrangement.
    """
    if len(signs) != 4:
        raise OperatorError("sign pattern needs exactly four entries")
    s00, s01, s10, s11 = signs
    return (s00 * linalg.kron(settings.A0, settings.B0)
            + s01 * linalg.kron(settings.A0, settings.B1)
            + s10 * linalg.kron(settings.A1, settings.B0)
            + s11 * linalg.kron(settings.A1, settings.B1))


def chsh_plane_operator(plane: str) -> np.ndarray:
    """Bell operator restricted to a Pauli plane.

    Built from the four-term arrangement with A0 = sigma_i, A1 = sigma_j,
    B0 = (sigma_i + sigma_j)/sqrt(2), B1 = (sigma_i - sigma_j)/sqrt(2);
    algebraically this collapses to sqrt(2)(sigma_i sigma_i + sigma_j
    sigma_j), which the test suite checks rather than hard-coding.
    """
    if plane not in PLANES:
        raise OperatorError(f"plane must be one of {PLANES}, got {plane!r}")
    si = pauli(plane[0])
    sj = pauli(plane[1])
    s2 = np.sqrt(2.0)
    settings = ChshSettings(A0=si, A1=sj, B0=(si + sj) / s2, B1=(si - sj) / s2)
    return chsh_operator(settings)


def chsh_witness(b: np.ndarray) -> np.ndarray:
    """W = 2I - B; Tr W = 8 - Tr B."""
    b = np.asarray(b, dtype=complex)
    if b.shape != (4, 4):
        raise OperatorError(f"witness wants a 4x4 Bell operator, got {b.shape}")
    return 2 * np.eye(4, dtype=complex) - b


def plane_witness(plane: str) -> np.ndarray:
    return chsh_witness(chsh_plane_operator(plane))


def svetlichny_operator(settings: SvetlichnySettings) -> np.ndarray:
    """The 8x8 three-party operator

        A (x) [B (x) (C + C') + B' (x) (C - C')]
      + A' (x) [B (x) (C - C') - B' (x) (C + C')]

    with each capital letter the spin observable along its direction.
    Hermitian and traceless for every choice of directions.
    """
    a, ap, b, bp, c, cp = (spin_observable(v) for v in
                           (settings.a, settings.a_prime, settings.b,
                            settings.b_prime, settings.c, settings.c_prime))
    plus = c + cp
    minus = c - cp
    inner_a = linalg.kron(b, plus) + linalg.kron(bp, minus)
    inner_ap = linalg.kron(b, minus) - linalg.kron(bp, plus)
    return linalg.kron(a, inner_a) + linalg.kron(ap, inner_ap)

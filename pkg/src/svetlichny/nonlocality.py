"""Two-qubit nonlocality quantities.

Two regimes, two measures. When a CHSH witness detects the reduced state
(Tr[W rho] < 0) the strength is S_NL = max{-Tr[W rho]/8, 0}. When the
state is entangled but the witness misses it, the replacement measure is

    S_NL_new = r (P_max - 3/4) + (1 - r) K,

with K = Tr[W rho rho^T]/(4 N(rho)), P_max the best CHSH-game winning
probability, and r a mixing weight kept below the cap that guarantees
positivity. The K bounds (lemma_lower/upper in spirit) sandwich K without
needing the product trace, which is what makes the undetected-regime
certificates computable from printed spectral data alone.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import linalg
from .states import DensityMatrix, negativity, partial_transpose

NEG_TOL = 1e-12
EXPECTATION_TOL = 1e-9
TSIRELSON = 2 * np.sqrt(2.0)

_PAULIS = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


class NonlocalityError(ValueError):
    pass


class ZeroNegativityError(NonlocalityError):
    """K and its bounds divide by the negativity; separable inputs have none."""


class RegimeMismatchError(NonlocalityError):
    """Raised when an operation's regime hypothesis (detected vs not) fails."""


class WindowParameterError(NonlocalityError):
    """r, K, or P_max outside the domain the formulas require."""


class RegimeMismatchWarning(UserWarning):
    pass


@dataclass(frozen=True)
class NonlocalityStrength:
    variant: str                      # "detected" | "undetected"
    s_nl: float | None = None         # detected
    s_nl_new: float | None = None     # undetected
    k: float | None = None
    p_max: float | None = None
    r: float | None = None

    @classmethod
    def detected(cls, s_nl: float) -> "NonlocalityStrength":
        return cls(variant="detected", s_nl=s_nl)

    @classmethod
    def undetected(cls, s_nl_new: float, k: float, p_max: float, r: float) -> "NonlocalityStrength":
        return cls(variant="undetected", s_nl_new=s_nl_new, k=k, p_max=p_max, r=r)


def correlation_matrix(rho: DensityMatrix) -> np.ndarray:
    """3x3 matrix of Pauli correlations t[m,n] = Tr[rho sigma_m (x) sigma_n]."""
    t = np.empty((3, 3))
    for m, sm in enumerate(_PAULIS):
        for n, sn in enumerate(_PAULIS):
            t[m, n] = linalg.trace_product(rho.matrix, linalg.kron(sm, sn))
    return t


def horodecki_m(rho: DensityMatrix) -> float:
    """Sum of the two largest eigenvalues of T^t T; CHSH violation iff > 1."""
    t = correlation_matrix(rho)
    spec = linalg.hermitian_eigenvalues(t.T @ t)
    return spec.values[-1] + spec.values[-2]


def p_max_from_expectation(chsh_expectation: float) -> float:
    """Winning probability (1 + <B>/4)/2 of the CHSH game at a given expectation."""
    if abs(chsh_expectation) > TSIRELSON + EXPECTATION_TOL:
        raise WindowParameterError(
            f"|<B>| = {abs(chsh_expectation)!r} exceeds the quantum bound 2*sqrt(2)"
        )
    return 0.5 * (1.0 + chsh_expectation / 4.0)


def p_max_optimal(rho: DensityMatrix) -> float:
    """Best winning probability over all settings: (1 + sqrt(M)/2)/2."""
    return 0.5 * (1.0 + np.sqrt(max(horodecki_m(rho), 0.0)) / 2.0)


def is_detected(rho: DensityMatrix, w: np.ndarray) -> bool:
    return linalg.trace_product(w, rho.matrix) < 0.0


def s_nl_detected(rho: DensityMatrix, w: np.ndarray) -> float:
    """max{-Tr[W rho]/8, 0}; zero whenever the witness fails to detect."""
    return max(-linalg.trace_product(w, rho.matrix) / 8.0, 0.0)


def _entangled_negativity(rho: DensityMatrix, transposed: str) -> float:
    n = negativity(rho, transposed)
    if n <= NEG_TOL:
        raise ZeroNegativityError(f"negativity {n!r} is numerically zero; K is undefined")
    return n


def k_value(rho: DensityMatrix, w: np.ndarray, transposed: str = "second") -> float:
    """K = Tr[W rho rho^T]/(4 N(rho)).

    Defined for entangled inputs. The formula itself does not care which
    regime the witness is in; calling it on a detected state is almost
    always a sign the caller mixed up the two measures, so that case is
    flagged with a warning rather than an error.
    """
    n = _entangled_negativity(rho, transposed)
    if is_detected(rho, w):
        warnings.warn(
            "k_value evaluated on a witness-detected state; the detected-regime "
            "measure is s_nl_detected",
            RegimeMismatchWarning,
            stacklevel=2,
        )
    pt = partial_transpose(rho, transposed)
    numerator = linalg.trace_product(w, rho.matrix @ pt)
    return numerator / (4.0 * n)


def _require_undetected(rho: DensityMatrix, w: np.ndarray) -> None:
    if is_detected(rho, w):
        raise RegimeMismatchError(
            "bound hypotheses require the witness not to detect the state (Tr[W rho] >= 0)"
        )


def k_lower_bound(rho: DensityMatrix, w: np.ndarray, transposed: str = "second") -> float:
    """lambda_min[(rho^T)^2] Tr[W rho] / (4 lambda_max(rho^T) N(rho))."""
    n = _entangled_negativity(rho, transposed)
    _require_undetected(rho, w)
    pt = partial_transpose(rho, transposed)
    pt_spec = linalg.hermitian_eigenvalues(pt)
    pt2_min = linalg.hermitian_eigenvalues(pt @ pt).lambda_min
    trw = linalg.trace_product(w, rho.matrix)
    return pt2_min * trw / (4.0 * pt_spec.lambda_max * n)


def k_upper_bound(rho: DensityMatrix, w: np.ndarray, transposed: str = "second") -> float:
    """[lambda_max(W rho) Tr[W rho] + Tr[(rho^T)^2]] / (8 N(rho)).

    lambda_max(W rho) is taken from the Hermitian congruence
    rho^{1/2} W rho^{1/2}, which shares the product's spectrum.
    """
    n = _entangled_negativity(rho, transposed)
    _require_undetected(rho, w)
    root = linalg.psd_sqrt(rho.matrix)
    wr_max = linalg.hermitian_eigenvalues(root @ w @ root).lambda_max
    pt = partial_transpose(rho, transposed)
    trw = linalg.trace_product(w, rho.matrix)
    return (wr_max * trw + linalg.trace_product(pt, pt)) / (8.0 * n)


def r_cap(k: float, p_max: float) -> float:
    """Upper limit K/(3/4 - P_max + K) on the mixing weight r, clamped to (0, 1].

    Positivity of S_NL_new needs r below this value when P_max <= 3/4.
    When P_max exceeds 3/4 both terms of S_NL_new are positive for every r,
    the formula lands above 1, and the clamp makes the cap vacuous.
    """
    if k <= 0.0:
        raise WindowParameterError(f"the cap needs K > 0, got {k!r}")
    denominator = 0.75 - p_max + k
    if denominator <= 0.0:
        raise WindowParameterError(
            f"nonpositive cap denominator 3/4 - P_max + K = {denominator!r}"
        )
    return min(k / denominator, 1.0)


def s_nl_new(rho: DensityMatrix, w: np.ndarray, r: float,
             transposed: str = "second") -> NonlocalityStrength:
    """Undetected-regime strength r (P_max - 3/4) + (1 - r) K.

    r must sit in [0, r_cap); the cap is exactly what keeps the result
    positive, so the constraint is enforced rather than advisory.
    """
    k = k_value(rho, w, transposed)
    p_max = p_max_optimal(rho)
    cap = r_cap(k, p_max)
    if not 0.0 <= r < cap:
        raise WindowParameterError(f"r = {r!r} outside [0, {cap!r})")
    value = r * (p_max - 0.75) + (1.0 - r) * k
    return NonlocalityStrength.undetected(s_nl_new=value, k=k, p_max=p_max, r=r)


def default_r(rho: DensityMatrix, w: np.ndarray, transposed: str = "second") -> float:
    """Midpoint of [0, r_cap), the library-wide default when r is unspecified."""
    k = k_value(rho, w, transposed)
    return 0.5 * r_cap(k, p_max_optimal(rho))

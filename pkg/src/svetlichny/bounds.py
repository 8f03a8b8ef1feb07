"""Certificates of genuine tripartite nonlocality from reduced-pair data.

Every certificate here has the same shape. Mix the three-qubit Svetlichny
operator with a witness lifted from a two-qubit reduced pair, demand that
the mixture stay within the biseparable bound, and solve for the mixing
parameter. The admissible parameter ranges (lower routes in p, upper
routes in q) depend only on spectra of the state, of the embedded reduced
pair, and on the nonlocality strength of that pair. When the range forced
by the biseparable bound excludes values that the quantum maximum still
permits, the gap is a parameter window whose nonemptiness certifies
genuine nonlocality without ever optimizing measurement settings.

Four routes: detected regime (witness expectation negative) gives the
p-route and q-route built from S_NL; undetected regime (entangled but
witness-positive) gives the corresponding routes built from the
replacement strength. The verdict search tries all of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .linalg import EigenSpectrum
from .nonlocality import (
    NonlocalityError,
    NonlocalityStrength,
    RegimeMismatchError,
    NEG_TOL,
    default_r,
    is_detected,
    s_nl_detected,
    s_nl_new,
)
from .operators import PLANES, plane_witness
from .states import (
    DensityMatrix,
    LABELS,
    negativity,
    partial_trace,
    partial_transpose,
)

WINDOW_EMPTY_TOL = 1e-9
SINGULAR_TOL = 1e-12

_SQRT2 = np.sqrt(2.0)


class BoundsError(ValueError):
    pass


class SingularDenominatorError(BoundsError):
    """A certificate formula divides by a quantity that vanished."""


@dataclass(frozen=True)
class Window:
    """Half-open parameter interval; empty when it is narrower than tolerance."""

    lower: float
    upper: float
    empty: bool = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "lower", float(self.lower))
        object.__setattr__(self, "upper", float(self.upper))
        object.__setattr__(
            self, "empty", not (self.upper - self.lower > WINDOW_EMPTY_TOL)
        )

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    def contains(self, value: float) -> bool:
        return (not self.empty) and self.lower < value < self.upper


@dataclass(frozen=True)
class BoundConfig:
    """Mixing parameters and reduction choices for one certificate evaluation.

    p weights the lower-route mixture, q the upper-route mixture; both are
    strictly positive because every bound divides by them. The witness acts
    on the ordered reduced pair, and transpose_target names which qubit of
    that pair the partial transpose acts on.
    """

    p: float
    q: float
    witness: np.ndarray
    reduced_pair: tuple[str, str] = ("B", "C")
    transpose_target: str = "second"
    r: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 < self.p <= 1.0:
            raise BoundsError(f"p must lie in (0, 1], got {self.p}")
        if not 0.0 < self.q <= 1.0:
            raise BoundsError(f"q must lie in (0, 1], got {self.q}")
        if self.r is not None and not 0.0 <= self.r < 1.0:
            raise BoundsError(f"r must lie in [0, 1), got {self.r}")
        w = np.asarray(self.witness, dtype=complex)
        if w.shape != (4, 4):
            raise BoundsError("witness must be a 4x4 matrix")
        linalg.symmetrize(w)
        _pair_positions(self.reduced_pair)
        if self.transpose_target not in ("first", "second"):
            raise BoundsError("transpose_target must be 'first' or 'second'")


@dataclass(frozen=True)
class BoundsReport:
    """Everything one certificate evaluation produced, windows included."""

    regime: str
    sv_lower: float
    sv_upper: float
    p_window: Window
    q_window: Window
    genuine_p_window: Window
    genuine_q_window: Window
    intermediates: dict[str, float]


@dataclass(frozen=True)
class Verdict:
    """Outcome of the certificate search over pairs and witnesses.

    route identifies the firing certificate (detected-p, detected-q,
    undetected-p, undetected-q); value is the midpoint of the genuine
    window, the mixing parameter that witnesses the verdict.
    """

    outcome: str
    route: str | None = None
    parameter: str | None = None
    value: float | None = None
    window: Window | None = None
    pair: tuple[str, str] | None = None
    witness_label: str | None = None


def _pair_positions(pair: tuple[str, str]) -> tuple[int, int]:
    if len(pair) != 2 or len(set(pair)) != 2:
        raise BoundsError(f"reduced pair must name two distinct qubits, got {pair}")
    try:
        return tuple(LABELS.index(label) for label in pair)
    except ValueError:
        raise BoundsError(f"pair labels must come from {LABELS}, got {pair}") from None


def embed_pair(op_pair: np.ndarray, pair: tuple[str, str] = ("B", "C")) -> np.ndarray:
    """Lift a two-qubit operator to three qubits, identity on the rest.

    The pair is ordered: its first label takes the operator's first tensor
    slot. Basis convention is |abc> at index 4a + 2b + c.
    """
    op = np.asarray(op_pair, dtype=complex)
    if op.shape != (4, 4):
        raise BoundsError("pair operator must be 4x4")
    pos = _pair_positions(pair)
    spectator = next(k for k in range(3) if k not in pos)
    out = np.zeros((8, 8), dtype=complex)
    for row in range(8):
        rbits = ((row >> 2) & 1, (row >> 1) & 1, row & 1)
        for col in range(8):
            cbits = ((col >> 2) & 1, (col >> 1) & 1, col & 1)
            if rbits[spectator] != cbits[spectator]:
                continue
            r2 = 2 * rbits[pos[0]] + rbits[pos[1]]
            c2 = 2 * cbits[pos[0]] + cbits[pos[1]]
            out[row, col] = op[r2, c2]
    return out


def product_spectrum(
    rho_abc: DensityMatrix,
    rho_ij: DensityMatrix,
    pair: tuple[str, str] = ("B", "C"),
) -> EigenSpectrum:
    """Spectrum of the state times the embedded reduced pair.

    The raw product is not Hermitian, but it is similar to the congruence
    of the embedded operator by the square root of the state, so its
    spectrum is real whenever the state is a genuine density matrix. A
    hermiticity failure of the congruence signals an invalid input.
    """
    root = linalg.psd_sqrt(rho_abc.matrix)
    embedded = embed_pair(rho_ij.matrix, pair)
    return linalg.hermitian_eigenvalues(linalg.symmetrize(root @ embedded @ root))


def _embedded_spectrum(rho_ij: DensityMatrix, pair: tuple[str, str]) -> EigenSpectrum:
    return linalg.hermitian_eigenvalues(embed_pair(rho_ij.matrix, pair))


def _state_spectrum(rho_abc: DensityMatrix) -> EigenSpectrum:
    return linalg.hermitian_eigenvalues(rho_abc.matrix)


def _lambda_k(embedded: EigenSpectrum) -> float:
    lam_k = linalg.first_nonzero_eigenvalue(embedded)
    if lam_k <= SINGULAR_TOL:
        raise SingularDenominatorError("smallest nonzero embedded eigenvalue vanished")
    return lam_k


def _strength_ratio(strength: NonlocalityStrength) -> float:
    """Collapse the replacement strength back to its r-independent core."""
    if strength.variant != "undetected":
        raise RegimeMismatchError("undetected-regime routes need the replacement strength")
    r = strength.r
    if r is None or not 0.0 <= r < 1.0:
        raise BoundsError(f"strength carries an unusable r: {r}")
    return (strength.s_nl_new - r * (strength.p_max - 0.75)) / (1.0 - r)


def _require_regime(rho_ij: DensityMatrix, witness: np.ndarray, detected: bool) -> None:
    if is_detected(rho_ij, witness) != detected:
        wanted = "detected" if detected else "undetected"
        raise RegimeMismatchError(f"route requires the {wanted} regime")


def _h_value(
    rho_abc: DensityMatrix,
    rho_ij: DensityMatrix,
    strength: NonlocalityStrength,
    pair: tuple[str, str],
    transposed: str,
) -> float:
    ratio = _strength_ratio(strength)
    pt = partial_transpose(rho_ij, transposed)
    pt_max = linalg.hermitian_eigenvalues(pt).lambda_max
    pt2_min = linalg.hermitian_eigenvalues(linalg.symmetrize(pt @ pt)).lambda_min
    if pt2_min <= SINGULAR_TOL:
        raise SingularDenominatorError("squared partial transpose is singular")
    neg = negativity(rho_ij, transposed)
    prod = product_spectrum(rho_abc, rho_ij, pair)
    rho_max = _state_spectrum(rho_abc).lambda_max
    return prod.lambda_min - (ratio / pt2_min) * (neg * pt_max * rho_max)


def _f_value(
    rho_abc: DensityMatrix,
    rho_ij: DensityMatrix,
    strength: NonlocalityStrength,
    witness: np.ndarray,
    pair: tuple[str, str],
    transposed: str,
) -> float:
    ratio = _strength_ratio(strength)
    pt = partial_transpose(rho_ij, transposed)
    tr_pt2 = linalg.trace_product(pt, pt)
    neg = negativity(rho_ij, transposed)
    root = linalg.psd_sqrt(rho_ij.matrix)
    wr_max = linalg.hermitian_eigenvalues(
        linalg.symmetrize(root @ np.asarray(witness, dtype=complex) @ root)
    ).lambda_max
    if abs(wr_max) <= SINGULAR_TOL:
        raise SingularDenominatorError("witness-state product has no spectral radius")
    prod = product_spectrum(rho_abc, rho_ij, pair)
    rho_min = _state_spectrum(rho_abc).lambda_min
    return 4.0 * prod.lambda_max - (rho_min / wr_max) * (8.0 * neg * ratio - tr_pt2)


def lower_bound_detected(
    rho_abc: DensityMatrix,
    rho_ij: DensityMatrix,
    cfg: BoundConfig,
    s_nl: float,
) -> float:
    """Lower bound on the Svetlichny expectation, detected regime."""
    _require_regime(rho_ij, cfg.witness, detected=True)
    prod = product_spectrum(rho_abc, rho_ij, cfg.reduced_pair)
    numerator = prod.lambda_min + 2.0 * s_nl * _state_spectrum(rho_abc).lambda_max
    emb_max = _embedded_spectrum(rho_ij, cfg.reduced_pair).lambda_max
    return 8.0 * (1.0 - cfg.p) * numerator / (cfg.p * emb_max)


def upper_bound_detected(
    rho_abc: DensityMatrix,
    rho_ij: DensityMatrix,
    cfg: BoundConfig,
    s_nl: float,
) -> float:
    """Upper bound on the Svetlichny expectation, detected regime."""
    _require_regime(rho_ij, cfg.witness, detected=True)
    prod = product_spectrum(rho_abc, rho_ij, cfg.reduced_pair)
    numerator = prod.lambda_max + 2.0 * s_nl * _state_spectrum(rho_abc).lambda_min
    lam_k = _lambda_k(_embedded_spectrum(rho_ij, cfg.reduced_pair))
    return 8.0 * (1.0 - cfg.q) * numerator / (cfg.q * lam_k)


def lower_bound_undetected(
    rho_abc: DensityMatrix,
    rho_ij: DensityMatrix,
    cfg: BoundConfig,
    strength: NonlocalityStrength,
) -> float:
    """Lower bound on the Svetlichny expectation, undetected regime."""
    _require_regime(rho_ij, cfg.witness, detected=False)
    h = _h_value(rho_abc, rho_ij, strength, cfg.reduced_pair, cfg.transpose_target)
    emb_max = _embedded_spectrum(rho_ij, cfg.reduced_pair).lambda_max
    return 8.0 * (1.0 - cfg.p) * h / (cfg.p * emb_max)


def upper_bound_undetected(
    rho_abc: DensityMatrix,
    rho_ij: DensityMatrix,
    cfg: BoundConfig,
    strength: NonlocalityStrength,
) -> float:
    """Upper bound on the Svetlichny expectation, undetected regime."""
    _require_regime(rho_ij, cfg.witness, detected=False)
    f = _f_value(
        rho_abc, rho_ij, strength, cfg.witness, cfg.reduced_pair, cfg.transpose_target
    )
    lam_k = _lambda_k(_embedded_spectrum(rho_ij, cfg.reduced_pair))
    return 2.0 * (1.0 - cfg.q) * f / (cfg.q * lam_k)


def p_window_detected(
    rho_abc: DensityMatrix,
    rho_ij: DensityMatrix,
    s_nl: float,
    pair: tuple[str, str] = ("B", "C"),
) -> tuple[Window, Window]:
    """Admissible and genuine p windows for the detected lower route.

    The admissible window keeps the mixture within the biseparable bound;
    its upper endpoint is 1 when the alternate denominator goes negative.
    The genuine window replaces the biseparable threshold by the quantum
    maximum, shrinking the same numerator by sqrt(2).
    """
    prod = product_spectrum(rho_abc, rho_ij, pair)
    numerator = prod.lambda_min + 2.0 * s_nl * _state_spectrum(rho_abc).lambda_max
    emb_max = _embedded_spectrum(rho_ij, pair).lambda_max
    d_plus = 2.0 * numerator + emb_max
    d_minus = 2.0 * numerator - emb_max
    l1 = 2.0 * numerator / d_plus
    u1 = 2.0 * numerator / d_minus if d_minus > 0.0 else 1.0
    cutoff = _SQRT2 * numerator / (_SQRT2 * numerator + emb_max)
    return Window(l1, u1), Window(cutoff, l1)


def q_window_detected(
    rho_abc: DensityMatrix,
    rho_ij: DensityMatrix,
    s_nl: float,
    pair: tuple[str, str] = ("B", "C"),
) -> tuple[Window, Window]:
    """Admissible and genuine q windows for the detected upper route."""
    prod = product_spectrum(rho_abc, rho_ij, pair)
    numerator = prod.lambda_max + 2.0 * s_nl * _state_spectrum(rho_abc).lambda_min
    lam_k = _lambda_k(_embedded_spectrum(rho_ij, pair))
    l2 = 2.0 * numerator / (2.0 * numerator + lam_k)
    cutoff = _SQRT2 * numerator / (_SQRT2 * numerator + lam_k)
    return Window(l2, 1.0), Window(cutoff, l2)


def p_window_undetected(
    rho_abc: DensityMatrix,
    rho_ij: DensityMatrix,
    strength: NonlocalityStrength,
    pair: tuple[str, str] = ("B", "C"),
    transposed: str = "second",
) -> tuple[Window, Window]:
    """Admissible and genuine p windows for the undetected lower route.

    Both windows are built from H, the product-spectrum floor discounted
    by the replacement strength; the genuine window is nonempty exactly
    when H is negative.
    """
    h = _h_value(rho_abc, rho_ij, strength, pair, transposed)
    emb_max = _embedded_spectrum(rho_ij, pair).lambda_max
    den_l = 2.0 * h - emb_max
    den_u = _SQRT2 * h - emb_max
    if abs(den_l) <= SINGULAR_TOL or abs(den_u) <= SINGULAR_TOL:
        raise SingularDenominatorError("window denominator vanished (2H near lambda_max)")
    l3 = 2.0 * h / den_l
    cutoff = _SQRT2 * h / den_u
    return Window(l3, 1.0), Window(cutoff, l3)


def q_window_undetected(
    rho_abc: DensityMatrix,
    rho_ij: DensityMatrix,
    strength: NonlocalityStrength,
    witness: np.ndarray,
    pair: tuple[str, str] = ("B", "C"),
    transposed: str = "second",
) -> tuple[Window, Window]:
    """Admissible and genuine q windows for the undetected upper route.

    Built from F, the product-spectrum ceiling corrected by the witness
    route; the genuine window is nonempty exactly when F is positive.
    """
    f = _f_value(rho_abc, rho_ij, strength, witness, pair, transposed)
    lam_k = _lambda_k(_embedded_spectrum(rho_ij, pair))
    den_l = f + 2.0 * lam_k
    den_u = f + 2.0 * _SQRT2 * lam_k
    if abs(den_l) <= SINGULAR_TOL or abs(den_u) <= SINGULAR_TOL:
        raise SingularDenominatorError("window denominator vanished (F near -2 lambda_k)")
    l4 = f / den_l
    cutoff = f / den_u
    return Window(l4, 1.0), Window(cutoff, l4)


def full_report(rho_abc: DensityMatrix, cfg: BoundConfig) -> BoundsReport:
    """Evaluate the applicable route pair and collect every intermediate."""
    traced = next(lbl for lbl in LABELS if lbl not in cfg.reduced_pair)
    rho_ij = partial_trace(rho_abc, traced)
    prod = product_spectrum(rho_abc, rho_ij, cfg.reduced_pair)
    state = _state_spectrum(rho_abc)
    embedded = _embedded_spectrum(rho_ij, cfg.reduced_pair)
    lam_k = _lambda_k(embedded)
    pt = partial_transpose(rho_ij, cfg.transpose_target)
    pt_max = linalg.hermitian_eigenvalues(pt).lambda_max
    neg = negativity(rho_ij, cfg.transpose_target)
    intermediates = {
        "lambda_min_product": prod.lambda_min,
        "lambda_max_product": prod.lambda_max,
        "lambda_max_embedded": embedded.lambda_max,
        "lambda_k_embedded": lam_k,
        "lambda_min_rho": state.lambda_min,
        "lambda_max_rho": state.lambda_max,
        "Z": neg * pt_max,
    }

    if is_detected(rho_ij, cfg.witness):
        s_nl = s_nl_detected(rho_ij, cfg.witness)
        num_low = prod.lambda_min + 2.0 * s_nl * state.lambda_max
        num_high = prod.lambda_max + 2.0 * s_nl * state.lambda_min
        intermediates.update(
            {
                "d1_plus": 2.0 * num_low + embedded.lambda_max,
                "d1_minus": 2.0 * num_low - embedded.lambda_max,
                "d2_plus": 2.0 * num_high + lam_k,
                "d2_minus": 2.0 * num_high - lam_k,
                "s_nl": s_nl,
            }
        )
        p_adm, p_gen = p_window_detected(rho_abc, rho_ij, s_nl, cfg.reduced_pair)
        q_adm, q_gen = q_window_detected(rho_abc, rho_ij, s_nl, cfg.reduced_pair)
        return BoundsReport(
            regime="detected",
            sv_lower=lower_bound_detected(rho_abc, rho_ij, cfg, s_nl),
            sv_upper=upper_bound_detected(rho_abc, rho_ij, cfg, s_nl),
            p_window=p_adm,
            q_window=q_adm,
            genuine_p_window=p_gen,
            genuine_q_window=q_gen,
            intermediates=intermediates,
        )

    r = cfg.r if cfg.r is not None else default_r(rho_ij, cfg.witness, cfg.transpose_target)
    strength = s_nl_new(rho_ij, cfg.witness, r, cfg.transpose_target)
    h = _h_value(rho_abc, rho_ij, strength, cfg.reduced_pair, cfg.transpose_target)
    f = _f_value(
        rho_abc, rho_ij, strength, cfg.witness, cfg.reduced_pair, cfg.transpose_target
    )
    pt2_min = linalg.hermitian_eigenvalues(linalg.symmetrize(pt @ pt)).lambda_min
    ratio = _strength_ratio(strength)
    intermediates.update(
        {
            "H": h,
            "F": f,
            "G": state.lambda_max
            * ratio
            * neg
            * pt_max
            / (cfg.p * pt2_min * embedded.lambda_max),
            "s_nl_new": strength.s_nl_new,
            "k": strength.k,
            "p_max": strength.p_max,
            "r": r,
        }
    )
    p_adm, p_gen = p_window_undetected(
        rho_abc, rho_ij, strength, cfg.reduced_pair, cfg.transpose_target
    )
    q_adm, q_gen = q_window_undetected(
        rho_abc, rho_ij, strength, cfg.witness, cfg.reduced_pair, cfg.transpose_target
    )
    return BoundsReport(
        regime="undetected",
        sv_lower=lower_bound_undetected(rho_abc, rho_ij, cfg, strength),
        sv_upper=upper_bound_undetected(rho_abc, rho_ij, cfg, strength),
        p_window=p_adm,
        q_window=q_adm,
        genuine_p_window=p_gen,
        genuine_q_window=q_gen,
        intermediates=intermediates,
    )


def detect_genuine(
    rho_abc: DensityMatrix,
    pair: tuple[str, str] | None = None,
    witness: np.ndarray | None = None,
    r: float | None = None,
) -> Verdict:
    """Search reduced pairs and witnesses for a firing certificate.

    Tries every reduced pair (or just the requested one) against the three
    plane witnesses plus any user witness, detected routes before
    undetected, in a fixed order so the answer is deterministic. The first
    nonempty genuine window wins. With no firing window the verdict is
    inconclusive when some pair was entangled, not-applicable otherwise.
    """
    pairs = [pair] if pair is not None else [("A", "B"), ("A", "C"), ("B", "C")]
    witnesses: list[tuple[str, np.ndarray]] = [
        (plane, plane_witness(plane)) for plane in PLANES
    ]
    if witness is not None:
        witnesses.append(("user", np.asarray(witness, dtype=complex)))

    any_entangled = False
    for candidate_pair in pairs:
        positions = _pair_positions(candidate_pair)
        traced = next(lbl for k, lbl in enumerate(LABELS) if k not in positions)
        rho_ij = partial_trace(rho_abc, traced)
        neg = negativity(rho_ij)
        if neg > NEG_TOL:
            any_entangled = True
        for label, w in witnesses:
            try:
                routes = _candidate_windows(rho_abc, rho_ij, candidate_pair, w, r)
            except (NonlocalityError, BoundsError, linalg.LinalgError):
                continue
            for route, parameter, genuine in routes:
                if not genuine.empty:
                    return Verdict(
                        outcome="genuine",
                        route=route,
                        parameter=parameter,
                        value=genuine.midpoint,
                        window=genuine,
                        pair=candidate_pair,
                        witness_label=label,
                    )
    if any_entangled:
        return Verdict(outcome="inconclusive")
    return Verdict(outcome="not-applicable")


def _candidate_windows(
    rho_abc: DensityMatrix,
    rho_ij: DensityMatrix,
    pair: tuple[str, str],
    witness: np.ndarray,
    r: float | None,
) -> list[tuple[str, str, Window]]:
    if is_detected(rho_ij, witness):
        s_nl = s_nl_detected(rho_ij, witness)
        _, p_gen = p_window_detected(rho_abc, rho_ij, s_nl, pair)
        _, q_gen = q_window_detected(rho_abc, rho_ij, s_nl, pair)
        return [("detected-p", "p", p_gen), ("detected-q", "q", q_gen)]
    chosen_r = r if r is not None else default_r(rho_ij, witness)
    strength = s_nl_new(rho_ij, witness, chosen_r)
    _, p_gen = p_window_undetected(rho_abc, rho_ij, strength, pair)
    _, q_gen = q_window_undetected(rho_abc, rho_ij, strength, witness, pair)
    return [("undetected-p", "p", p_gen), ("undetected-q", "q", q_gen)]

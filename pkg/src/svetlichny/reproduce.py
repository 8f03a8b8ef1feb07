"""Recompute the bundled reference tables and closed forms, report deltas.

The five worked families ship with reference data: tables of operator
parameters (p, q) with the certificate bounds they produce, and closed
forms for every spectral quantity those certificates consume. This module
rebuilds each table row through the certificate formulas and attaches a
match or discrepancy status, then cross-checks every closed form against
the general eigensolver route on a parameter grid.

Two routes coexist on purpose. Table rows are evaluated from the closed
forms exactly as the reference derivation used them, so a row mismatch
points at the reference arithmetic rather than at our pipeline; the
closed forms themselves are then compared against the general route, and
a deviation there becomes an erratum entry. Discrepancies are data, not
failures: nothing in this module raises on a mismatch.

Rows of the last three tables depend on an interpolation weight r that
the reference data does not list per row. reproduce_table resolves this
by scanning r over a grid below the admissible cap, preferring grid
points whose replacement strength lands inside the stated bands, and
keeping the point that minimizes the worse of the two deltas. The scan
is attached to the row so the resolution stays auditable; rows that
still miss get a second scan forcing the strength band directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg, nonlocality, operators, states
from .bounds import (
    embed_pair,
    p_window_detected,
    p_window_undetected,
    product_spectrum,
    q_window_detected,
    q_window_undetected,
)

TABLE_TOLERANCE = {1: 5e-3, 2: 5e-3, 3: 1e-2, 4: 1e-2, 5: 1e-2}
CLOSED_FORM_TOL = 1e-9
SCAN_POINTS = 200
GRID_POINTS = 50

STATUS_MATCH = "match"
STATUS_DISCREPANCY = "discrepancy"

CSV_COLUMNS = ("param", "p", "q", "computed_lower", "computed_upper",
               "paper_lower", "paper_upper", "delta_lower", "delta_upper",
               "status")

_SQRT2 = np.sqrt(2.0)
_SQRT5 = np.sqrt(5.0)

# Reference rows: (family parameter, p, q, lower bound, upper bound).
TABLES = {
    1: ((0.92, 0.0065, 0.95, 4.8875, 5.2471),
        (0.93, 0.035, 0.9695, 4.3762, 4.6088),
        (0.94, 0.596, 0.9822, 4.4457, 4.7243),
        (0.95, 0.0873, 0.9951, 4.1946, 4.7047)),
    2: ((0.55, 0.012, 0.65, 4.4833, 5.3846),
        (0.65, 0.014, 0.75, 4.5324, 4.6864),
        (0.70, 0.016, 0.78, 4.2622, 4.7385),
        (0.78, 0.0175, 0.83, 4.3356, 4.6863)),
    3: ((1.2, 0.65, 0.85, -4.7555, 4.7917),
        (1.3, 0.78, 0.76, -5.1357, 5.2385),
        (1.4, 0.91, 0.68, -5.1099, 5.6212),
        (1.5, 0.985, 0.67, -5.3324, 4.5781)),
    4: ((0.5, 0.86, 0.75, -5.5122, 4.667),
        (0.6, 0.93, 0.79, -5.6407, 4.3746),
        (0.7, 0.975, 0.82, -4.8916, 4.6028),
        (0.8, 0.992, 0.87, -4.9253, 4.5663)),
    5: ((0.82, 0.993, 0.89, -5.10054, 5.5735),
        (0.87, 0.9969, 0.92, -4.857, 5.3888),
        (0.92, 0.9989, 0.95, -5.0963, 5.2761),
        (0.97, 0.99985, 0.98, -5.5196, 5.4439)),
}

# Stated band for the replacement strength per scanned table, and for the
# weight r where one is stated alongside it.
STRENGTH_BANDS = {3: (0.05, 1.5), 4: (0.05, 8.0727), 5: (0.54124, 0.5484)}
WEIGHT_BANDS = {5: (0.61, 0.69)}

# Closed-form comparison grids. Family 1 starts where the witness first
# detects the reduced pair, family 3 stays inside the positive cone of
# its designated reduced matrix, and families 3 and 5 stop short of the
# endpoint where the strength or the first nonzero eigenvalue degenerates.
CLOSED_FORM_RANGES = {
    1: (0.918, 0.9539),
    2: (0.5, 0.8),
    3: (1.05, np.pi / 2 - 0.01),
    4: (0.4, 0.9),
    5: (0.817, 0.99),
}


@dataclass(frozen=True)
class ScanResult:
    """Record of one per-row parameter scan.

    name is the scanned quantity ("r" or "s_nl_new"), best the grid point
    the row was evaluated at, achieved_delta the minimum over the whole
    grid of max(delta_lower, delta_upper).
    """

    name: str
    grid: tuple[float, ...]
    best: float
    achieved_delta: float


@dataclass(frozen=True)
class TableRow:
    """One reference row recomputed.

    paper_lower and paper_upper carry the bundled reference bounds; the
    sv values are ours, deltas are absolute differences, and status is
    "match" exactly when both deltas stay within the table tolerance (at
    an in-band scan point, for the scanned tables).
    """

    parameter: float
    p: float
    q: float
    sv_lower: float
    sv_upper: float
    paper_lower: float
    paper_upper: float
    delta_lower: float
    delta_upper: float
    status: str
    scan: ScanResult | None = None
    strength_scan: ScanResult | None = None


@dataclass(frozen=True)
class ClosedFormCheck:
    """Largest deviation of one listed closed form from the general route."""

    family: int
    quantity: str
    max_deviation: float

    @property
    def status(self) -> str:
        if self.max_deviation <= CLOSED_FORM_TOL:
            return STATUS_MATCH
        return STATUS_DISCREPANCY


def _family_witness(family: int) -> np.ndarray:
    """Witness operator each family's analysis runs with."""
    if family == 1:
        return operators.plane_witness("xz")
    if family == 2:
        settings = operators.ChshSettings(
            A0=operators.PAULI_X,
            A1=operators.PAULI_Y,
            B0=0.95 * operators.PAULI_X + 0.95 * operators.PAULI_Y
                + 0.447 * operators.PAULI_Z,
            B1=-0.95 * operators.PAULI_X + 0.95 * operators.PAULI_Y
                + 0.447 * operators.PAULI_Z,
        )
        b = operators.chsh_operator(settings, operators.SIGNS_VARIANT)
        return operators.chsh_witness(b)
    return operators.plane_witness("xy")


# ---------------------------------------------------------------------------
# Listed closed forms, frozen verbatim. Decimal constants that are plain
# roundings of exact surds (0.848528 for 0.6 sqrt(2), 0.5333 for 8/15,
# 0.00333 for 1/300) are carried as the surds, otherwise a 1e-9 comparison
# would only measure typesetting. Constants with no exact antecedent are
# kept as listed.

def _printed_family1(lam: float) -> dict:
    snl = (0.6 * _SQRT2 * lam + 2.0 * _SQRT2 * lam ** 2
           - 2.0 - 0.82 * _SQRT2) / 8.0
    return {
        "regime": "detected",
        "snl": snl,
        "lmax_emb": 0.09 + lam ** 2,
        "lk": 0.91 - lam ** 2,
        "lmin_prod": 0.0,
        "lmax_prod": 0.09 * lam ** 2 + lam ** 4,
        "lmax_rho": 1.0,
        "lmin_rho": 0.0,
    }


def _printed_family2(t: float) -> dict:
    return {
        "regime": "detected",
        "snl": 1.0 / 300.0,
        "lmax_emb": 8.0 / 15.0,
        "lk": (1.1 - t) / 3.0,
        "lmin_prod": 0.0,
        "lmax_prod": t * (4.3 - t) / 9.0,
        "lmax_rho": t,
        "lmin_rho": 0.0,
    }


def _printed_family3(theta: float) -> dict:
    c = np.cos(theta)
    return {
        "regime": "undetected",
        "lmax_emb": (1.0 + 2.0 * c) / 2.0,
        "lk": (1.0 - 2.0 * c) / 2.0,
        "lmin_prod": 0.0,
        "lmax_prod": (3.0 - np.cos(2.0 * theta)) / 8.0,
        "lmax_rho": 1.0,
        "lmin_rho": 0.0,
        "trwrrt": 1.0,
        "lmin_pt2": c ** 2,
        "lmax_pt": 0.5,
        "neg": c,
        "lmax_wrho": None,
        "trpt2": None,
    }


def _printed_family4(ps: float) -> dict:
    rad = np.sqrt(256.0 - 640.0 * ps + 672.0 * ps ** 2
                  - 232.0 * ps ** 3 + 25.0 * ps ** 4)
    return {
        "regime": "undetected",
        "lmax_emb": (4.0 - ps) / 6.0,
        "lk": (1.0 - ps) / 3.0,
        "lmin_prod": 0.0,
        "lmax_prod": (16.0 - 8.0 * ps + ps ** 2 + rad) / 72.0,
        "lmax_rho": (3.0 + np.sqrt(9.0 - 30.0 * ps + 30.0 * ps ** 2)) / 6.0,
        "lmin_rho": 0.0,
        "trwrrt": (6.0 - 4.0 * _SQRT2 + 2.0 * _SQRT2 * ps
                   + (3.0 + 2.0 * _SQRT2) * ps ** 2) / 9.0,
        "lmin_pt2": (1.0 - ps) ** 2 * (3.0 - _SQRT5) / 18.0,
        "lmax_pt": (2.0 + ps) / 6.0,
        "neg": (1.0 - ps) * (_SQRT5 - 1.0) / 6.0,
        "lmax_wrho": None,
        "trpt2": None,
    }


def _printed_family5(ps: float) -> dict:
    # The listed product ceiling divides by 28, which exceeds any
    # admissible eigenvalue scale; the table route reads it as 288 (the
    # closed-form check still compares the listed 28, see below).
    rad = np.sqrt(27.0 * ps ** 2 + 42.0 * ps ** 3 - 3.0 * ps ** 4)
    return {
        "regime": "undetected",
        "lmax_emb": (3.0 + 5.0 * ps) / 12.0,
        "lk": (1.0 - ps) / 4.0,
        "lmin_prod": (ps ** 2 - 1.0) / 32.0,
        "lmax_prod": (9.0 + 30.0 * ps + 25.0 * ps ** 2 + 8.0 * rad) / 288.0,
        "lmax_rho": (1.0 + 7.0 * ps) / 8.0,
        "lmin_rho": (1.0 - ps) / 8.0,
        "trwrrt": (9.0 - 6.0 * _SQRT2 * ps
                   + (3.0 - 2.0 * _SQRT2) * ps ** 2) / 18.0,
        "lmin_pt2": (9.0 - 6.0 * ps + 21.0 * ps ** 2
                     - 4.0 * _SQRT5 * ps * (3.0 - ps)) / 144.0,
        "lmax_pt": (3.0 - ps + 2.0 * _SQRT5 * ps) / 12.0,
        "neg": (ps * (1.0 + 2.0 * _SQRT5) - 3.0) / 12.0,
        "lmax_wrho": (3.0 + ps) / 6.0,
        "trpt2": (9.0 + 11.0 * ps ** 2) / 36.0,
    }


_PRINTED = {
    1: _printed_family1,
    2: _printed_family2,
    3: _printed_family3,
    4: _printed_family4,
    5: _printed_family5,
}


def _detected_windows(qs: dict) -> tuple[tuple[float, float], tuple[float, float]]:
    """Genuine p and q windows from listed detected-regime components."""
    num1 = qs["lmin_prod"] + 2.0 * qs["snl"] * qs["lmax_rho"]
    num2 = qs["lmax_prod"] + 2.0 * qs["snl"] * qs["lmin_rho"]
    e = qs["lmax_emb"]
    k = qs["lk"]
    p_win = (_SQRT2 * num1 / (_SQRT2 * num1 + e),
             2.0 * num1 / (2.0 * num1 + e))
    q_win = (_SQRT2 * num2 / (_SQRT2 * num2 + k),
             2.0 * num2 / (2.0 * num2 + k))
    return p_win, q_win


def _printed_windows(family: int, param: float) -> tuple[tuple, tuple]:
    """Listed genuine windows, (p window, q window), each (lower, upper)."""
    if family == 1:
        return _detected_windows(_printed_family1(param))
    if family == 2:
        # The q window is listed with standalone decimal denominators; the
        # middle coefficient 0.3423 has no exact antecedent and is kept.
        p_win, _ = _detected_windows(_printed_family2(param))
        t = param
        num = t * (4.3 - t)
        q_win = (0.1571 * num / (0.3667 + 0.3423 * t - 0.1571 * t ** 2),
                 0.2222 * num / (0.3667 + 0.6222 * t - 0.2222 * t ** 2))
        return p_win, q_win
    if family == 3:
        c = np.cos(param)
        sec = 1.0 / c
        a = 3.0 - np.cos(2.0 * param)
        p_win = (_SQRT2 * sec ** 3 / (8.0 + 4.0 * sec + _SQRT2 * sec ** 3),
                 1.0 / (1.0 + 2.0 * c ** 2 + 4.0 * c ** 3))
        q_win = (a / (a + 2.0 * _SQRT2 * (1.0 - 2.0 * c)),
                 a / (5.0 - 4.0 * c - np.cos(2.0 * param)))
        return p_win, q_win
    if family == 4:
        ps = param
        rad9 = np.sqrt(9.0 - 30.0 * ps + 30.0 * ps ** 2)
        t9 = 6.0 - 4.0 * _SQRT2 + 2.0 * _SQRT2 * ps + (3.0 + 2.0 * _SQRT2) * ps ** 2
        h = ((2.0 + ps) * t9 * (3.0 + rad9)
             / (72.0 * (-3.0 + _SQRT5 * (1.0 - ps) ** 2 + 6.0 * ps - 3.0 * ps ** 2)))
        e = (4.0 - ps) / 6.0
        p_win = (_SQRT2 * h / (_SQRT2 * h - e), 2.0 * h / (2.0 * h - e))
        rad = np.sqrt(256.0 - 640.0 * ps + 672.0 * ps ** 2
                      - 232.0 * ps ** 3 + 25.0 * ps ** 4)
        num = 16.0 - 8.0 * ps + ps ** 2 + rad
        q_win = (num / (16.0 + 12.0 * _SQRT2 - 4.0 * (2.0 + 3.0 * _SQRT2) * ps
                        + ps ** 2 + rad),
                 num / (28.0 - 20.0 * ps + ps ** 2 + rad))
        return p_win, q_win
    ps = param
    qs = _printed_family5(ps)
    h = (qs["lmin_prod"]
         - (qs["trwrrt"] / 4.0) * qs["lmax_pt"] * qs["lmax_rho"] / qs["lmin_pt2"])
    e = (3.0 + ps) / 12.0
    p_win = (_SQRT2 * h / (_SQRT2 * h - e), 2.0 * h / (2.0 * h - e))
    # The listed q window uses the embedded ceiling e (not the first
    # nonzero eigenvalue) and flips a sign in its upper denominator.
    f = (4.0 * _closed_form_lmax_prod5(ps)
         - (qs["lmin_rho"] / qs["lmax_wrho"]) * (2.0 * qs["trwrrt"] - qs["trpt2"]))
    q_win = (f / (f + 2.0 * _SQRT2 * e), f / (f - 2.0 * _SQRT2 * e))
    return p_win, q_win


def _closed_form_lmax_prod5(ps: float) -> float:
    """Family 5 product ceiling exactly as listed, denominator 28."""
    rad = np.sqrt(27.0 * ps ** 2 + 42.0 * ps ** 3 - 3.0 * ps ** 4)
    return (9.0 + 30.0 * ps + 25.0 * ps ** 2 + 8.0 * rad) / 28.0


# ---------------------------------------------------------------------------
# Certificate bounds from listed components, exactly the table formulas.

def _detected_bounds(qs: dict, p: float, q: float) -> tuple[float, float]:
    lo = (8.0 * (1.0 - p) * (qs["lmin_prod"] + 2.0 * qs["lmax_rho"] * qs["snl"])
          / (p * qs["lmax_emb"]))
    hi = (8.0 * (1.0 - q) * (qs["lmax_prod"] + 2.0 * qs["lmin_rho"] * qs["snl"])
          / (q * qs["lk"]))
    return lo, hi


def _undetected_bounds(qs: dict, p: float, q: float, x: float) -> tuple[float, float]:
    h = (qs["lmin_prod"]
         - x * qs["neg"] * qs["lmax_pt"] * qs["lmax_rho"] / qs["lmin_pt2"])
    lo = 8.0 * (1.0 - p) * h / (p * qs["lmax_emb"])
    if qs["lmax_wrho"] is None or qs["lmin_rho"] == 0.0:
        f = 4.0 * qs["lmax_prod"]
    else:
        f = (4.0 * qs["lmax_prod"]
             - (qs["lmin_rho"] / qs["lmax_wrho"])
             * (8.0 * qs["neg"] * x - qs["trpt2"]))
    hi = 2.0 * (1.0 - q) * f / (q * qs["lk"])
    return lo, hi


def _scan_table_row(which: int, qs: dict, param: float, p: float, q: float,
                    ref_lo: float, ref_hi: float,
                    tol: float) -> tuple[float, float, str, ScanResult, ScanResult | None]:
    """Resolve the unlisted weight r for one row of tables 3 to 5."""
    name = states.FAMILIES[which - 1]
    reduced = states.example_reduced(name, param)
    p_max = nonlocality.p_max_optimal(reduced)
    k = qs["trwrrt"] / (4.0 * qs["neg"])
    cap = nonlocality.r_cap(k, p_max)
    band = STRENGTH_BANDS[which]
    weight_band = WEIGHT_BANDS.get(which)

    grid = np.linspace(0.0, cap, SCAN_POINTS, endpoint=False)
    results = []
    best = None
    best_in_band = None
    for i, r in enumerate(grid):
        s = r * (p_max - 0.75) + (1.0 - r) * k
        x = (s - r * (p_max - 0.75)) / (1.0 - r)
        lo, hi = _undetected_bounds(qs, p, q, x)
        delta = max(abs(lo - ref_lo), abs(hi - ref_hi))
        results.append((lo, hi, delta))
        if best is None or delta < results[best][2]:
            best = i
        in_band = band[0] <= s <= band[1]
        if weight_band is not None:
            in_band = in_band and weight_band[0] <= r <= weight_band[1]
        if in_band and (best_in_band is None or delta < results[best_in_band][2]):
            best_in_band = i

    chosen = best_in_band if best_in_band is not None else best
    lo, hi, chosen_delta = results[chosen]
    status = STATUS_MATCH if (best_in_band is not None
                              and chosen_delta <= tol) else STATUS_DISCREPANCY
    scan = ScanResult("r", tuple(float(r) for r in grid),
                      float(grid[chosen]), float(results[best][2]))

    strength_scan = None
    if status == STATUS_DISCREPANCY:
        # Force the stated strength band directly at a fixed in-band
        # weight, documenting how far the row stays off even then.
        r0 = (sum(weight_band) / 2.0) if weight_band is not None else cap / 2.0
        s_grid = np.linspace(band[0], band[1], SCAN_POINTS)
        best_s = None
        best_s_delta = np.inf
        for s in s_grid:
            x = (s - r0 * (p_max - 0.75)) / (1.0 - r0)
            s_lo, s_hi = _undetected_bounds(qs, p, q, x)
            delta = max(abs(s_lo - ref_lo), abs(s_hi - ref_hi))
            if delta < best_s_delta:
                best_s, best_s_delta = float(s), delta
        strength_scan = ScanResult("s_nl_new", tuple(float(s) for s in s_grid),
                                   best_s, float(best_s_delta))
    return lo, hi, status, scan, strength_scan


def reproduce_table(which: int, table_tol: float | None = None) -> list[TableRow]:
    """Recompute every row of one reference table.

    Tables 1 and 2 are closed under the listed (parameter, p, q); tables
    3 to 5 additionally scan the weight r as described in the module
    docstring. Discrepant rows are returned, never raised.
    """
    if which not in TABLES:
        raise ValueError(f"no such table: {which!r}")
    tol = TABLE_TOLERANCE[which] if table_tol is None else float(table_tol)
    rows = []
    for param, p, q, ref_lo, ref_hi in TABLES[which]:
        qs = _PRINTED[which](param)
        scan = None
        strength_scan = None
        if qs["regime"] == "detected":
            lo, hi = _detected_bounds(qs, p, q)
            delta_lo, delta_hi = abs(lo - ref_lo), abs(hi - ref_hi)
            status = (STATUS_MATCH if delta_lo <= tol and delta_hi <= tol
                      else STATUS_DISCREPANCY)
        else:
            lo, hi, status, scan, strength_scan = _scan_table_row(
                which, qs, param, p, q, ref_lo, ref_hi, tol)
            delta_lo, delta_hi = abs(lo - ref_lo), abs(hi - ref_hi)
        rows.append(TableRow(parameter=param, p=p, q=q,
                             sv_lower=float(lo), sv_upper=float(hi),
                             paper_lower=ref_lo, paper_upper=ref_hi,
                             delta_lower=float(delta_lo),
                             delta_upper=float(delta_hi),
                             status=status, scan=scan,
                             strength_scan=strength_scan))
    return rows


# ---------------------------------------------------------------------------
# Closed-form cross-checks against the general route.

_QUANTITY_NAMES = {
    "snl": "s_nl",
    "lmax_emb": "lambda_max_embedded",
    "lk": "lambda_k_embedded",
    "lmin_prod": "lambda_min_product",
    "lmax_prod": "lambda_max_product",
    "lmax_rho": "lambda_max_rho",
    "lmin_rho": "lambda_min_rho",
    "trwrrt": "trace_witness_product",
    "lmin_pt2": "lambda_min_pt_squared",
    "lmax_pt": "lambda_max_pt",
    "neg": "negativity",
    "lmax_wrho": "lambda_max_witness_state",
    "trpt2": "trace_pt_squared",
    "p_window": "p_window",
    "q_window": "q_window",
}

_QUANTITY_ORDER = ("snl", "lmax_emb", "lmin_prod", "lmax_prod", "lk",
                   "lmax_rho", "lmin_rho", "trwrrt", "lmin_pt2", "lmax_pt",
                   "neg", "lmax_wrho", "trpt2", "p_window", "q_window")


def _closed_form_printed(family: int, param: float) -> dict:
    qs = dict(_PRINTED[family](param))
    qs.pop("regime")
    if family == 5:
        qs["lmax_prod"] = _closed_form_lmax_prod5(param)
    p_win, q_win = _printed_windows(family, param)
    qs["p_window"] = p_win
    qs["q_window"] = q_win
    return {key: value for key, value in qs.items() if value is not None}


def _closed_form_general(family: int, param: float) -> dict:
    name = states.FAMILIES[family - 1]
    rho = states.make_example(name, param)
    reduced = states.example_reduced(name, param)
    pair = states.EXAMPLE_PAIRS[name]
    w = _family_witness(family)

    prod = product_spectrum(rho, reduced, pair)
    emb = linalg.hermitian_eigenvalues(embed_pair(reduced.matrix, pair))
    spec = linalg.hermitian_eigenvalues(rho.matrix)
    out = {
        "lmax_emb": emb.lambda_max,
        "lk": linalg.first_nonzero_eigenvalue(emb),
        "lmin_prod": prod.lambda_min,
        "lmax_prod": prod.lambda_max,
        "lmax_rho": spec.lambda_max,
        "lmin_rho": spec.lambda_min,
    }
    if family in (1, 2):
        snl = nonlocality.s_nl_detected(reduced, w)
        out["snl"] = snl
        _, gen_p = p_window_detected(rho, reduced, snl, pair)
        _, gen_q = q_window_detected(rho, reduced, snl, pair)
    else:
        pt = states.partial_transpose(reduced)
        root = linalg.psd_sqrt(reduced.matrix)
        out["trwrrt"] = linalg.trace_product(w, reduced.matrix @ pt)
        out["lmin_pt2"] = linalg.hermitian_eigenvalues(
            linalg.symmetrize(pt @ pt)).lambda_min
        out["lmax_pt"] = linalg.hermitian_eigenvalues(pt).lambda_max
        out["neg"] = states.negativity(reduced)
        out["lmax_wrho"] = linalg.hermitian_eigenvalues(
            linalg.symmetrize(root @ w @ root)).lambda_max
        out["trpt2"] = linalg.trace_product(pt, pt)
        strength = nonlocality.s_nl_new(reduced, w, 0.0)
        _, gen_p = p_window_undetected(rho, reduced, strength, pair)
        _, gen_q = q_window_undetected(rho, reduced, strength, w, pair)
    out["p_window"] = (gen_p.lower, gen_p.upper)
    out["q_window"] = (gen_q.lower, gen_q.upper)
    return out


def reproduce_closed_forms(family: int, grid_points: int = GRID_POINTS) -> list[ClosedFormCheck]:
    """Compare every listed closed form with the general route on a grid.

    Returns one check per quantity with the grid-wide maximum absolute
    deviation (window quantities take the worse endpoint).
    """
    if family not in CLOSED_FORM_RANGES:
        raise ValueError(f"no such family index: {family!r}")
    low, high = CLOSED_FORM_RANGES[family]
    grid = np.linspace(low, high, grid_points)
    worst: dict[str, float] = {}
    for param in grid:
        printed = _closed_form_printed(family, float(param))
        general = _closed_form_general(family, float(param))
        for key, listed in printed.items():
            if key.endswith("window"):
                dev = max(abs(listed[0] - general[key][0]),
                          abs(listed[1] - general[key][1]))
            else:
                dev = abs(listed - general[key])
            worst[key] = max(worst.get(key, 0.0), float(dev))
    return [ClosedFormCheck(family, _QUANTITY_NAMES[key], worst[key])
            for key in _QUANTITY_ORDER if key in worst]


# ---------------------------------------------------------------------------
# Erratum assembly and renderers.

_ROW_NOTES = {
    (1, 0.94): ("neither bound reproduces with the listed p = 0.596; "
                "p = 0.0596 reproduces the listed lower bound to 5e-5, so "
                "the listed value appears to drop a leading zero"),
}

_TABLE_NOTES = {
    2: ("the listed lower bounds follow from the strength rounded to "
        "0.0033; the exact strength 1/300 leaves residuals near 4e-2"),
    5: ("no admissible weight r realizes a strength inside the stated "
        "band; the strength tops out near 0.24 at r = 0, and forcing the "
        "band leaves residuals above 4"),
}

_FORM_NOTES = {
    (1, "lambda_max_product"): (
        "listed form factors as lambda0^2 (0.09 + lambda0^2) and does not "
        "match the spectrum of the operator product"),
    (1, "q_window"): "inherits the lambda_max_product mismatch",
    (2, "lambda_max_product"): (
        "listed form does not match the spectrum of the operator product"),
    (2, "q_window"): (
        "inherits the lambda_max_product mismatch; the middle denominator "
        "coefficient 0.3423 is also inconsistent with the listed "
        "quantities (expanding them gives 0.6757)"),
    (4, "lambda_max_product"): (
        "listed radicand matches the listed q window numerator but not "
        "the spectrum of the operator product"),
    (4, "q_window"): "inherits the lambda_max_product mismatch",
    (5, "lambda_min_product"): (
        "listed form is negative although both product factors are "
        "positive semidefinite; the computed floor equals (1 - p_s)^2/32"),
    (5, "lambda_max_product"): (
        "listed denominator 28 exceeds every admissible eigenvalue scale; "
        "reading it as 288 still deviates from the computed spectrum"),
    (5, "p_window"): "inherits the lambda_min_product mismatch through H",
    (5, "q_window"): (
        "built from the embedded ceiling with a sign flip in its upper "
        "denominator where the general route uses the first nonzero "
        "embedded eigenvalue; also inherits the lambda_max_product "
        "mismatch"),
}


def erratum_entries() -> list[dict]:
    """Machine-readable record of every discrepancy, tables and forms."""
    entries = []
    for which in sorted(TABLES):
        for row in reproduce_table(which):
            if row.status != STATUS_DISCREPANCY:
                continue
            note = _ROW_NOTES.get((which, row.parameter),
                                  _TABLE_NOTES.get(which, ""))
            entry = {
                "kind": "table-row",
                "table": which,
                "parameter": row.parameter,
                "p": row.p,
                "q": row.q,
                "computed_lower": row.sv_lower,
                "computed_upper": row.sv_upper,
                "paper_lower": row.paper_lower,
                "paper_upper": row.paper_upper,
                "delta_lower": row.delta_lower,
                "delta_upper": row.delta_upper,
                "note": note,
            }
            if row.scan is not None:
                entry["scan_best_r"] = row.scan.best
                entry["scan_achieved_delta"] = row.scan.achieved_delta
            if row.strength_scan is not None:
                entry["strength_scan_best"] = row.strength_scan.best
                entry["strength_scan_achieved_delta"] = (
                    row.strength_scan.achieved_delta)
            entries.append(entry)
    for family in sorted(TABLES):
        for check in reproduce_closed_forms(family):
            if check.status != STATUS_DISCREPANCY:
                continue
            entries.append({
                "kind": "closed-form",
                "family": family,
                "quantity": check.quantity,
                "max_deviation": check.max_deviation,
                "note": _FORM_NOTES.get((family, check.quantity), ""),
            })
    return entries


def _fmt(value: float) -> str:
    return f"{value:.10g}"


def render_table_csv(rows: list[TableRow]) -> str:
    """CSV report, one line per row, columns per CSV_COLUMNS."""
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join((
            _fmt(row.parameter), _fmt(row.p), _fmt(row.q),
            _fmt(row.sv_lower), _fmt(row.sv_upper),
            _fmt(row.paper_lower), _fmt(row.paper_upper),
            _fmt(row.delta_lower), _fmt(row.delta_upper),
            row.status,
        )))
    return "\n".join(lines) + "\n"


def render_table_text(which: int, rows: list[TableRow]) -> str:
    """Aligned plain-text report with scan annotations."""
    widths = (9, 8, 8, 15, 15, 12, 12, 12, 12, 12)
    header = "".join(name.ljust(w) for name, w in zip(CSV_COLUMNS, widths))
    lines = [f"table {which}  (tolerance {TABLE_TOLERANCE[which]:g})", header]
    for row in rows:
        cells = (_fmt(row.parameter), _fmt(row.p), _fmt(row.q),
                 f"{row.sv_lower:.6f}", f"{row.sv_upper:.6f}",
                 _fmt(row.paper_lower), _fmt(row.paper_upper),
                 f"{row.delta_lower:.2e}", f"{row.delta_upper:.2e}",
                 row.status)
        lines.append("".join(cell.ljust(w) for cell, w in zip(cells, widths)))
        if row.scan is not None:
            lines.append(f"    scan r: best {row.scan.best:.6f} of "
                         f"{len(row.scan.grid)} points in [0, "
                         f"{row.scan.grid[-1]:.6f}], achieved delta "
                         f"{row.scan.achieved_delta:.3e}")
        if row.strength_scan is not None:
            lines.append(f"    scan s_nl_new: best {row.strength_scan.best:.6f} "
                         f"in stated band, achieved delta "
                         f"{row.strength_scan.achieved_delta:.3e}")
    return "\n".join(lines) + "\n"

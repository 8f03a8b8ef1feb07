"""Command-line front end: parse state specs, run analyses, emit reports.

Three subcommands. analyze resolves a three-qubit state, prints the
per-pair negativities, the certificate report for one pair and witness,
and the verdict of the full certificate search; its exit code encodes
the verdict (0 genuine, 1 inconclusive, 2 not-applicable). optimize runs
the measurement-settings ascent for the Svetlichny or CHSH objective.
reproduce regenerates the bundled reference tables as text and CSV files
and can export the erratum record; discrepancies never change its exit
code.

States come from a family name with a parameter, a bundled reference
name, or a matrix file. The file grammar is one header line "dim N",
then N rows of N whitespace-separated "re,im" tokens; '#' starts a
comment. Parse failures exit 64, semantically invalid inputs exit 65.

The certificate section of analyze evaluates its bounds at the midpoints
of the genuine windows (falling back to 0.5 where a window is empty), so
the printed interval is always attainable by the reported parameters.
JSON output mirrors the BoundsReport field names verbatim.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict

import numpy as np

from . import linalg, nonlocality, operators, reproduce, states
from .bounds import BoundConfig, BoundsError, Verdict, Window, detect_genuine, full_report
from .operators import OperatorError
from .optimize import (
    BACKENDS,
    OptimizerConfig,
    OptimizerError,
    STEP_RULES,
    maximize_chsh,
    maximize_svetlichny,
)
from .states import DensityMatrix, StateError

EXIT_GENUINE = 0
EXIT_INCONCLUSIVE = 1
EXIT_NOT_APPLICABLE = 2
EXIT_PARSE = 64
EXIT_INVALID = 65
EXIT_IO = 74

_VERDICT_EXITS = {
    "genuine": EXIT_GENUINE,
    "inconclusive": EXIT_INCONCLUSIVE,
    "not-applicable": EXIT_NOT_APPLICABLE,
}

_PAIRS = {"AB": ("A", "B"), "AC": ("A", "C"), "BC": ("B", "C")}


class CliParseError(Exception):
    """Anything that makes the invocation unreadable, flags or files."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliParseError(message)


# ---------------------------------------------------------------------------
# Matrix file grammar.

def parse_matrix_text(text: str) -> np.ndarray:
    """Parse the "dim N" header plus N rows of N "re,im" tokens."""
    rows = []
    dim = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if dim is None:
            head = line.split()
            if len(head) != 2 or head[0] != "dim":
                raise CliParseError(f"line {lineno}: expected 'dim N', got {raw!r}")
            try:
                dim = int(head[1])
            except ValueError:
                raise CliParseError(f"line {lineno}: bad dimension {head[1]!r}") from None
            if dim <= 0:
                raise CliParseError(f"line {lineno}: dimension must be positive")
            continue
        tokens = line.split()
        if len(tokens) != dim:
            raise CliParseError(
                f"line {lineno}: expected {dim} entries, got {len(tokens)}")
        entries = []
        for token in tokens:
            parts = token.split(",")
            if len(parts) != 2:
                raise CliParseError(f"line {lineno}: expected 're,im', got {token!r}")
            try:
                entries.append(complex(float(parts[0]), float(parts[1])))
            except ValueError:
                raise CliParseError(f"line {lineno}: bad number in {token!r}") from None
        rows.append(entries)
    if dim is None:
        raise CliParseError("empty matrix file")
    if len(rows) != dim:
        raise CliParseError(f"expected {dim} rows, got {len(rows)}")
    return np.array(rows, dtype=complex)


def format_matrix_text(matrix: np.ndarray) -> str:
    """Inverse of parse_matrix_text, entries at full precision."""
    m = np.asarray(matrix, dtype=complex)
    lines = [f"dim {m.shape[0]}"]
    for row in m:
        lines.append(" ".join(f"{z.real:.17g},{z.imag:.17g}" for z in row))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Input resolution.

def _read_file(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise CliParseError(f"cannot read {path}: {exc}") from None


def _qubits_for_dim(dim: int) -> int:
    if dim == 4:
        return 2
    if dim == 8:
        return 3
    raise StateError(f"expected a 4x4 or 8x8 density matrix, got {dim}x{dim}")


def _resolve_state(args) -> tuple[DensityMatrix, str]:
    sources = [name for name in ("family", "ref", "matrix")
               if getattr(args, name, None) is not None]
    if len(sources) != 1:
        raise CliParseError("give exactly one of --family, --ref, --matrix")
    if args.family is not None:
        if args.param is None:
            raise CliParseError("--family needs --param")
        rho = states.make_example(args.family, args.param)
        return rho, f"{args.family}({args.param:g})"
    if args.ref is not None:
        return states.make_reference(args.ref), args.ref
    matrix = parse_matrix_text(_read_file(args.matrix))
    rho = states.validate(matrix, _qubits_for_dim(matrix.shape[0]))
    return rho, args.matrix


def _resolve_witness(choice: str | None) -> tuple[str, np.ndarray] | None:
    if choice is None:
        return None
    if choice in operators.PLANES:
        return choice, operators.plane_witness(choice)
    matrix = parse_matrix_text(_read_file(choice))
    if matrix.shape != (4, 4):
        raise StateError(f"witness must be 4x4, got {matrix.shape}")
    return "user", linalg.symmetrize(matrix)


def _pair_arg(value: str) -> tuple[str, str]:
    key = value.upper().replace(",", "").replace("-", "")
    if key not in _PAIRS:
        raise argparse.ArgumentTypeError(f"pair must be one of AB, AC, BC, got {value!r}")
    return _PAIRS[key]


# ---------------------------------------------------------------------------
# Serialization helpers.

def _window_dict(window: Window | None) -> dict | None:
    if window is None:
        return None
    return {"lower": window.lower, "upper": window.upper, "empty": window.empty}


def _window_str(window: Window) -> str:
    tag = "empty" if window.empty else "nonempty"
    return f"[{window.lower:.9g}, {window.upper:.9g}] ({tag})"


def _verdict_dict(verdict: Verdict) -> dict:
    out = asdict(verdict)
    out["window"] = _window_dict(verdict.window)
    out["pair"] = list(verdict.pair) if verdict.pair is not None else None
    return out


# ---------------------------------------------------------------------------
# analyze

def _negativities(rho: DensityMatrix) -> dict[str, float]:
    out = {}
    for key, pair in _PAIRS.items():
        traced = next(lbl for lbl in states.LABELS if lbl not in pair)
        out[key] = states.negativity(states.partial_trace(rho, traced))
    return out


def _certificate_report(rho, pair, witness, r):
    """Bounds report at genuine-window midpoints, plus the (p, q) used."""
    probe = full_report(rho, BoundConfig(p=0.5, q=0.5, witness=witness,
                                         reduced_pair=pair, r=r))
    p = probe.genuine_p_window.midpoint if not probe.genuine_p_window.empty else 0.5
    q = probe.genuine_q_window.midpoint if not probe.genuine_q_window.empty else 0.5
    report = full_report(rho, BoundConfig(p=p, q=q, witness=witness,
                                          reduced_pair=pair, r=r))
    return report, p, q


def cmd_analyze(args) -> int:
    rho, label = _resolve_state(args)
    if rho.qubits != 3:
        raise StateError("analyze needs a three-qubit state")
    if args.export is not None:
        with open(args.export, "w", encoding="utf-8") as handle:
            handle.write(format_matrix_text(rho.matrix))

    witness_spec = _resolve_witness(args.witness)
    pair = args.pair if args.pair is not None else ("B", "C")
    cert_witness_label, cert_witness = witness_spec if witness_spec else \
        ("xy", operators.plane_witness("xy"))

    negs = _negativities(rho)
    report = None
    report_error = None
    p = q = None
    try:
        report, p, q = _certificate_report(rho, pair, cert_witness, args.r)
    except (nonlocality.NonlocalityError, BoundsError, linalg.LinalgError) as exc:
        report_error = str(exc)

    search_witness = cert_witness if witness_spec and witness_spec[0] == "user" else None
    verdict = detect_genuine(rho, pair=args.pair, witness=search_witness, r=args.r)

    if args.format == "json":
        payload = {
            "state": label,
            "negativity": negs,
            "certificate_pair": list(pair),
            "certificate_witness": cert_witness_label,
            "report": None if report is None else {
                "regime": report.regime,
                "sv_lower": report.sv_lower,
                "sv_upper": report.sv_upper,
                "p": p,
                "q": q,
                "p_window": _window_dict(report.p_window),
                "q_window": _window_dict(report.q_window),
                "genuine_p_window": _window_dict(report.genuine_p_window),
                "genuine_q_window": _window_dict(report.genuine_q_window),
                "intermediates": report.intermediates,
            },
            "report_error": report_error,
            "verdict": _verdict_dict(verdict),
        }
        print(json.dumps(payload, indent=2))
    elif args.format == "csv":
        header = ("outcome,route,parameter,value,window_lower,window_upper,"
                  "pair,witness,neg_AB,neg_AC,neg_BC")
        window = verdict.window
        row = (
            verdict.outcome,
            verdict.route or "",
            verdict.parameter or "",
            "" if verdict.value is None else f"{verdict.value:.10g}",
            "" if window is None else f"{window.lower:.10g}",
            "" if window is None else f"{window.upper:.10g}",
            "" if verdict.pair is None else "".join(verdict.pair),
            verdict.witness_label or "",
            f"{negs['AB']:.10g}", f"{negs['AC']:.10g}", f"{negs['BC']:.10g}",
        )
        print(header)
        print(",".join(row))
    else:
        print(f"state: {label}")
        print("negativity:")
        for key in ("AB", "AC", "BC"):
            print(f"  {key[0]}-{key[1]}: {negs[key]:.9g}")
        print(f"certificate (pair {pair[0]}-{pair[1]}, witness {cert_witness_label}):")
        if report is None:
            print(f"  unavailable: {report_error}")
        else:
            print(f"  regime: {report.regime}")
            inter = report.intermediates
            if report.regime == "detected":
                print(f"  strength: s_nl = {inter['s_nl']:.9g}")
            else:
                print(f"  strength: s_nl_new = {inter['s_nl_new']:.9g} "
                      f"(k = {inter['k']:.9g}, p_max = {inter['p_max']:.9g}, "
                      f"r = {inter['r']:.9g})")
            print(f"  bounds at p = {p:.9g}, q = {q:.9g}: "
                  f"lower {report.sv_lower:.9g}, upper {report.sv_upper:.9g}")
            print(f"  p window: {_window_str(report.p_window)}  "
                  f"genuine: {_window_str(report.genuine_p_window)}")
            print(f"  q window: {_window_str(report.q_window)}  "
                  f"genuine: {_window_str(report.genuine_q_window)}")
        print(f"verdict: {verdict.outcome}")
        if verdict.outcome == "genuine":
            print(f"  route {verdict.route}, pair "
                  f"{verdict.pair[0]}-{verdict.pair[1]}, witness "
                  f"{verdict.witness_label}")
            print(f"  parameter {verdict.parameter} = {verdict.value:.9g} "
                  f"in genuine window {_window_str(verdict.window)}")
    return _VERDICT_EXITS[verdict.outcome]


# ---------------------------------------------------------------------------
# optimize

def _spherical(vector: np.ndarray) -> tuple[float, float]:
    z = float(np.clip(vector[2], -1.0, 1.0))
    return float(np.arccos(z)), float(np.arctan2(vector[1], vector[0]))


def _observable_vector(observable: np.ndarray) -> np.ndarray:
    return 0.5 * np.array([
        linalg.trace_product(operators.PAULI_X, observable),
        linalg.trace_product(operators.PAULI_Y, observable),
        linalg.trace_product(operators.PAULI_Z, observable),
    ])


def cmd_optimize(args) -> int:
    rho, label = _resolve_state(args)
    cfg = OptimizerConfig(restarts=args.restarts,
                          max_iterations=args.max_iterations,
                          step_rule=args.step_rule,
                          seed=args.seed)
    if args.target == "svetlichny":
        if rho.qubits != 3:
            raise StateError("the svetlichny target needs a three-qubit state")
        optimum = maximize_svetlichny(rho, cfg, backend=args.backend)
        named = zip(("a", "a'", "b", "b'", "c", "c'"),
                    optimum.settings.vectors())
    else:
        if rho.qubits == 3:
            if args.pair is None:
                raise StateError("the chsh target needs --pair for a three-qubit state")
            traced = next(lbl for lbl in states.LABELS if lbl not in args.pair)
            rho = states.partial_trace(rho, traced)
            label = f"{label} reduced to {args.pair[0]}-{args.pair[1]}"
        optimum = maximize_chsh(rho, cfg, backend=args.backend)
        named = zip(("A0", "A1", "B0", "B1"),
                    (_observable_vector(obs) for obs in
                     (optimum.settings.A0, optimum.settings.A1,
                      optimum.settings.B0, optimum.settings.B1)))

    vectors = [(name, vec, *_spherical(vec)) for name, vec in named]
    if args.format == "json":
        payload = {
            "state": label,
            "target": args.target,
            "value": optimum.value,
            "iterations_used": optimum.iterations_used,
            "converged": optimum.converged,
            "seed": cfg.resolved_seed(),
            "backend": args.backend,
            "settings": {name: {"vector": [float(x) for x in vec],
                                "theta": theta, "phi": phi}
                         for name, vec, theta, phi in vectors},
        }
        print(json.dumps(payload, indent=2))
    else:
        print(f"state: {label}")
        print(f"target: {args.target}")
        print(f"optimum: {optimum.value:.9f}")
        print(f"iterations: {optimum.iterations_used}, converged: "
              f"{optimum.converged}, restarts: {cfg.restarts}, seed: "
              f"{cfg.resolved_seed()}, backend: {args.backend}")
        for name, vec, theta, phi in vectors:
            print(f"  {name}: [{vec[0]: .6f} {vec[1]: .6f} {vec[2]: .6f}]  "
                  f"theta = {theta:.6f}, phi = {phi:.6f}")
    return 0


# ---------------------------------------------------------------------------
# reproduce

def cmd_reproduce(args) -> int:
    which = range(1, 6) if args.table == "all" else (int(args.table),)
    os.makedirs(args.out, exist_ok=True)
    for table in which:
        rows = reproduce.reproduce_table(table)
        text = reproduce.render_table_text(table, rows)
        csv = reproduce.render_table_csv(rows)
        base = os.path.join(args.out, f"table_{table}")
        with open(base + ".txt", "w", encoding="utf-8") as handle:
            handle.write(text)
        with open(base + ".csv", "w", encoding="utf-8") as handle:
            handle.write(csv)
        matches = sum(row.status == reproduce.STATUS_MATCH for row in rows)
        print(text, end="")
        print(f"-> {base}.txt, {base}.csv ({matches}/{len(rows)} rows match)")
    if args.erratum is not None:
        with open(args.erratum, "w", encoding="utf-8") as handle:
            json.dump(reproduce.erratum_entries(), handle, indent=2)
            handle.write("\n")
        print(f"-> {args.erratum}")
    return 0


# ---------------------------------------------------------------------------
# Wiring.

def _add_state_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--family", choices=states.FAMILIES,
                     help="worked example family")
    sub.add_argument("--param", type=float,
                     help="family parameter (with --family)")
    sub.add_argument("--ref", choices=states.REFERENCE_NAMES,
                     help="bundled reference state")
    sub.add_argument("--matrix",
                     help="matrix file path, or - for stdin")


def build_parser() -> _Parser:
    parser = _Parser(prog="svet",
                     description="genuine tripartite nonlocality certificates")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze",
                                  help="negativities, certificate report, verdict")
    _add_state_flags(analyze)
    analyze.add_argument("--pair", type=_pair_arg,
                         help="restrict to one reduced pair (AB, AC, BC)")
    analyze.add_argument("--witness",
                         help="plane (xy, xz, yz) or a 4x4 matrix file; "
                              "a file is also added to the verdict search")
    analyze.add_argument("--r", type=float, default=None,
                         help="interpolation weight for the undetected regime")
    analyze.add_argument("--format", choices=("text", "json", "csv"),
                         default="text")
    analyze.add_argument("--export",
                         help="write the resolved state to this matrix file")
    analyze.set_defaults(func=cmd_analyze)

    optimize = commands.add_parser("optimize",
                                   help="maximize an objective over settings")
    _add_state_flags(optimize)
    optimize.add_argument("--target", choices=("svetlichny", "chsh"),
                          default="svetlichny")
    optimize.add_argument("--pair", type=_pair_arg,
                          help="reduced pair for chsh on a three-qubit state")
    optimize.add_argument("--restarts", type=int, default=64)
    optimize.add_argument("--max-iterations", type=int, default=500)
    optimize.add_argument("--step-rule", choices=STEP_RULES,
                          default="backtracking")
    optimize.add_argument("--backend", choices=BACKENDS, default="gradient")
    optimize.add_argument("--seed", type=int, default=None,
                          help="overrides the SVET_SEED environment variable")
    optimize.add_argument("--format", choices=("text", "json"), default="text")
    optimize.set_defaults(func=cmd_optimize)

    repro = commands.add_parser("reproduce",
                                help="regenerate the reference tables")
    repro.add_argument("--table", choices=("1", "2", "3", "4", "5", "all"),
                       default="all")
    repro.add_argument("--out", default=".",
                       help="directory for the text and CSV reports")
    repro.add_argument("--erratum",
                       help="also write the erratum record to this JSON file")
    repro.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (StateError, OperatorError, nonlocality.NonlocalityError,
            BoundsError, OptimizerError, linalg.LinalgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

"""End-to-end orchestration: parse, compute q^2, amplify, compare, report.

The statevector path is phrased as the composition of three labeled channel
stages (preparation, computation, measurement). Oracle mode bypasses the
simulator entirely and carries q^2 = r/2^n as an exact rational, so q = 0
versus q = 2^-n stays an exact distinction rather than a thresholded one.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import adaptive, chaos
from .cnf import CnfFormula, CountSummary, count_satisfying, parse_dimacs
from .errors import EnumerationCapError
from .sat_circuit import (
    build_sat_circuit,
    collapse_to_qubit,
    post_measure,
    required_ancillas,
    success_probability,
)
from .statevector import StateVector, max_qubits, prepare_uniform, run

MODES = ("oracle", "statevector")
AMPLIFIERS = ("chaos", "stochastic", "none")
FORMATS = ("json", "csv")

_STAGE_ORDER = {"preparation": 0, "computation": 1, "measurement": 2}


@dataclass(frozen=True)
class ChannelStage:
    label: str
    transform: Callable

    def __post_init__(self):
        if self.label not in _STAGE_ORDER:
            raise ValueError(f"unknown stage label {self.label!r}")


@dataclass(frozen=True)
class MeasurementOutcome:
    """Result of the projective readout: the success weight and the surviving
    branch (None on the UNSAT branch)."""

    probability: float
    state: StateVector | None


def compose_channels(stages: list[ChannelStage], state):
    """Apply stages in order; labels must respect preparation -> computation
    -> measurement."""
    last = -1
    for stage in stages:
        rank = _STAGE_ORDER[stage.label]
        if rank < last:
            raise ValueError(f"stage {stage.label!r} out of canonical order")
        last = rank
        state = stage.transform(state)
    return state


def sat_pipeline_stages(formula: CnfFormula) -> list[ChannelStage]:
    """The canonical three-stage statevector pipeline for a formula."""
    circuit, layout = build_sat_circuit(formula)
    return [
        ChannelStage("preparation", lambda _ignored: prepare_uniform(layout.n_input, layout.mu)),
        ChannelStage("computation", lambda s: run(circuit, s)),
        ChannelStage(
            "measurement",
            lambda s: MeasurementOutcome(success_probability(s, layout), post_measure(s, layout)),
        ),
    ]


@dataclass(frozen=True)
class PipelineConfig:
    input_path: str
    mode: str = "oracle"
    amplifier: str = "chaos"
    a: float = 3.71
    gamma_re: float = 1.0
    gamma_im: float = 0.0
    e0: int = 0
    e1: int = 2
    horizon_factor: float = 20.0
    threshold: float = 0.1
    emit_path: str | None = None
    format: str = "json"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.amplifier not in AMPLIFIERS:
            raise ValueError(f"amplifier must be one of {AMPLIFIERS}, got {self.amplifier!r}")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}, got {self.format!r}")


@dataclass(frozen=True)
class Report:
    input_path: str
    n: int
    m: int
    mu: int
    mode: str
    amplifier: str
    q_squared_float: float
    q_squared_rational: Fraction | None
    verdict: "chaos.ChaosVerdict | adaptive.DynVerdict | None"
    amplifier_satisfiable: bool | None
    reference: CountSummary | None
    agreement: bool | None
    elapsed_s: float

    def to_json_dict(self, include_timing: bool = True) -> dict:
        if isinstance(self.verdict, chaos.ChaosVerdict):
            verdict = {
                "satisfiable": self.verdict.satisfiable,
                "m_hit": self.verdict.m_hit,
                "window": self.verdict.window,
                "lower_bound": self.verdict.lower_bound,
            }
        elif isinstance(self.verdict, adaptive.DynVerdict):
            verdict = {
                "satisfiable": self.verdict.satisfiable,
                "damped": self.verdict.damped,
                "tail_mean": self.verdict.tail_mean,
                "fitted_rate": self.verdict.fitted_rate,
            }
        else:
            verdict = None
        doc = {
            "input": self.input_path,
            "formula": {"n": self.n, "m": self.m, "mu": self.mu},
            "mode": self.mode,
            "q_squared": {
                "float": self.q_squared_float,
                "rational": str(self.q_squared_rational) if self.q_squared_rational is not None else None,
                "source": self.mode,
            },
            "amplifier": {"kind": self.amplifier, "verdict": verdict},
            "reference": (
                {"r": self.reference.r, "total": self.reference.total,
                 "satisfiable": self.reference.r >= 1}
                if self.reference is not None
                else None
            ),
            "agreement": self.agreement,
        }
        if include_timing:
            doc["timing"] = {"elapsed_s": self.elapsed_s}
        return doc


def statevector_q_squared(formula: CnfFormula) -> float:
    """Success probability of the result-qubit readout, from the full
    statevector pipeline."""
    outcome = compose_channels(sat_pipeline_stages(formula), None)
    return outcome.probability


def _amplifier_verdict(cfg: PipelineConfig, q_squared: float | Fraction, n: int):
    """Run the selected amplifier; returns (verdict object, satisfiable or None)."""
    if cfg.amplifier == "chaos":
        verdict = chaos.detect(float(q_squared), max(n, 1), chaos.LogisticParams(cfg.a))
        return verdict, verdict.satisfiable
    if cfg.amplifier == "stochastic":
        alpha0, alpha1 = collapse_to_qubit(q_squared)
        dyn = adaptive.adapt(
            adaptive.InputAmplitudes(alpha0, alpha1),
            adaptive.TwoLevelHamiltonian(cfg.e0, cfg.e1),
            adaptive.Susceptibility(complex(cfg.gamma_re, cfg.gamma_im)),
        )
        horizon = cfg.horizon_factor / cfg.gamma_re
        classifier = adaptive.ClassifierConfig(
            horizon=horizon, dt=horizon / 400.0, threshold=cfg.threshold
        )
        verdict = adaptive.classify(dyn, classifier)
        return verdict, verdict.satisfiable
    return None, None


def run_pipeline(cfg: PipelineConfig) -> Report:
    """Parse the input file, produce q^2 in the configured mode, amplify, and
    attach the brute-force reference verdict when enumeration is feasible."""
    started = time.perf_counter()
    text = Path(cfg.input_path).read_text()
    formula = parse_dimacs(text)
    mu = required_ancillas(formula)

    reference: CountSummary | None
    try:
        reference = count_satisfying(formula)
    except EnumerationCapError:
        reference = None

    if cfg.mode == "oracle":
        if reference is None:
            raise EnumerationCapError(
                f"oracle mode needs enumeration but n={formula.n} exceeds the cap; "
                "use statevector mode only if the circuit fits, or shrink the instance"
            )
        q_exact: Fraction | None = reference.q_squared
        q_float = float(reference.q_squared)
        amp_input: float | Fraction = reference.q_squared
    else:
        q_float = statevector_q_squared(formula)
        q_exact = reference.q_squared if reference is not None else None
        amp_input = q_float

    verdict, amp_sat = _amplifier_verdict(cfg, amp_input, formula.n)
    agreement = None
    if amp_sat is not None and reference is not None:
        agreement = amp_sat == (reference.r >= 1)

    report = Report(
        input_path=str(cfg.input_path),
        n=formula.n,
        m=formula.num_clauses,
        mu=mu,
        mode=cfg.mode,
        amplifier=cfg.amplifier,
        q_squared_float=q_float,
        q_squared_rational=q_exact,
        verdict=verdict,
        amplifier_satisfiable=amp_sat,
        reference=reference,
        agreement=agreement,
        elapsed_s=time.perf_counter() - started,
    )
    if cfg.emit_path:
        emit(report, cfg.format, cfg.emit_path)
    return report


# -- emission -------------------------------------------------------------------


def _trace_rows(obj) -> tuple[str, list[str]]:
    if isinstance(obj, chaos.ChaosVerdict):
        obj = obj.trace
    if isinstance(obj, chaos.ChaosTrace):
        return "m,x_m", [f"{m},{x!r}" for m, x in enumerate(obj.xs)]
    if isinstance(obj, adaptive.DynVerdict):
        return "t,p1,coh_abs,coh_phase", [
            f"{p.t!r},{p.p1!r},{p.coh_abs!r},{p.coh_phase!r}" for p in obj.trajectory
        ]
    raise ValueError(f"no CSV trace defined for {type(obj).__name__}")


def render(obj, fmt: str) -> str:
    """Deterministic text form of a report or amplifier trace."""
    if fmt == "json":
        if not isinstance(obj, Report):
            raise ValueError("json emission is defined for reports only")
        return json.dumps(obj.to_json_dict(), sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        target = obj.verdict if isinstance(obj, Report) else obj
        if target is None:
            raise ValueError("report has no amplifier trace to emit as CSV")
        header, rows = _trace_rows(target)
        return "\n".join([header] + rows) + "\n"
    raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")


def emit(obj, fmt: str, path: str | Path) -> Path:
    """Write a report (json) or a trace (csv) to disk; bytes are deterministic
    for fixed inputs (the report's timing field is the one varying key)."""
    out = Path(path)
    out.write_text(render(obj, fmt))
    return out


# -- regression harness -----------------------------------------------------------


@dataclass(frozen=True)
class CheckRow:
    name: str
    n: int
    m: int
    mu: int
    r: int
    expected_sat: bool | None
    verdicts: dict[tuple[str, str], bool]
    issues: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.issues


@dataclass(frozen=True)
class CheckSummary:
    rows: tuple[CheckRow, ...]
    matrix: dict[tuple[str, str], tuple[int, int]]
    disagreements: int

    @property
    def ok(self) -> bool:
        return self.disagreements == 0

    def to_text(self) -> str:
        lines = []
        for row in self.rows:
            status = "ok " if row.ok else "FAIL"
            cells = " ".join(
                f"{amp[:4]}/{mode[:6]}={'SAT' if v else 'UNSAT'}"
                for (amp, mode), v in sorted(row.verdicts.items())
            )
            lines.append(f"{status} {row.name:<28} n={row.n:<3} r={row.r:<6} {cells}")
            for issue in row.issues:
                lines.append(f"     ^ {issue}")
        lines.append("")
        lines.append("agreement matrix (vs brute force):")
        for (amp, mode), (good, total) in sorted(self.matrix.items()):
            lines.append(f"  {amp:<10} {mode:<12} {good}/{total}")
        lines.append(f"disagreements: {self.disagreements}")
        return "\n".join(lines)


def read_expectation(text: str) -> bool | None:
    """Optional 'c expect SAT|UNSAT' annotation in a DIMACS file."""
    for line in text.splitlines():
        parts = line.split()
        if len(parts) >= 3 and parts[0] == "c" and parts[1] == "expect":
            return parts[2].upper() == "SAT"
    return None


def self_check(corpus_dir: str | Path, statevector_limit: int = 24) -> CheckSummary:
    """Run both amplifiers in both modes (statevector where the circuit fits)
    over every .cnf in a directory and compare all verdicts against brute
    force and against any 'c expect' annotation."""
    corpus = sorted(Path(corpus_dir).glob("*.cnf"))
    if not corpus:
        raise ValueError(f"no .cnf files found in {corpus_dir}")
    sv_cap = min(max_qubits(), statevector_limit)
    rows = []
    matrix: dict[tuple[str, str], list[int]] = {}
    for path in corpus:
        text = path.read_text()
        formula = parse_dimacs(text)
        mu = required_ancillas(formula)
        reference = count_satisfying(formula)
        ref_sat = reference.r >= 1
        expected = read_expectation(text)
        issues = []
        if expected is not None and expected != ref_sat:
            issues.append(
                f"expectation says {'SAT' if expected else 'UNSAT'} but brute force "
                f"counts r={reference.r}"
            )
        q2_by_mode: dict[str, float | Fraction] = {"oracle": reference.q_squared}
        if formula.n + mu <= sv_cap:
            q2_by_mode["statevector"] = statevector_q_squared(formula)
        verdicts: dict[tuple[str, str], bool] = {}
        for amp in ("chaos", "stochastic"):
            for mode, q2 in q2_by_mode.items():
                cfg = PipelineConfig(input_path=str(path), mode=mode, amplifier=amp)
                _, amp_sat = _amplifier_verdict(cfg, q2, formula.n)
                verdicts[(amp, mode)] = amp_sat
                cell = matrix.setdefault((amp, mode), [0, 0])
                cell[1] += 1
                if amp_sat == ref_sat:
                    cell[0] += 1
                else:
                    issues.append(f"{amp}/{mode} says {'SAT' if amp_sat else 'UNSAT'}, "
                                  f"brute force says {'SAT' if ref_sat else 'UNSAT'}")
        rows.append(
            CheckRow(
                name=path.name,
                n=formula.n,
                m=formula.num_clauses,
                mu=mu,
                r=reference.r,
                expected_sat=expected,
                verdicts=verdicts,
                issues=tuple(issues),
            )
        )
    disagreements = sum(len(row.issues) for row in rows)
    return CheckSummary(
        rows=tuple(rows),
        matrix={k: (v[0], v[1]) for k, v in matrix.items()},
        disagreements=disagreements,
    )

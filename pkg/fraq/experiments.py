"""Convergence studies and timing sweeps."""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config import PRESETS, ExperimentConfig, resolve_threads
from .errors import ParameterError
from .logger import logger
from .solver import ProblemSpec, RunResult, TimeScheme, l2_norm, run
from .weights import Scheme

# Classical scheme used for the reference solution of each family
REFERENCE_SCHEMES = {
    Scheme.BE: TimeScheme.BE,
    Scheme.SBD: TimeScheme.SBD,
}

SCHEME_FAMILIES = {
    TimeScheme.BE: Scheme.BE,
    TimeScheme.FAST_BE: Scheme.BE,
    TimeScheme.SBD: Scheme.SBD,
    TimeScheme.FAST_SBD: Scheme.SBD,
}


@dataclass
class ConvergenceRow:
    """Errors at one step size."""

    tau: Fraction
    e1: float
    e2: float
    rate1: Optional[float] = None
    rate2: Optional[float] = None
    seconds: float = 0.0


@dataclass
class ConvergenceReport:
    """One convergence table: a scheme and an alpha pair over the tau list."""

    scheme: TimeScheme
    alpha1: float
    alpha2: float
    rows: List[ConvergenceRow] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)


@dataclass
class TimingRow:
    """Wall time of one run."""

    scheme: TimeScheme
    n: int
    seconds_loop: float
    seconds_setup: float


@dataclass
class ScalingFit:
    """Least-squares fits t = c N and t = c N^2 through the origin."""

    c_linear: float
    r2_linear: float
    c_quadratic: float
    r2_quadratic: float

    @property
    def prefers_quadratic(self) -> bool:
        return self.r2_quadratic > self.r2_linear


def compute_rates(errors: Sequence[Tuple[Any, float]]) -> List[Optional[float]]:
    """
    Observed orders between successive step halvings.

    rate_k = ln(E_(k-1) / E_k) / ln 2; the first entry has no rate.

    Args:
        errors: (tau, E) pairs with tau halving from one entry to the next

    Returns:
        [None, rate_1, ...]; None also where an error is zero

    Raises:
        ParameterError: If the taus do not halve
    """
    rates: List[Optional[float]] = [None] if errors else []
    for (tau_prev, e_prev), (tau, e) in zip(errors, errors[1:]):
        if not math.isclose(float(tau_prev), 2 * float(tau), rel_tol=1e-12):
            raise ParameterError(f"tau grid must halve: {tau_prev} -> {tau}")
        if e_prev <= 0 or e <= 0:
            rates.append(None)
        else:
            rates.append(math.log(e_prev / e) / math.log(2))
    return rates


def steps_for(t_final: Fraction, tau: Fraction) -> int:
    """Number of steps N = t_final / tau, which must be an integer."""
    ratio = Fraction(t_final) / Fraction(tau)
    if ratio.denominator != 1:
        raise ParameterError(f"t_final={t_final} is not a multiple of tau={tau}")
    return int(ratio)


def build_spec(config: ExperimentConfig, alpha_pair: Tuple[float, float], tau: Fraction) -> ProblemSpec:
    """Problem for one alpha pair at step tau."""
    alpha1, alpha2 = alpha_pair
    return ProblemSpec(
        alpha1=alpha1,
        alpha2=alpha2,
        coupling_a=config.effective_coupling,
        grid_m=config.grid_m,
        t_final=float(config.t_final),
        n_steps=steps_for(config.t_final, tau),
        initial=config.init,
        length=config.length,
    )


def worker_count(config: ExperimentConfig, n_jobs: int) -> int:
    """Sweep threads: config value or one per job, capped by FRAQ_THREADS."""
    wanted = config.threads or n_jobs
    return max(1, min(wanted, resolve_threads(wanted), max(n_jobs, 1)))


def field_errors(result: RunResult, reference: RunResult) -> Tuple[float, float]:
    """L2 differences of G1 and G2 at the final time."""
    h = result.spec.h
    return (
        l2_norm(result.final.g1 - reference.final.g1, h),
        l2_norm(result.final.g2 - reference.final.g2, h),
    )


def run_convergence(config: ExperimentConfig) -> List[ConvergenceReport]:
    """
    Convergence tables for every selected scheme and alpha pair.

    The reference solution is the classical scheme of each family at ref_tau,
    computed once per alpha pair and shared by the classical and fast tables.

    Args:
        config: Experiment configuration

    Returns:
        One ConvergenceReport per (alpha pair, scheme)
    """
    schemes = [TimeScheme(s) for s in config.schemes]
    reports: List[ConvergenceReport] = []

    for alpha_pair in config.alpha_pairs:
        families = sorted({SCHEME_FAMILIES[s] for s in schemes}, key=lambda f: f.value)
        references: Dict[Scheme, RunResult] = {}
        for family in families:
            logger.info(
                "Reference %s run for alphas %s at tau=%s",
                REFERENCE_SCHEMES[family].value, alpha_pair, config.ref_tau,
            )
            references[family] = run(
                build_spec(config, alpha_pair, config.ref_tau),
                REFERENCE_SCHEMES[family],
                config.kernel,
            )

        jobs = [(scheme, tau) for scheme in schemes for tau in config.taus]

        def solve(job):
            scheme, tau = job
            return run(build_spec(config, alpha_pair, tau), scheme, config.kernel)

        threads = worker_count(config, len(jobs))
        logger.info("Running %d sweep entries on %d threads", len(jobs), threads)
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = dict(zip(jobs, executor.map(solve, jobs)))

        for scheme in schemes:
            reference = references[SCHEME_FAMILIES[scheme]]
            rows = []
            for tau in config.taus:
                result = results[(scheme, tau)]
                e1, e2 = field_errors(result, reference)
                rows.append(ConvergenceRow(tau=tau, e1=e1, e2=e2, seconds=result.loop_seconds))

            rates1 = compute_rates([(r.tau, r.e1) for r in rows])
            rates2 = compute_rates([(r.tau, r.e2) for r in rows])
            for row, rate1, rate2 in zip(rows, rates1, rates2):
                row.rate1, row.rate2 = rate1, rate2
                if row is not rows[0] and (rate1 is None or rate2 is None):
                    logger.warning(
                        "%s alphas %s: zero error at tau=%s, rate left blank",
                        scheme.value, alpha_pair, row.tau,
                    )

            reports.append(
                ConvergenceReport(
                    scheme=scheme,
                    alpha1=alpha_pair[0],
                    alpha2=alpha_pair[1],
                    rows=rows,
                    metadata={
                        "reference_scheme": REFERENCE_SCHEMES[SCHEME_FAMILIES[scheme]].value,
                        "ref_tau": str(config.ref_tau),
                        "reference_seconds": reference.loop_seconds,
                    },
                )
            )
    return reports


def timing_sweep(
    config: ExperimentConfig, n_values: Optional[Sequence[int]] = None
) -> List[TimingRow]:
    """
    Time every selected scheme over a list of step counts.

    Uses the first alpha pair; t_final stays fixed so tau = t_final / N.
    Runs are sequential so timings do not compete for cores. Kernel point
    counts stay at their configured values (np_auto off) so every N uses the
    same compressed kernel size.

    Args:
        config: Experiment configuration
        n_values: Step counts; defaults to config.bench_steps

    Returns:
        TimingRow per (scheme, N)
    """
    n_values = list(n_values if n_values is not None else config.bench_steps)
    if not n_values or any(n < 1 for n in n_values):
        raise ParameterError("Step counts must be positive")
    alpha_pair = config.alpha_pairs[0]
    kernel_config = replace(config.kernel, points_auto=False)

    rows: List[TimingRow] = []
    for name in config.schemes:
        scheme = TimeScheme(name)
        for n in n_values:
            spec = build_spec(config, alpha_pair, Fraction(config.t_final) / n)
            result = run(spec, scheme, kernel_config)
            rows.append(TimingRow(scheme, n, result.loop_seconds, result.setup_seconds))
            logger.info("bench %s N=%d loop %.4fs", scheme.value, n, result.loop_seconds)
    return rows


def _fit_through_origin(x: np.ndarray, y: np.ndarray) -> Tuple[float, float]:
    c = float(np.dot(x, y) / np.dot(x, x))
    residual = float(np.sum((y - c * x) ** 2))
    total = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - residual / total if total > 0 else 1.0
    return c, r2


def fit_scaling(rows: Sequence[TimingRow]) -> Dict[TimeScheme, ScalingFit]:
    """
    Fit loop times of each scheme to c N and c N^2.

    Args:
        rows: Output of timing_sweep

    Returns:
        ScalingFit per scheme
    """
    fits: Dict[TimeScheme, ScalingFit] = {}
    for scheme in dict.fromkeys(row.scheme for row in rows):
        selected = [row for row in rows if row.scheme == scheme]
        n = np.array([row.n for row in selected], dtype=float)
        t = np.array([row.seconds_loop for row in selected], dtype=float)
        c_lin, r2_lin = _fit_through_origin(n, t)
        c_quad, r2_quad = _fit_through_origin(n**2, t)
        fits[scheme] = ScalingFit(c_lin, r2_lin, c_quad, r2_quad)
    return fits


__all__ = [
    "PRESETS",
    "ConvergenceReport",
    "ConvergenceRow",
    "ScalingFit",
    "TimingRow",
    "build_spec",
    "compute_rates",
    "fit_scaling",
    "run_convergence",
    "steps_for",
    "timing_sweep",
]

"""Pipeline orchestration: validate -> constants -> certify -> solve, plus sweeps."""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

import numpy as np

from .certify import certify, search_thresholds
from .config import RunConfig
from .constants import compute_constants
from .errors import ConfigError, GammaDomainError, TribvpError
from .nonlinear import find_solutions
from .problem import validate_hypotheses
from .report import dump_report, render_report, write_sweep_csv

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_HYPOTHESIS_FAILURE = 3
EXIT_CERTIFICATION_FAILURE = 4
EXIT_NUMERICAL_FAILURE = 5


@dataclass
class RunOutcome:
    exit_code: int
    report: dict
    message: str = ""


class _StageTimer:
    def __init__(self):
        self.stages: dict[str, float] = {}

    def time(self, name: str):
        timer = self

        class _Ctx:
            def __enter__(self):
                self.start = time.perf_counter()

            def __exit__(self, *exc):
                timer.stages[name] = time.perf_counter() - self.start
                return False

        return _Ctx()


def run(cfg: RunConfig) -> RunOutcome:
    """Execute the stages implied by cfg.mode and write artifacts to output_dir."""
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    timer = _StageTimer()
    p = cfg.problem

    with timer.time("validate"):
        hypothesis = validate_hypotheses(p, u_max=cfg.h1_u_max())
    report_kwargs = {"config_doc": cfg.to_doc(), "hypothesis": hypothesis.to_dict()}

    if not hypothesis.ok:
        report = _finish(cfg, timer, report_kwargs)
        return RunOutcome(EXIT_HYPOTHESIS_FAILURE, report, "; ".join(hypothesis.messages))

    try:
        with timer.time("constants"):
            constants = compute_constants(p)
        report_kwargs["constants"] = constants.to_dict()

        certificate = None
        thresholds = cfg.thresholds
        thresholds_source = "config" if thresholds is not None else None
        if cfg.mode in ("certify", "solve"):
            if thresholds is None and cfg.mode == "certify":
                with timer.time("search_thresholds"):
                    thresholds = search_thresholds(p, constants, cfg.search_config())
                thresholds_source = "searched"
            if thresholds is not None:
                thresholds = thresholds.with_gamma(constants.gamma)
                with timer.time("certify"):
                    certificate = certify(p, thresholds, constants, cfg.sampling_config())
                report_kwargs["certificate"] = certificate.to_dict()
            if thresholds is not None:
                report_kwargs["thresholds"] = thresholds.to_dict()
                report_kwargs["thresholds_source"] = thresholds_source

        solutions_failed_loudly = None
        if cfg.mode == "solve":
            solve_cfg = replace(cfg.solve_config(), thresholds=thresholds)
            with timer.time("solve"):
                found = find_solutions(p, solve_cfg)
            summaries = []
            for k, (result, cls) in enumerate(found):
                path = cfg.output_dir / f"solution_{k}.csv"
                result.curve.to_csv(path)
                summaries.append(
                    {
                        **cls.to_dict(),
                        "residuals": result.residuals.to_dict(),
                        "source": result.source,
                        "iterations": result.iterations,
                        "clamped_evals": result.clamped_evals,
                        "file": path.name,
                    }
                )
            report_kwargs["solutions"] = summaries

    except GammaDomainError as exc:
        report = _finish(cfg, timer, report_kwargs)
        return RunOutcome(EXIT_NUMERICAL_FAILURE, report, str(exc))
    except TribvpError as exc:
        report = _finish(cfg, timer, report_kwargs)
        return RunOutcome(EXIT_NUMERICAL_FAILURE, report, str(exc))
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        report = _finish(cfg, timer, report_kwargs)
        return RunOutcome(EXIT_NUMERICAL_FAILURE, report, str(exc))

    report = _finish(cfg, timer, report_kwargs)
    if cfg.mode == "certify":
        if certificate is None:
            return RunOutcome(EXIT_CERTIFICATION_FAILURE, report, "no certifiable thresholds found")
        if not certificate.verdict:
            return RunOutcome(EXIT_CERTIFICATION_FAILURE, report, "certificate verdict is false")
    return RunOutcome(EXIT_OK, report)


def _finish(cfg: RunConfig, timer: _StageTimer, report_kwargs: dict) -> dict:
    timing = dict(sorted(timer.stages.items())) if cfg.include_timing else None
    report = render_report(timing=timing, **report_kwargs)
    dump_report(report, cfg.output_dir / "report.json")
    return report


SWEEPABLE = ("alpha", "beta", "eta")


def parse_axis(spec: str):
    """Parse an axis spec "name:lo:hi:steps" into (name, values)."""
    parts = spec.split(":")
    if len(parts) != 4:
        raise ConfigError(f"axis spec must be name:lo:hi:steps, got {spec!r}")
    name, lo, hi, steps = parts
    if name not in SWEEPABLE:
        raise ConfigError(f"sweep axis must be one of {SWEEPABLE}, got {name!r}")
    try:
        lo_f, hi_f, n = float(lo), float(hi), int(steps)
    except ValueError as exc:
        raise ConfigError(f"malformed axis spec {spec!r}: {exc}") from exc
    if n < 1:
        raise ConfigError("axis needs at least one step")
    values = np.linspace(lo_f, hi_f, n) if n > 1 else np.array([lo_f])
    return name, values


def sweep(cfg: RunConfig, axes: list[tuple[str, np.ndarray]]) -> RunOutcome:
    """Evaluate constants (and certificates, when thresholds are set) over a grid.

    Rows that violate the admissibility bounds are emitted with verdict
    "H2-fail" instead of aborting; evaluation errors inside a row are
    reported as "error".
    """
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    axis_names = [name for name, _ in axes]
    rows = []
    for combo in _product([values for _, values in axes]):
        row = dict(zip(axis_names, combo))
        try:
            p = cfg.problem.with_params(**{name: float(v) for name, v in zip(axis_names, combo)})
            hyp = validate_hypotheses(p, u_max=cfg.h1_u_max())
            if not (hyp.h2_alpha_ok and hyp.h2_beta_ok):
                row["verdict"] = "H2-fail"
            else:
                k = compute_constants(p)
                row.update(
                    {
                        "lambda": float(k.lam),
                        "gamma": float(k.gamma),
                        "m": float(k.m),
                        "delta": float(k.delta),
                    }
                )
                if cfg.thresholds is not None:
                    cert = certify(p, cfg.thresholds.with_gamma(k.gamma), k, cfg.sampling_config())
                    row["verdict"] = "true" if cert.verdict else "false"
                else:
                    row["verdict"] = ""
        except (TribvpError, ValueError) as exc:
            row["verdict"] = "error"
            row["message"] = str(exc)
        rows.append(row)
    write_sweep_csv(cfg.output_dir / "sweep.csv", axis_names, rows)
    report = {"rows": len(rows), "axes": axis_names}
    return RunOutcome(EXIT_OK, report)


def _product(value_lists):
    if not value_lists:
        yield ()
        return
    head, *tail = value_lists
    for v in head:
        for rest in _product(tail):
            yield (float(v),) + rest

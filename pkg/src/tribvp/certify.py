"""Certification of the triple-solution sufficient conditions.

For thresholds 0 < a < b < b/gamma <= c the three growth conditions are

    D1:  f(t, u) <  m*a      on [0, T]   x [0, a]        (strict)
    D2:  f(t, u) >= b/delta  on [eta, T] x [b, b/gamma]
    D3:  f(t, u) <= m*c      on [0, T]   x [0, c]

Each box is checked by dense sampling with one refinement pass around the
worst point, so a positive verdict is sound up to the reported sampling
density; reports carry the margin, the worst point, and the sample count.
When the nonlinearity is flagged monotone in u, the u-extreme side of each
box is evaluated exactly at the relevant edge.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .constants import LWConstants
from .errors import CertificationError
from .numeric import Number, is_exact, render_number
from .problem import FLOAT_STRICTNESS_TOL, Problem


@dataclass(frozen=True)
class ThresholdTriple:
    """Solution-size thresholds (a, b, c) and the derived tail level d = b/gamma."""

    a: Number
    b: Number
    c: Number
    d: Number | None = None

    @classmethod
    def from_abc(cls, a: Number, b: Number, c: Number, gamma: Number | None = None) -> "ThresholdTriple":
        d = None if gamma is None else b / gamma
        return cls(a=a, b=b, c=c, d=d)

    def with_gamma(self, gamma: Number) -> "ThresholdTriple":
        return replace(self, d=self.b / gamma)

    def to_dict(self) -> dict:
        doc = {"a": render_number(self.a), "b": render_number(self.b), "c": render_number(self.c)}
        if self.d is not None:
            doc["d"] = render_number(self.d)
        return doc


@dataclass(frozen=True)
class SamplingConfig:
    """Box sampling density and the refinement pass around the worst point."""

    nt: int = 257
    nu: int = 257
    refine: bool = True
    refine_factor: int = 3
    refine_window: float = 0.05


@dataclass(frozen=True)
class SearchConfig:
    """Bounds and budgets for the coarse-to-fine threshold search."""

    lo: float = 1e-4
    hi: float = 1e4
    per_axis: int = 13
    max_levels: int = 8
    scan_sampling: SamplingConfig = SamplingConfig(nt=33, nu=33, refine=False)
    final_sampling: SamplingConfig = SamplingConfig()


@dataclass(frozen=True)
class ConditionReport:
    """One growth condition's outcome on its sampled box."""

    condition: str
    holds: bool
    margin: float
    bound: float
    worst_point: tuple[float, float]
    samples_used: int

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "holds": self.holds,
            "margin": self.margin,
            "bound": self.bound,
            "worst_point": list(self.worst_point),
            "samples_used": self.samples_used,
        }


@dataclass(frozen=True)
class Certificate:
    """Aggregate verdict: threshold ordering plus all three growth conditions."""

    ordering_ok: bool
    d1: ConditionReport
    d2: ConditionReport
    d3: ConditionReport

    @property
    def verdict(self) -> bool:
        return self.ordering_ok and self.d1.holds and self.d2.holds and self.d3.holds

    def to_dict(self) -> dict:
        return {
            "ordering_ok": self.ordering_ok,
            "d1": self.d1.to_dict(),
            "d2": self.d2.to_dict(),
            "d3": self.d3.to_dict(),
            "verdict": self.verdict,
        }


def check_ordering(tt: ThresholdTriple, gamma: Number) -> bool:
    """Strict 0 < a < b < b/gamma, non-strict b/gamma <= c."""
    if not 0 < float(gamma) < 1:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    exact = is_exact(tt.a, tt.b, tt.c) and isinstance(gamma, Fraction)
    tol = 0 if exact else FLOAT_STRICTNESS_TOL
    d = tt.b / gamma
    return bool(tt.a > tol and tt.b - tt.a > tol and d - tt.b > tol and tt.c >= d - tol)


def _sample_box(p: Problem, t_lo, t_hi, u_lo, u_hi, grid: SamplingConfig, want_max: bool):
    """Extremum of f over a box by grid sampling plus one local refinement."""
    f = p.f
    if f is None:
        raise CertificationError("problem has no nonlinearity to certify")
    t_lo, t_hi, u_lo, u_hi = float(t_lo), float(t_hi), float(u_lo), float(u_hi)

    def scan(ts, us):
        try:
            values = f(ts[:, None], us[None, :])
        except Exception as exc:
            t_bad, u_bad = _locate_eval_failure(f, ts, us)
            raise CertificationError(
                f"f evaluation failed near (t, u) = ({t_bad}, {u_bad}): {exc}", t=t_bad, u=u_bad
            ) from exc
        pick = np.argmax if want_max else np.argmin
        i, j = np.unravel_index(pick(values), values.shape)
        return float(values[i, j]), float(ts[i]), float(us[j]), values.size

    if f.monotone_in_u:
        # u-extreme sits on a box edge; only the t direction needs sampling.
        u_edge = u_hi if want_max else u_lo
        us = np.array([u_edge])
        ts = np.linspace(t_lo, t_hi, grid.nt)
    else:
        ts = np.linspace(t_lo, t_hi, grid.nt)
        us = np.linspace(u_lo, u_hi, grid.nu)
    best, t_star, u_star, used = scan(ts, us)

    if grid.refine:
        wt = grid.refine_window * (t_hi - t_lo)
        wu = grid.refine_window * (u_hi - u_lo)
        ts_r = np.linspace(
            max(t_lo, t_star - wt), min(t_hi, t_star + wt), grid.refine_factor * max(grid.nt // 10, 3)
        )
        if f.monotone_in_u:
            us_r = us
        else:
            us_r = np.linspace(
                max(u_lo, u_star - wu), min(u_hi, u_star + wu), grid.refine_factor * max(grid.nu // 10, 3)
            )
        cand, t_c, u_c, used_r = scan(ts_r, us_r)
        used += used_r
        better = cand > best if want_max else cand < best
        if better:
            best, t_star, u_star = cand, t_c, u_c

    return best, (t_star, u_star), used


def _locate_eval_failure(f, ts, us):
    for t in ts:
        for u in us:
            try:
                f(float(t), float(u))
            except Exception:
                return float(t), float(u)
    return float("nan"), float("nan")


def check_D1(p: Problem, m: Number, a: Number, grid: SamplingConfig = SamplingConfig()) -> ConditionReport:
    """Small-range cap: f < m*a on [0, T] x [0, a] (strict)."""
    if not float(a) > 0:
        raise ValueError("threshold a must be positive")
    bound = float(m) * float(a)
    fmax, worst, used = _sample_box(p, 0.0, p.T, 0.0, a, grid, want_max=True)
    margin = bound - fmax
    return ConditionReport("D1", holds=margin > 0, margin=margin, bound=bound, worst_point=worst, samples_used=used)


def check_D2(
    p: Problem, delta: Number, b: Number, gamma: Number, grid: SamplingConfig = SamplingConfig()
) -> ConditionReport:
    """Tail floor: f >= b/delta on [eta, T] x [b, b/gamma]."""
    if not float(b) > 0:
        raise ValueError("threshold b must be positive")
    bound = float(b) / float(delta)
    fmin, worst, used = _sample_box(p, p.eta, p.T, b, b / gamma, grid, want_max=False)
    margin = fmin - bound
    return ConditionReport("D2", holds=margin >= 0, margin=margin, bound=bound, worst_point=worst, samples_used=used)


def check_D3(p: Problem, m: Number, c: Number, grid: SamplingConfig = SamplingConfig()) -> ConditionReport:
    """Global cap: f <= m*c on [0, T] x [0, c]."""
    if not float(c) > 0:
        raise ValueError("threshold c must be positive")
    bound = float(m) * float(c)
    fmax, worst, used = _sample_box(p, 0.0, p.T, 0.0, c, grid, want_max=True)
    margin = bound - fmax
    return ConditionReport("D3", holds=margin >= 0, margin=margin, bound=bound, worst_point=worst, samples_used=used)


def certify(
    p: Problem, tt: ThresholdTriple, k: LWConstants, grid: SamplingConfig = SamplingConfig()
) -> Certificate:
    """Check the ordering and all three growth conditions; verdict is their conjunction."""
    return Certificate(
        ordering_ok=check_ordering(tt, k.gamma),
        d1=check_D1(p, k.m, tt.a, grid),
        d2=check_D2(p, k.delta, tt.b, k.gamma, grid),
        d3=check_D3(p, k.m, tt.c, grid),
    )


def _feasible_axis_points(evaluate, cfg: SearchConfig) -> list[float]:
    """Coarse-to-fine log-grid scan of one threshold axis.

    evaluate(x) returns a ConditionReport.  Each level scans per_axis points;
    if none holds, the next level zooms into the one-step bracket around the
    best relative margin.  Growth conditions depend on a single threshold
    each, so the axes can be searched independently like this.
    """
    lo_log, hi_log = np.log10(cfg.lo), np.log10(cfg.hi)
    for _ in range(cfg.max_levels + 1):
        xs = np.logspace(lo_log, hi_log, cfg.per_axis)
        reports = [evaluate(float(x)) for x in xs]
        feasible = [float(x) for x, rep in zip(xs, reports) if rep.holds]
        if feasible:
            return feasible
        rel = [rep.margin / max(abs(rep.bound), 1e-300) for rep in reports]
        best = int(np.argmax(rel))
        lo_log = np.log10(xs[max(best - 1, 0)])
        hi_log = np.log10(xs[min(best + 1, len(xs) - 1)])
        if hi_log - lo_log < 1e-15:
            break
    return []


def search_thresholds(
    p: Problem, k: LWConstants, cfg: SearchConfig = SearchConfig()
) -> ThresholdTriple | None:
    """Find a certifiable (a, b, c) by coarse-to-fine scanning; None if absent.

    Each axis is prescreened at coarse sampling density with local zooming
    (some problems admit only a narrow window, e.g. a pointwise-tight tail
    floor); candidate triples in deterministic order (a ascending,
    b ascending, c descending) are then re-validated at full density.
    """
    gamma = float(k.gamma)
    feasible_a = _feasible_axis_points(lambda a: check_D1(p, k.m, a, cfg.scan_sampling), cfg)
    if not feasible_a:
        return None
    feasible_b = _feasible_axis_points(
        lambda b: check_D2(p, k.delta, b, gamma, cfg.scan_sampling), cfg
    )
    if not feasible_b:
        return None
    feasible_c = _feasible_axis_points(lambda c: check_D3(p, k.m, c, cfg.scan_sampling), cfg)
    if not feasible_c:
        return None

    for a in feasible_a:
        for b in feasible_b:
            if b <= a:
                continue
            for c in feasible_c[::-1]:
                if c < b / gamma:
                    continue
                tt = ThresholdTriple.from_abc(a, b, c, gamma)
                if certify(p, tt, k, cfg.final_sampling).verdict:
                    return tt
    return None

"""Finding and classifying multiple positive solutions.

The solution operator A maps a candidate u to the solution of the linear
problem with load y(t) = f(t, u(t)); its fixed points are exactly the
solutions of the nonlinear problem.  Two independent routes look for them:

- Picard iteration u <- A u from a handful of constant starts (finds the
  attracting fixed points), and
- shooting: integrate the initial-value problem u'' = -f(t, u) from
  (u(0), u'(0)) = (u0, s0) with fixed-step RK4 and drive the two boundary
  residuals to zero with a damped finite-difference Newton method over a
  log-spaced grid of starts (also reaches the repelling fixed points).

Every candidate is re-verified against the discrete ODE/boundary residuals
and the cone conditions (nonnegative, concave down) before it is reported,
then classified against the thresholds (a, b, c).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .certify import ThresholdTriple
from .errors import FunctionDomainError
from .grid import SolutionCurve, interp_weights, partial_integral_weights
from .linear import (
    NONNEGATIVITY_TOL,
    ResidualReport,
    check_nonnegativity,
    residuals,
    solve_linear,
)
from .problem import Problem

# Discrete concavity allows raw second differences up to this much above zero
# (equivalently u'' <= 1e-8 / h^2), absorbing quadrature noise only.
CONCAVITY_SLACK = 1e-8


@dataclass(frozen=True)
class SolveConfig:
    """Budgets and tolerances for the multi-start solution search."""

    grid_n: int = 2049
    picard_tol: float = 1e-10
    picard_max_iter: int = 500
    residual_tol: float = 1e-8
    ode_c2: float = 100.0  # ODE residual tolerance is ode_c2 * h^2
    dedup_tol: float = 1e-4  # relative sup-norm distance that merges two solutions
    divergence_norm: float = 1e6
    blowup_limit: float = 1e9
    newton_grid: tuple[int, int] = (16, 16)
    newton_tol: float = 1e-12  # target driven by the iteration
    newton_accept_tol: float = 1e-9  # a stalled start still counts at this level
    newton_max_iter: int = 25
    newton_max_halvings: int = 20
    coarse_n: int = 257
    thresholds: ThresholdTriple | None = None

    def ode_tol(self, h: float) -> float:
        return self.ode_c2 * h * h


@dataclass(frozen=True)
class FixedPointResult:
    """One candidate fixed point with its convergence and residual diagnostics."""

    curve: SolutionCurve
    converged: bool
    iterations: int
    final_update_norm: float
    residuals: ResidualReport
    source: str = "picard"
    clamped_evals: int = 0


@dataclass(frozen=True)
class SolutionClass:
    """Size classification of one solution against thresholds (a, b, c)."""

    norm: float
    min_full: float
    min_tail: float | None
    label: str

    def to_dict(self) -> dict:
        return {
            "norm": self.norm,
            "min_full": self.min_full,
            "min_tail": self.min_tail,
            "label": self.label,
        }


class ConeCheck(NamedTuple):
    ok: bool
    violations: tuple


class ShootingResult(NamedTuple):
    r1: float
    r2: float
    curve: SolutionCurve
    clamped_evals: int
    blew_up: bool


def psi(u: SolutionCurve) -> float:
    """Minimum of u over the whole interval (a concave functional, <= sup norm)."""
    return u.min_value()


def cone_membership(u: SolutionCurve, tol: float = NONNEGATIVITY_TOL) -> ConeCheck:
    """Nonnegative and concave down, discretely: second differences <= slack."""
    violations = []
    nn = check_nonnegativity(u, tol)
    if not nn.ok:
        violations.append(("negative", nn.t_worst, nn.min_value))
    second = u.values[:-2] - 2.0 * u.values[1:-1] + u.values[2:]
    if second.size:
        idx = int(np.argmax(second))
        if second[idx] > CONCAVITY_SLACK:
            violations.append(("convex", float(u.nodes[idx + 1]), float(second[idx])))
    return ConeCheck(ok=not violations, violations=tuple(violations))


def _load_curve(p: Problem, u: SolutionCurve, count_clamps: bool = False):
    """y(t) = f(t, u(t)) on u's grid, clamping transient negative undershoots."""
    if u.min_value() < -NONNEGATIVITY_TOL:
        raise FunctionDomainError(
            f"operator input dips to {u.min_value()}, below the admissible domain"
        )
    clamped = int(np.count_nonzero(u.values < 0.0)) if count_clamps else 0
    vals = np.maximum(u.values, 0.0)
    y = p.f(u.nodes, vals)
    return SolutionCurve(u.t0, u.t1, y), clamped


def apply_operator_A(p: Problem, u: SolutionCurve) -> SolutionCurve:
    """One application of the solution operator: solve u'' + f(t, u) = 0 linearly."""
    y, _ = _load_curve(p, u)
    return solve_linear(p, y)


def picard_iterate(
    p: Problem,
    u0: SolutionCurve,
    tol: float = 1e-10,
    max_iter: int = 500,
    cfg: SolveConfig | None = None,
) -> FixedPointResult:
    """Iterate u <- A u until the sup-norm update drops below tol.

    There is no contraction guarantee, so the iteration caps at max_iter and
    stops early when the iterate norm passes the divergence threshold; a
    converged result must additionally pass the residual check.
    """
    cfg = cfg or SolveConfig(grid_n=u0.n)
    u = u0
    update = math.inf
    clamp_total = 0
    iterations = 0
    diverged = False
    for iterations in range(1, max_iter + 1):
        y, clamps = _load_curve(p, u, count_clamps=True)
        clamp_total += clamps
        au = solve_linear(p, y)
        update = float(np.max(np.abs(au.values - u.values)))
        u = au
        if u.sup_norm() > cfg.divergence_norm:
            diverged = True
            break
        if update <= tol:
            break
    y_final, _ = _load_curve(p, u)
    rep = residuals(p, u, y_final)
    ok = (
        not diverged
        and update <= tol
        and rep.within(cfg.ode_tol(u.h), cfg.residual_tol)
    )
    return FixedPointResult(
        curve=u,
        converged=ok,
        iterations=iterations,
        final_update_norm=update,
        residuals=rep,
        source="picard",
        clamped_evals=clamp_total,
    )


# --- shooting route ---------------------------------------------------------


def _integrate_batch(p: Problem, u0s: np.ndarray, s0s: np.ndarray, n: int, blowup_limit: float):
    """RK4 for u'' = -f(t, u) from many starts at once.

    Trajectories that leave [-blowup_limit, blowup_limit] (or go non-finite)
    are frozen at their last finite state and reported as dead.  u is clamped
    to zero before every f evaluation; clamp events are counted per start.
    """
    T = float(p.T)
    h = T / (n - 1)
    f = p.f
    m = u0s.size
    U = np.empty((n, m))
    u = np.array(u0s, dtype=float)
    v = np.array(s0s, dtype=float)
    U[0] = u
    clamped = np.zeros(m, dtype=int)
    dead = np.zeros(m, dtype=bool)

    def accel(t, uu):
        uu = np.where(np.isfinite(uu), uu, 0.0)
        neg = uu < 0.0
        if np.any(neg):
            clamped[neg] += 1
            uu = np.maximum(uu, 0.0)
        return -np.asarray(f(t, uu), dtype=float)

    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(n - 1):
            t = i * h
            k1u = v
            k1v = accel(t, u)
            k2u = v + 0.5 * h * k1v
            k2v = accel(t + 0.5 * h, u + 0.5 * h * k1u)
            k3u = v + 0.5 * h * k2v
            k3v = accel(t + 0.5 * h, u + 0.5 * h * k2u)
            k4u = v + h * k3v
            k4v = accel(t + h, u + h * k3u)
            new_u = u + (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
            new_v = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
            bad = ~np.isfinite(new_u) | ~np.isfinite(new_v) | (np.abs(new_u) > blowup_limit)
            if np.any(bad):
                new_u = np.where(bad, u, new_u)
                new_v = np.where(bad, v, new_v)
                dead |= bad
            u, v = new_u, new_v
            U[i + 1] = u
    return U, clamped, dead


def _boundary_residuals_batch(p: Problem, U: np.ndarray, n: int):
    T, eta, alpha, beta = p.floats()
    h = T / (n - 1)
    start, w_eta = interp_weights(n, h, eta)
    w_int = partial_integral_weights(n, h, eta)
    u_eta = w_eta @ U[start : start + 4]
    r1 = U[0] - beta * u_eta
    r2 = U[-1] - alpha * (w_int @ U)
    return r1, r2


def shooting_residual(p: Problem, u0: float, s0: float, n: int = 2049) -> ShootingResult:
    """Boundary residuals of the RK4 trajectory from (u(0), u'(0)) = (u0, s0).

    r1 = u0 - beta*u(eta), r2 = u(T) - alpha*integral_0^eta u.  A blown-up
    trajectory reports signed-infinity residuals.
    """
    U, clamped, dead = _integrate_batch(
        p, np.array([u0], dtype=float), np.array([s0], dtype=float), n, SolveConfig().blowup_limit
    )
    curve = SolutionCurve(0.0, float(p.T), U[:, 0])
    if dead[0]:
        marker = math.copysign(math.inf, U[-1, 0])
        return ShootingResult(marker, marker, curve, int(clamped[0]), True)
    r1, r2 = _boundary_residuals_batch(p, U, n)
    return ShootingResult(float(r1[0]), float(r2[0]), curve, int(clamped[0]), False)


def _newton_batch(p: Problem, u0s: np.ndarray, s0s: np.ndarray, n: int, cfg: SolveConfig):
    """Damped Newton on (u0, s0) for many starts in lockstep.

    Forward-difference Jacobians; steps that fail to reduce the residual norm
    are halved up to the configured limit, after which the start is dropped.
    Returns (u0*, s0*, final residual norms, converged mask, iterations).
    """
    x = np.stack([np.array(u0s, dtype=float), np.array(s0s, dtype=float)])
    m = x.shape[1]

    def res(xs):
        U, _, dead = _integrate_batch(p, xs[0], xs[1], n, cfg.blowup_limit)
        r1, r2 = _boundary_residuals_batch(p, U, n)
        r = np.stack([r1, r2])
        r[:, dead] = np.inf
        return r

    r = res(x)
    rnorm = np.max(np.abs(r), axis=0)
    stalled = ~np.isfinite(rnorm)
    iterations = np.zeros(m, dtype=int)

    for _ in range(cfg.newton_max_iter):
        active = (rnorm > cfg.newton_tol) & ~stalled & np.isfinite(rnorm)
        if not np.any(active):
            break
        idx = np.flatnonzero(active)
        xa = x[:, idx]
        ra = r[:, idx]
        du = 1.5e-8 * np.maximum(1.0, np.abs(xa[0]))
        ds = 1.5e-8 * np.maximum(1.0, np.abs(xa[1]))
        r_du = res(np.stack([xa[0] + du, xa[1]]))
        r_ds = res(np.stack([xa[0], xa[1] + ds]))
        j11 = (r_du[0] - ra[0]) / du
        j21 = (r_du[1] - ra[1]) / du
        j12 = (r_ds[0] - ra[0]) / ds
        j22 = (r_ds[1] - ra[1]) / ds
        det = j11 * j22 - j12 * j21
        bad_jac = ~np.isfinite(det) | (np.abs(det) < 1e-300)
        with np.errstate(divide="ignore", invalid="ignore"):
            step_u = -(j22 * ra[0] - j12 * ra[1]) / det
            step_s = -(-j21 * ra[0] + j11 * ra[1]) / det
        step_u[bad_jac] = 0.0
        step_s[bad_jac] = 0.0
        stalled[idx[bad_jac]] = True

        lam = np.ones(idx.size)
        accepted = np.zeros(idx.size, dtype=bool)
        accepted[bad_jac] = True  # nothing to do for these
        best_r = ra.copy()
        ra_norm = np.max(np.abs(ra), axis=0)
        for _halving in range(cfg.newton_max_halvings + 1):
            trying = ~accepted
            if not np.any(trying):
                break
            cand = np.stack([xa[0] + lam * step_u, xa[1] + lam * step_s])
            r_cand = res(cand[:, trying])
            cand_norm = np.max(np.abs(r_cand), axis=0)
            improved = cand_norm < ra_norm[trying]
            tr_idx = np.flatnonzero(trying)
            good = tr_idx[improved]
            xa[:, good] = cand[:, good]
            best_r[:, good] = r_cand[:, improved]
            accepted[good] = True
            lam[tr_idx[~improved]] *= 0.5
        # a start whose every damped step increased the residual keeps its
        # best point; it may still be accepted below if already good enough
        stalled[idx[~accepted]] = True

        x[:, idx] = xa
        r[:, idx] = best_r
        iterations[idx] += 1
        rnorm = np.max(np.abs(r), axis=0)

    converged = np.isfinite(rnorm) & (rnorm <= cfg.newton_accept_tol)
    return x[0], x[1], rnorm, converged, iterations


def _shooting_candidate_starts(p: Problem, cfg: SolveConfig):
    T = float(p.T)
    if cfg.thresholds is not None:
        a, c = float(cfg.thresholds.a), float(cfg.thresholds.c)
        u_lo, u_hi = 1e-4 * a, 2.0 * c
        s_hi = 2.0 * c / T
    else:
        u_lo, u_hi = 1e-6, 1e2
        s_hi = 2e2 / T
    nu, ns = cfg.newton_grid
    u_starts = np.geomspace(u_lo, u_hi, nu)
    mags = np.geomspace(s_hi * 1e-6, s_hi, max(ns // 2, 1))
    s_starts = np.concatenate([-mags[::-1], mags])
    uu, ss = np.meshgrid(u_starts, s_starts, indexing="ij")
    return uu.ravel(), ss.ravel()


def _result_from_shot(p: Problem, u0: float, s0: float, r_norm: float, iters: int, cfg: SolveConfig):
    U, clamped, dead = _integrate_batch(
        p, np.array([u0]), np.array([s0]), cfg.grid_n, cfg.blowup_limit
    )
    curve = SolutionCurve(0.0, float(p.T), U[:, 0])
    if dead[0] or curve.min_value() < -NONNEGATIVITY_TOL:
        inf = math.inf
        return FixedPointResult(
            curve=curve,
            converged=False,
            iterations=int(iters),
            final_update_norm=float(r_norm),
            residuals=ResidualReport(inf, inf, inf),
            source="shooting",
            clamped_evals=int(clamped[0]),
        )
    y, _ = _load_curve(p, curve)
    rep = residuals(p, curve, y)
    ok = rep.within(cfg.ode_tol(curve.h), cfg.residual_tol)
    return FixedPointResult(
        curve=curve,
        converged=ok,
        iterations=int(iters),
        final_update_norm=float(r_norm),
        residuals=rep,
        source="shooting",
        clamped_evals=int(clamped[0]),
    )


def shooting_solutions(p: Problem, cfg: SolveConfig) -> list[FixedPointResult]:
    """Multi-start Newton at coarse resolution, then polish survivors at full resolution."""
    u0s, s0s = _shooting_candidate_starts(p, cfg)
    u_c, s_c, _, conv, _ = _newton_batch(p, u0s, s0s, cfg.coarse_n, cfg)
    if not np.any(conv):
        return []
    # collapse coarse duplicates before the expensive full-resolution polish
    pairs = sorted(zip(u_c[conv], s_c[conv]))
    unique: list[tuple[float, float]] = []
    for u0, s0 in pairs:
        if not any(
            abs(u0 - pu) <= 1e-5 * max(1.0, abs(pu)) and abs(s0 - ps) <= 1e-5 * max(1.0, abs(ps))
            for pu, ps in unique
        ):
            unique.append((float(u0), float(s0)))
    u_arr = np.array([q[0] for q in unique])
    s_arr = np.array([q[1] for q in unique])
    u_f, s_f, rn, conv_f, iters = _newton_batch(p, u_arr, s_arr, cfg.grid_n, cfg)
    results = []
    for k in np.flatnonzero(conv_f):
        results.append(_result_from_shot(p, float(u_f[k]), float(s_f[k]), float(rn[k]), int(iters[k]), cfg))
    return [r for r in results if r.converged]


def picard_solutions(p: Problem, cfg: SolveConfig) -> list[FixedPointResult]:
    """Picard iteration from the configured constant starts."""
    T = float(p.T)
    if cfg.thresholds is not None:
        tt = cfg.thresholds
        levels = [1e-2 * float(tt.a), float(tt.a), float(tt.b)]
        if tt.d is not None:
            levels.append(float(tt.d))
        levels.append(float(tt.c))
    else:
        levels = [1e-2, 1e-1, 1.0, 10.0, 100.0]
    results = []
    for level in levels:
        start = SolutionCurve.constant(level, T, cfg.grid_n)
        try:
            result = picard_iterate(p, start, cfg.picard_tol, cfg.picard_max_iter, cfg)
        except FunctionDomainError:
            continue  # iterate left the admissible domain; not a solution path
        if result.converged:
            results.append(result)
    return results


def _dedup(results: list[FixedPointResult], dedup_tol: float) -> list[FixedPointResult]:
    """Merge near-identical curves, keeping the one with the smaller residuals."""

    def badness(r: FixedPointResult) -> float:
        rep = r.residuals
        return rep.ode_residual_max + rep.bc0_residual + rep.bcT_residual

    ordered = sorted(results, key=lambda r: (r.curve.sup_norm(), psi(r.curve), badness(r)))
    kept: list[FixedPointResult] = []
    for cand in ordered:
        merged = False
        for i, ref in enumerate(kept):
            scale = max(1.0, ref.curve.sup_norm())
            if float(np.max(np.abs(cand.curve.values - ref.curve.values))) < dedup_tol * scale:
                if badness(cand) < badness(ref):
                    kept[i] = cand
                merged = True
                break
        if not merged:
            kept.append(cand)
    return kept


def classify_solution(
    u: SolutionCurve, tt: ThresholdTriple, eta: float | None = None
) -> SolutionClass:
    """Label a solution by the three size predicates; unclassified on the edges."""
    norm = u.sup_norm()
    min_full = psi(u)
    min_tail = u.min_from(eta) if eta is not None else None
    a, b = float(tt.a), float(tt.b)
    if norm < a:
        label = "small"
    elif min_full > b:
        label = "large-min"
    elif norm > a and min_full < b:
        label = "middle"
    else:
        label = "unclassified"
    return SolutionClass(norm=norm, min_full=min_full, min_tail=min_tail, label=label)


def find_solutions(
    p: Problem, cfg: SolveConfig = SolveConfig()
) -> list[tuple[FixedPointResult, SolutionClass]]:
    """Run both routes, verify, dedup, and classify every surviving solution."""
    candidates = picard_solutions(p, cfg) + shooting_solutions(p, cfg)
    verified = [r for r in candidates if r.converged and cone_membership(r.curve).ok]
    unique = _dedup(verified, cfg.dedup_tol)
    eta = float(p.eta)
    out = []
    for result in unique:
        if cfg.thresholds is not None:
            cls = classify_solution(result.curve, cfg.thresholds, eta)
        else:
            curve = result.curve
            cls = SolutionClass(
                norm=curve.sup_norm(),
                min_full=psi(curve),
                min_tail=curve.min_from(eta),
                label="unclassified",
            )
        out.append((result, cls))
    return out

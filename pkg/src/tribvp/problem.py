"""Problem instances for u'' + f(t, u) = 0 with three-point integral conditions.

A problem couples u(0) = beta * u(eta) and u(T) = alpha * integral_0^eta u,
with 0 < eta < T.  The admissible parameter region requires
alpha < 2T/eta^2 and beta < (2T - alpha*eta^2)/(alpha*eta^2 - 2*eta + 2T);
`validate_hypotheses` checks these bounds and a sampled surrogate of the
nonnegativity/non-vanishing requirement on f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .functions import FunctionSpec
from .numeric import Number, is_exact

# Strict inequalities are checked with zero tolerance in exact-rational mode
# and this tolerance in float mode.
FLOAT_STRICTNESS_TOL = 1e-12


@dataclass(frozen=True)
class Problem:
    """One boundary-value problem instance.

    Structural constraints (positive horizon, interior eta, nonnegative
    weights) are enforced here; the sharper admissibility bounds on alpha and
    beta are reported by `validate_hypotheses` so that out-of-range configs
    can still be represented and diagnosed.
    """

    T: Number
    eta: Number
    alpha: Number
    beta: Number
    f: FunctionSpec | None = None

    def __post_init__(self):
        for name in ("T", "eta", "alpha", "beta"):
            value = getattr(self, name)
            if not math.isfinite(float(value)):
                raise ValueError(f"{name} must be finite, got {value}")
        if not float(self.T) > 0:
            raise ValueError(f"T must be positive, got {self.T}")
        if not 0 < float(self.eta) < float(self.T):
            raise ValueError(f"eta must lie strictly inside (0, T), got {self.eta}")
        if not float(self.alpha) > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if float(self.beta) < 0:
            raise ValueError(f"beta must be nonnegative, got {self.beta}")

    @property
    def exact(self) -> bool:
        return is_exact(self.T, self.eta, self.alpha, self.beta)

    def floats(self) -> tuple[float, float, float, float]:
        return float(self.T), float(self.eta), float(self.alpha), float(self.beta)

    def alpha_upper(self) -> Number:
        return 2 * self.T / (self.eta * self.eta)

    def beta_upper(self) -> Number:
        num = 2 * self.T - self.alpha * self.eta * self.eta
        den = self.alpha * self.eta * self.eta - 2 * self.eta + 2 * self.T
        return num / den

    def with_params(self, **overrides) -> "Problem":
        fields = {"T": self.T, "eta": self.eta, "alpha": self.alpha, "beta": self.beta, "f": self.f}
        fields.update(overrides)
        return Problem(**fields)


@dataclass(frozen=True)
class HypothesisReport:
    """Outcome of the admissibility checks for one problem."""

    h2_alpha_ok: bool
    h2_beta_ok: bool
    h1_sampled_ok: bool
    messages: tuple = ()

    @property
    def ok(self) -> bool:
        return self.h2_alpha_ok and self.h2_beta_ok and self.h1_sampled_ok

    def to_dict(self) -> dict:
        return {
            "h2_alpha_ok": self.h2_alpha_ok,
            "h2_beta_ok": self.h2_beta_ok,
            "h1_sampled_ok": self.h1_sampled_ok,
            "ok": self.ok,
            "messages": list(self.messages),
        }


def validate_hypotheses(
    p: Problem, u_max: float | None = None, sample_shape: tuple[int, int] = (64, 64)
) -> HypothesisReport:
    """Check the parameter bounds and a sampled surrogate of the f-hypothesis.

    The bound checks are strict: zero tolerance when the parameters are exact
    rationals, 1e-12 otherwise.  The f check samples a grid over
    [0, T] x [0, u_max] (default u_max = 10) and requires f >= 0 everywhere
    and f > 0 somewhere; this is a sampled surrogate for "does not vanish on
    a set of positive measure", which no finite sample can decide.
    """
    tol = 0 if p.exact else FLOAT_STRICTNESS_TOL
    messages = []

    alpha_bound = p.alpha_upper()
    h2_alpha_ok = bool(p.alpha > tol and p.alpha < alpha_bound - tol)
    if not h2_alpha_ok:
        messages.append(
            f"alpha = {float(p.alpha)} violates 0 < alpha < 2T/eta^2 = {float(alpha_bound)}"
        )

    structural = p.alpha * p.eta * p.eta - 2 * p.eta + 2 * p.T
    # Positive whenever alpha > 0 and eta < T; asserted for safety.
    assert float(structural) > 0, "alpha*eta^2 - 2*eta + 2T must be positive"

    beta_bound = p.beta_upper()
    h2_beta_ok = bool(p.beta > tol and p.beta < beta_bound - tol)
    if not h2_beta_ok:
        messages.append(
            f"beta = {float(p.beta)} violates 0 < beta < "
            f"(2T - alpha*eta^2)/(alpha*eta^2 - 2*eta + 2T) = {float(beta_bound)}"
        )

    h1_sampled_ok, h1_messages = _sample_f(p, u_max, sample_shape)
    messages.extend(h1_messages)

    return HypothesisReport(
        h2_alpha_ok=h2_alpha_ok,
        h2_beta_ok=h2_beta_ok,
        h1_sampled_ok=h1_sampled_ok,
        messages=tuple(messages),
    )


def _sample_f(p: Problem, u_max: float | None, sample_shape: tuple[int, int]):
    if p.f is None:
        return False, ("no nonlinearity configured",)
    u_hi = 10.0 if u_max is None else float(u_max)
    ts = np.linspace(0.0, float(p.T), sample_shape[0])
    us = np.linspace(0.0, u_hi, sample_shape[1])
    try:
        values = p.f(ts[:, None], us[None, :])
    except Exception as exc:  # report the offending point when possible
        t_bad, u_bad = _locate_failure(p.f, ts, us)
        return False, (f"f evaluation failed near (t, u) = ({t_bad}, {u_bad}): {exc}",)
    if not np.all(np.isfinite(values)):
        i, j = np.argwhere(~np.isfinite(values))[0]
        return False, (f"f is not finite at (t, u) = ({ts[i]}, {us[j]})",)
    if np.min(values) < 0:
        i, j = np.unravel_index(np.argmin(values), values.shape)
        return False, (f"f is negative at (t, u) = ({ts[i]}, {us[j]}): {values[i, j]}",)
    if not np.any(values > 0):
        return False, ("f vanishes identically on the sample grid",)
    return True, ()


def _locate_failure(f, ts, us):
    for t in ts:
        for u in us:
            try:
                f(float(t), float(u))
            except Exception:
                return float(t), float(u)
    return float("nan"), float("nan")


def lambda_constant(p: Problem) -> Number:
    """Structural constant (2T - alpha*eta^2) - beta*(alpha*eta^2 - 2*eta + 2T).

    Positive exactly on the admissible parameter region; it is the canonical
    denominator for the closed-form linear solve (whose textbook form carries
    the opposite sign).
    """
    ae2 = p.alpha * p.eta * p.eta
    return (2 * p.T - ae2) - p.beta * (ae2 - 2 * p.eta + 2 * p.T)

"""The certification constants gamma, m, delta derived from a problem's parameters.

All three are plain rational expressions in (T, eta, alpha, beta), so they are
computed exactly when the problem carries Fractions and in double precision
otherwise.

- gamma: the cone compression ratio; the guaranteed fraction of the sup norm
  that any solution of the linear problem retains on [eta, T].
- m: the growth-cap scale; bounding f by m*c keeps the solution operator's
  image inside the radius-c ball.
- delta: the growth-floor scale; f >= b/delta on the tail box pushes the
  minimum of the image above b.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import GammaDomainError
from .numeric import Number, render_number
from .problem import Problem, lambda_constant


@dataclass(frozen=True)
class LWConstants:
    """Certification constants for one problem, with min-term bookkeeping."""

    lam: Number
    gamma: Number
    m: Number
    delta: Number
    gamma_argmin: int
    delta_argmin: int

    def to_dict(self) -> dict:
        def entry(value):
            doc = {"decimal": float(value)}
            if isinstance(value, Fraction):
                doc["fraction"] = render_number(value)
            return doc

        return {
            "lambda": entry(self.lam),
            "gamma": entry(self.gamma),
            "m": entry(self.m),
            "delta": entry(self.delta),
            "gamma_argmin": self.gamma_argmin,
            "delta_argmin": self.delta_argmin,
        }


def gamma_terms(p: Problem) -> list[Number]:
    """The three candidate compression ratios; the constant is their minimum."""
    ab1 = p.alpha * (p.beta + 1)
    third_den = 2 * p.T - ab1 * p.eta * p.eta
    if float(third_den) <= 0:
        raise GammaDomainError(third_den)
    return [
        p.eta / p.T,
        ab1 * p.eta * p.eta / (2 * p.T),
        ab1 * p.eta * (p.T - p.eta) / third_den,
    ]


def gamma(p: Problem) -> Number:
    return min(gamma_terms(p))


def m_constant(p: Problem) -> Number:
    lam = lambda_constant(p)
    growth = p.T * p.T * (
        2 * p.T * (p.beta + 1) + p.beta * p.eta * (p.alpha * p.eta + 2) + p.alpha * p.beta * p.T * p.T
    )
    return 2 * lam / growth


def delta_terms(p: Problem) -> list[Number]:
    lam = lambda_constant(p)
    tail = (p.T - p.eta) * (p.T - p.eta)
    return [
        p.beta * p.eta * tail / lam,
        p.alpha * p.eta * p.eta * (1 + p.beta) * tail / (2 * lam),
    ]


def delta_constant(p: Problem) -> Number:
    return min(delta_terms(p))


def _argmin(terms: list[Number]) -> int:
    # ties resolve to the lowest index
    best = 0
    for i, term in enumerate(terms[1:], start=1):
        if term < terms[best]:
            best = i
    return best


def compute_constants(p: Problem) -> LWConstants:
    g_terms = gamma_terms(p)
    d_terms = delta_terms(p)
    return LWConstants(
        lam=lambda_constant(p),
        gamma=min(g_terms),
        m=m_constant(p),
        delta=min(d_terms),
        gamma_argmin=_argmin(g_terms),
        delta_argmin=_argmin(d_terms),
    )

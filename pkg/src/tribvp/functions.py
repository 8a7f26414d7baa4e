"""Catalog of nonlinearities f(t, u).

A closed set of forms covers every problem instance and test in this package;
there is deliberately no expression parser.  Each spec evaluates on scalars
(exactly, when the inputs and parameters are Fractions) and on numpy arrays
(double precision, broadcasting over t and u).

All specs must be nonnegative for t in [0, T], u >= 0, and piecewise forms
must be continuous at their breakpoints; both are checked at construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import FunctionDomainError, FunctionSpecError
from .numeric import Number, is_exact, parse_number, render_number

# Below this, a negative u is treated as a domain violation rather than noise.
NEGATIVE_U_TOL = 1e-10

# Continuity requirement at piecewise breakpoints.
BREAKPOINT_TOL = 1e-9


def _check_u_domain(u):
    umin = np.min(u) if np.ndim(u) else u
    if umin < -NEGATIVE_U_TOL:
        raise FunctionDomainError(f"f evaluated at u = {umin}, below domain [0, inf)")


def _clip_u(u):
    if np.ndim(u):
        return np.maximum(u, 0.0)
    return max(u, type(u)(0))


@dataclass(frozen=True)
class FunctionSpec:
    """Base class: a nonnegative continuous nonlinearity f(t, u)."""

    monotone_in_u: bool = field(default=False, kw_only=True)

    kind = "abstract"

    def __call__(self, t, u):
        _check_u_domain(u)
        return self._value(t, _clip_u(u))

    def _value(self, t, u):
        raise NotImplementedError

    def to_config(self) -> dict:
        raise NotImplementedError

    def _base_config(self) -> dict:
        doc = {"kind": self.kind}
        if self.monotone_in_u:
            doc["monotone_in_u"] = True
        return doc


def eval_f(spec: FunctionSpec, t, u):
    """Evaluate a nonlinearity; exact when spec params, t and u are rational."""
    return spec(t, u)


@dataclass(frozen=True)
class RationalSigmoid(FunctionSpec):
    """Autonomous f(u) = scale * u^2 / (u^2 + 1); increasing, sup = scale."""

    scale: Number = 1

    kind = "autonomous-rational-sigmoid"

    def _value(self, t, u):
        if isinstance(u, Fraction) and is_exact(self.scale):
            uu = u * u
            return self.scale * uu / (uu + 1)
        u = np.asarray(u, dtype=float) if np.ndim(u) else float(u)
        uu = u * u
        return float(self.scale) * uu / (uu + 1.0)

    def to_config(self):
        return {**self._base_config(), "params": [render_number(self.scale)]}


@dataclass(frozen=True)
class ConstantF(FunctionSpec):
    """f(t, u) = c.  c = 0 is allowed for tests but fails the sampled H1 check."""

    value: Number = 0

    kind = "constant"

    def _value(self, t, u):
        if np.ndim(u) or np.ndim(t):
            return np.broadcast_to(float(self.value), np.broadcast_shapes(np.shape(t), np.shape(u))).copy()
        return self.value if isinstance(u, Fraction) else float(self.value)

    def to_config(self):
        return {**self._base_config(), "params": [render_number(self.value)]}


@dataclass(frozen=True)
class PolynomialU(FunctionSpec):
    """Autonomous polynomial in u: coeffs[0] + coeffs[1]*u + ..."""

    coeffs: tuple = (0,)

    kind = "polynomial"

    def _value(self, t, u):
        if isinstance(u, Fraction) and is_exact(*self.coeffs):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * u + c
            return acc
        u = np.asarray(u, dtype=float) if np.ndim(u) else float(u)
        acc = np.zeros_like(u) if np.ndim(u) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * u + float(c)
        if np.ndim(t) and not np.ndim(acc):
            acc = np.broadcast_to(acc, np.shape(t)).copy()
        return acc

    def to_config(self):
        return {**self._base_config(), "params": [render_number(c) for c in self.coeffs]}


# --- piecewise machinery -------------------------------------------------

_PIECE_FORMS = ("linear", "constant", "rational-linear")


@dataclass(frozen=True)
class Piece:
    """One branch of a piecewise definition in u.

    `until` is the right breakpoint (None for the final, unbounded branch).
    Forms: linear [A, B] -> A*u + B; constant [C]; rational-linear
    [a1, a0, b1, b0] -> (a1*u + a0)/(b1*u + b0).
    """

    until: Number | None
    form: str
    params: tuple

    def evaluate(self, u):
        exact = isinstance(u, Fraction) and is_exact(*self.params)
        p = self.params if exact else tuple(float(x) for x in self.params)
        if not exact and np.ndim(u) == 0:
            u = float(u)
        if self.form == "linear":
            return p[0] * u + p[1]
        if self.form == "constant":
            if np.ndim(u):
                return np.full_like(np.asarray(u, dtype=float), p[0])
            return p[0]
        if self.form == "rational-linear":
            a1, a0, b1, b0 = p
            return (a1 * u + a0) / (b1 * u + b0)
        raise FunctionSpecError(f"unknown piece form {self.form!r}")

    def to_config(self):
        return {
            "until": None if self.until is None else render_number(self.until),
            "form": self.form,
            "params": [render_number(x) for x in self.params],
        }


def _validate_pieces(pieces: tuple[Piece, ...]):
    if not pieces:
        raise FunctionSpecError("piecewise definition needs at least one branch")
    if pieces[-1].until is not None:
        raise FunctionSpecError("final branch must be unbounded (until = null)")
    breakpoints = [p.until for p in pieces[:-1]]
    if any(b is None for b in breakpoints):
        raise FunctionSpecError("only the final branch may be unbounded")
    for left, right in zip(breakpoints, breakpoints[1:]):
        if not right > left:
            raise FunctionSpecError(
                f"breakpoints must be strictly ascending, got {left} then {right}"
            )
    for i, b in enumerate(breakpoints):
        lo = pieces[i].evaluate(b if isinstance(b, Fraction) else float(b))
        hi = pieces[i + 1].evaluate(b if isinstance(b, Fraction) else float(b))
        if abs(float(lo) - float(hi)) > BREAKPOINT_TOL:
            raise FunctionSpecError(
                f"discontinuity at breakpoint u = {b}: "
                f"left branch gives {float(lo)!r}, right branch gives {float(hi)!r}"
            )


def _piecewise_eval(pieces: tuple[Piece, ...], u):
    # Branch membership is [x_i, x_{i+1}); continuity makes the edge choice moot.
    if np.ndim(u) == 0:
        for piece in pieces[:-1]:
            if u < piece.until:
                return piece.evaluate(u)
        return pieces[-1].evaluate(u)
    u = np.asarray(u, dtype=float)
    conditions = [u < float(p.until) for p in pieces[:-1]]
    values = [p.evaluate(u) for p in pieces]
    return np.select(conditions, values[:-1], default=values[-1])


@dataclass(frozen=True)
class PiecewiseU(FunctionSpec):
    """Autonomous piecewise function of u with linear/constant/rational branches."""

    pieces: tuple = ()

    kind = "piecewise"

    def __post_init__(self):
        _validate_pieces(self.pieces)

    def _value(self, t, u):
        out = _piecewise_eval(self.pieces, u)
        if np.ndim(t) and not np.ndim(out):
            out = np.broadcast_to(out, np.shape(t)).copy()
        return out

    def to_config(self):
        return {**self._base_config(), "pieces": [p.to_config() for p in self.pieces]}


@dataclass(frozen=True)
class PiecewiseLinearTable(FunctionSpec):
    """Piecewise-linear interpolation of (u_i, v_i) pairs, constant beyond the last."""

    table: tuple = ()

    kind = "piecewise-linear-table"

    def __post_init__(self):
        if len(self.table) < 2:
            raise FunctionSpecError("piecewise-linear table needs at least two points")
        us = [p[0] for p in self.table]
        for left, right in zip(us, us[1:]):
            if not right > left:
                raise FunctionSpecError("table abscissae must be strictly ascending")

    def _value(self, t, u):
        us = np.array([float(p[0]) for p in self.table])
        vs = np.array([float(p[1]) for p in self.table])
        out = np.interp(np.asarray(u, dtype=float), us, vs)
        if np.ndim(u) == 0:
            out = float(out)
        if np.ndim(t) and not np.ndim(out):
            out = np.broadcast_to(out, np.shape(t)).copy()
        return out

    def to_config(self):
        flat = []
        for point in self.table:
            flat.extend([render_number(point[0]), render_number(point[1])])
        return {**self._base_config(), "params": flat}


# --- time factors and products -------------------------------------------


@dataclass(frozen=True)
class TimeFactor:
    kind = "abstract"

    def evaluate(self, t):
        raise NotImplementedError

    def to_config(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ExpDecay(TimeFactor):
    """exp(-rate * t)."""

    rate: Number = 1

    kind = "exp-decay"

    def evaluate(self, t):
        if np.ndim(t):
            return np.exp(-float(self.rate) * np.asarray(t, dtype=float))
        return math.exp(-float(self.rate) * float(t))

    def to_config(self):
        return {"kind": self.kind, "params": [render_number(self.rate)]}


@dataclass(frozen=True)
class PolynomialT(TimeFactor):
    coeffs: tuple = (1,)

    kind = "polynomial"

    def evaluate(self, t):
        t = np.asarray(t, dtype=float) if np.ndim(t) else float(t)
        acc = np.zeros_like(t) if np.ndim(t) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + float(c)
        return acc

    def to_config(self):
        return {"kind": self.kind, "params": [render_number(c) for c in self.coeffs]}


@dataclass(frozen=True)
class ProductF(FunctionSpec):
    """f(t, u) = time_factor(t) * u_factor(u)."""

    time_factor: TimeFactor = None
    u_factor: FunctionSpec = None

    kind = "product"

    def _value(self, t, u):
        return self.time_factor.evaluate(t) * float_if_fraction(self.u_factor._value(t, u))

    def to_config(self):
        return {
            **self._base_config(),
            "time": self.time_factor.to_config(),
            "u": self.u_factor.to_config(),
        }


@dataclass(frozen=True)
class SeparableExpPiecewise(FunctionSpec):
    """f(t, u) = exp(-rate * t) * h(u) with piecewise h."""

    rate: Number = 1
    pieces: tuple = ()

    kind = "separable-exponential-piecewise"

    def __post_init__(self):
        _validate_pieces(self.pieces)

    def _value(self, t, u):
        decay = (
            np.exp(-float(self.rate) * np.asarray(t, dtype=float))
            if np.ndim(t)
            else math.exp(-float(self.rate) * float(t))
        )
        return decay * float_if_fraction(_piecewise_eval(self.pieces, u))

    def u_profile(self, u):
        """The u-dependent factor h(u) alone; exact for Fraction input."""
        return _piecewise_eval(self.pieces, u)

    def to_config(self):
        return {
            **self._base_config(),
            "params": [render_number(self.rate)],
            "pieces": [p.to_config() for p in self.pieces],
        }


def float_if_fraction(x):
    return float(x) if isinstance(x, Fraction) else x


# --- parsing ---------------------------------------------------------------


def _parse_pieces(doc_pieces) -> tuple[Piece, ...]:
    pieces = []
    for frag in doc_pieces:
        form = frag.get("form")
        if form not in _PIECE_FORMS:
            raise FunctionSpecError(f"unknown piece form {form!r}")
        until = frag.get("until")
        pieces.append(
            Piece(
                until=None if until is None else parse_number(until),
                form=form,
                params=tuple(parse_number(x) for x in frag.get("params", [])),
            )
        )
    return tuple(pieces)


def parse_function_spec(doc: dict, t_max: float = 1.0, u_max: float = 10.0) -> FunctionSpec:
    """Build a FunctionSpec from a config fragment and run construction checks.

    Rejects unknown kinds, discontinuous piecewise tables, and any spec that
    samples negative on a 128x128 grid over [0, t_max] x [0, u_max].
    """
    if not isinstance(doc, dict) or "kind" not in doc:
        raise FunctionSpecError(f"function spec must be an object with a 'kind': {doc!r}")
    kind = doc["kind"]
    monotone = bool(doc.get("monotone_in_u", False))
    params = [parse_number(x) for x in doc.get("params", [])]

    if kind == "autonomous-rational-sigmoid":
        if len(params) != 1:
            raise FunctionSpecError("autonomous-rational-sigmoid takes params [scale]")
        spec = RationalSigmoid(scale=params[0], monotone_in_u=monotone)
    elif kind == "constant":
        if len(params) != 1:
            raise FunctionSpecError("constant takes params [value]")
        spec = ConstantF(value=params[0], monotone_in_u=monotone)
    elif kind == "polynomial":
        if not params:
            raise FunctionSpecError("polynomial needs at least one coefficient")
        spec = PolynomialU(coeffs=tuple(params), monotone_in_u=monotone)
    elif kind == "piecewise":
        spec = PiecewiseU(pieces=_parse_pieces(doc.get("pieces", [])), monotone_in_u=monotone)
    elif kind == "piecewise-linear-table":
        if len(params) < 4 or len(params) % 2:
            raise FunctionSpecError("piecewise-linear-table params are flattened (u, v) pairs")
        table = tuple((params[i], params[i + 1]) for i in range(0, len(params), 2))
        spec = PiecewiseLinearTable(table=table, monotone_in_u=monotone)
    elif kind == "separable-exponential-piecewise":
        if len(params) != 1:
            raise FunctionSpecError("separable-exponential-piecewise takes params [rate]")
        spec = SeparableExpPiecewise(
            rate=params[0], pieces=_parse_pieces(doc.get("pieces", [])), monotone_in_u=monotone
        )
    elif kind == "product":
        time_doc = doc.get("time")
        u_doc = doc.get("u")
        if not time_doc or not u_doc:
            raise FunctionSpecError("product takes 'time' and 'u' factor specs")
        tkind = time_doc.get("kind")
        tparams = [parse_number(x) for x in time_doc.get("params", [])]
        if tkind == "exp-decay":
            tf = ExpDecay(rate=tparams[0])
        elif tkind == "polynomial":
            tf = PolynomialT(coeffs=tuple(tparams))
        elif tkind == "constant":
            tf = PolynomialT(coeffs=(tparams[0],))
        else:
            raise FunctionSpecError(f"unknown time-factor kind {tkind!r}")
        spec = ProductF(time_factor=tf, u_factor=parse_function_spec(u_doc, t_max, u_max),
                        monotone_in_u=monotone)
    else:
        raise FunctionSpecError(f"unknown function kind {kind!r}")

    _construction_sample_check(spec, t_max, u_max)
    return spec


def _construction_sample_check(spec: FunctionSpec, t_max: float, u_max: float, n: int = 128):
    ts = np.linspace(0.0, float(t_max), n)
    us = np.linspace(0.0, float(u_max), n)
    values = spec(ts[:, None], us[None, :])
    if np.min(values) < 0.0:
        i, j = np.unravel_index(np.argmin(values), values.shape)
        raise FunctionSpecError(
            f"nonlinearity is negative at (t, u) = ({ts[i]}, {us[j]}): {values[i, j]}"
        )

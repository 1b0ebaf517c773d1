"""Analytic building blocks: the log-integral pair and the error-bound families.

The intensity measure used throughout the package is ``alpha * Li + beta * F``
where ``Li(x) = int_2^x dt/log(t)`` and ``F`` is one of four error-bound
integrals selected by :class:`ErrorBoundModel`:

* ``RH_SQRT``   -- ``sqrt(x) * log(x)``, the square-root-barrier bound.
* ``RH_EPS``    -- ``x**(1/2 + eps)`` for a fixed ``0 < eps < 1/2``.
* ``X_OVER_LOG``-- ``x / log(x)``, the leading prime-counting term itself.
* ``MT``        -- ``x * (log x)**(-3/4) * exp(-sqrt(log(x) / 6.315))``, the
  sharpest explicit unconditional bound on ``|pi(x) - Li(x)|`` (up to its
  multiplicative constant, which is deliberately omitted).

Every ``F`` handed to callers by :func:`error_integral` is anchored at 2
(``F(2) == 0``) so that stage sums over consecutive primes telescope exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expi

from .errors import DomainError

__all__ = [
    "Variant",
    "ErrorBoundModel",
    "IntensityParams",
    "RH_SQRT",
    "X_OVER_LOG",
    "MT",
    "rh_eps",
    "li",
    "Li",
    "error_integral",
    "error_integral_raw",
    "error_density",
    "log_error_integral_raw",
    "log_error_density",
    "positive_density_floor",
    "MT_DECAY_CONSTANT",
]

#: Denominator inside the MT exponential decay term.
MT_DECAY_CONSTANT = 6.315

_LOG2 = math.log(2.0)
_EXPI_LOG2 = float(expi(_LOG2))
_E = math.e


class Variant(enum.Enum):
    """The four supported error-bound shapes."""

    RH_SQRT = "rh-sqrt"
    RH_EPS = "rh-eps"
    X_OVER_LOG = "x-over-log"
    MT = "mt"


@dataclass(frozen=True)
class ErrorBoundModel:
    """Choice of error integral ``F`` (and its density ``f = dF/dx``).

    ``epsilon`` is meaningful only for the ``RH_EPS`` variant, where it must
    satisfy ``0 < epsilon < 1/2``.
    """

    variant: Variant
    epsilon: float | None = None

    def __post_init__(self) -> None:
        if self.variant is Variant.RH_EPS:
            if self.epsilon is None or not (0.0 < self.epsilon < 0.5):
                raise DomainError(
                    f"RH_EPS requires 0 < epsilon < 1/2, got {self.epsilon!r}"
                )
        elif self.epsilon is not None:
            raise DomainError(f"epsilon is only meaningful for RH_EPS, got {self.variant}")

    @property
    def label(self) -> str:
        """Stable text form, e.g. ``rh-sqrt`` or ``rh-eps:0.1``."""
        if self.variant is Variant.RH_EPS:
            return f"rh-eps:{self.epsilon:g}"
        return self.variant.value

    @classmethod
    def parse(cls, text: str) -> "ErrorBoundModel":
        """Inverse of :attr:`label`; accepts ``rh-eps:<eps>`` syntax."""
        text = text.strip().lower()
        if text.startswith("rh-eps"):
            _, _, tail = text.partition(":")
            if not tail:
                raise DomainError("rh-eps needs an epsilon, e.g. rh-eps:0.1")
            return cls(Variant.RH_EPS, float(tail))
        for variant in Variant:
            if variant is not Variant.RH_EPS and text == variant.value:
                return cls(variant)
        raise DomainError(f"unknown error-bound model {text!r}")


RH_SQRT = ErrorBoundModel(Variant.RH_SQRT)
X_OVER_LOG = ErrorBoundModel(Variant.X_OVER_LOG)
MT = ErrorBoundModel(Variant.MT)


def rh_eps(epsilon: float) -> ErrorBoundModel:
    """The ``x**(1/2 + epsilon)`` error-bound model."""
    return ErrorBoundModel(Variant.RH_EPS, epsilon)


@dataclass(frozen=True)
class IntensityParams:
    """Coefficients of the two intensity components.

    ``alpha`` must be strictly positive.  ``beta`` may be zero (the pure
    log-integral process); a negative value is rejected.
    """

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (self.alpha > 0.0):
            raise DomainError(f"alpha must be > 0, got {self.alpha}")
        if not (self.beta >= 0.0):
            raise DomainError(f"beta must be >= 0, got {self.beta}")


def _check_min(x, lo: float, *, strict: bool, what: str):
    arr = np.asarray(x, dtype=float)
    bad = (arr <= lo) if strict else (arr < lo)
    if np.any(bad):
        op = ">" if strict else ">="
        raise DomainError(f"{what} requires x {op} {lo:g}")
    return arr


def _ret(x_in, value):
    """Return a float for scalar input, an ndarray otherwise."""
    if np.ndim(x_in) == 0:
        return float(value)
    return value


def li(x):
    """Reciprocal-log density ``1 / log(x)`` for ``x > 1``."""
    arr = _check_min(x, 1.0, strict=True, what="li")
    return _ret(x, 1.0 / np.log(arr))


def Li(x):
    """Offset logarithmic integral ``int_2^x dt / log(t)`` for ``x >= 2``.

    Evaluated through the exponential integral, ``Ei(log x) - Ei(log 2)``,
    which agrees with adaptive quadrature to well below 1e-10 relative.
    """
    arr = _check_min(x, 2.0, strict=False, what="Li")
    return _ret(x, expi(np.log(arr)) - _EXPI_LOG2)


def error_integral_raw(model: ErrorBoundModel, x):
    """The un-anchored closed form of ``F`` (no subtraction at 2).

    Valid for ``x > 1``; prefer :func:`error_integral` in anything that sums
    stage contributions, which is anchored so ``F(2) == 0``.
    """
    arr = _check_min(x, 1.0, strict=True, what="error_integral_raw")
    v = model.variant
    if v is Variant.RH_SQRT:
        out = np.sqrt(arr) * np.log(arr)
    elif v is Variant.RH_EPS:
        out = arr ** (0.5 + model.epsilon)
    elif v is Variant.X_OVER_LOG:
        out = arr / np.log(arr)
    else:  # MT
        lg = np.log(arr)
        out = arr * lg ** (-0.75) * np.exp(-np.sqrt(lg / MT_DECAY_CONSTANT))
    return _ret(x, out)


def error_integral(model: ErrorBoundModel, x):
    """``F(x) - F(2)`` for ``x >= 2`` (anchored so stage sums telescope)."""
    arr = _check_min(x, 2.0, strict=False, what="error_integral")
    return _ret(x, error_integral_raw(model, arr) - error_integral_raw(model, 2.0))


def error_density(model: ErrorBoundModel, x):
    """Exact derivative ``f = dF/dx`` for ``x >= 2``.

    The ``X_OVER_LOG`` density ``(log x - 1) / (log x)**2`` is negative below
    ``e``; evaluating it there raises instead of silently returning a
    negative hazard.  The MT density is likewise negative just above 2 and is
    returned exactly; see :func:`positive_density_floor` for the first prime
    at which each density is safe to use as a mixture coefficient.
    """
    arr = _check_min(x, 2.0, strict=False, what="error_density")
    v = model.variant
    if v is Variant.RH_SQRT:
        out = (0.5 * np.log(arr) + 1.0) / np.sqrt(arr)
    elif v is Variant.RH_EPS:
        out = (0.5 + model.epsilon) * arr ** (model.epsilon - 0.5)
    elif v is Variant.X_OVER_LOG:
        if np.any(arr <= _E):
            raise DomainError("X_OVER_LOG density is not positive below e")
        lg = np.log(arr)
        out = (lg - 1.0) / lg**2
    else:  # MT
        lg = np.log(arr)
        out = error_integral_raw(model, arr) * (
            1.0 / arr
            - 0.75 / (arr * lg)
            - 1.0 / (2.0 * arr * np.sqrt(MT_DECAY_CONSTANT * lg))
        )
    return _ret(x, out)


def positive_density_floor(model: ErrorBoundModel) -> int:
    """Smallest prime at which ``error_density`` is strictly positive.

    2 for the power-law variants; 3 for ``X_OVER_LOG`` (negative below ``e``)
    and ``MT`` (negative below roughly 2.57).
    """
    if model.variant in (Variant.X_OVER_LOG, Variant.MT):
        return 3
    return 2


# ---------------------------------------------------------------------------
# Scalar log-space forms.  These are the hot path of the TMCMC targets, so
# they stay on the math module and avoid array dispatch.
# ---------------------------------------------------------------------------


def log_error_integral_raw(model: ErrorBoundModel, x: float) -> float:
    """``log F_raw(x)`` for scalar ``x > 1``."""
    if x <= 1.0:
        raise DomainError("log_error_integral_raw requires x > 1")
    v = model.variant
    lg = math.log(x)
    if v is Variant.RH_SQRT:
        return 0.5 * lg + math.log(lg)
    if v is Variant.RH_EPS:
        return (0.5 + model.epsilon) * lg
    if v is Variant.X_OVER_LOG:
        return lg - math.log(lg)
    return lg - 0.75 * math.log(lg) - math.sqrt(lg / MT_DECAY_CONSTANT)


def log_error_density(model: ErrorBoundModel, x: float) -> float:
    """``log f(x)`` for scalar ``x``, raising where the density is <= 0."""
    if x < 2.0:
        raise DomainError("log_error_density requires x >= 2")
    v = model.variant
    lg = math.log(x)
    if v is Variant.RH_SQRT:
        return math.log(0.5 * lg + 1.0) - 0.5 * lg
    if v is Variant.RH_EPS:
        return math.log(0.5 + model.epsilon) + (model.epsilon - 0.5) * lg
    if v is Variant.X_OVER_LOG:
        if x <= _E:
            raise DomainError("X_OVER_LOG density is not positive below e")
        return math.log(lg - 1.0) - 2.0 * math.log(lg)
    slope = 1.0 - 0.75 / lg - 0.5 / math.sqrt(MT_DECAY_CONSTANT * lg)
    if slope <= 0.0:
        raise DomainError(f"MT density is not positive at x={x:g}")
    return log_error_integral_raw(model, x) - lg + math.log(slope)

"""Stage-wise recursive posterior over the two intensity coefficients.

Feeding the ascending primes one at a time, each stage's posterior (with both
shape parameters advanced by one) becomes the next stage's prior, so the
posterior after k primes stays a two-component mixture of gamma-product
densities no matter how large k grows.  The accumulated sufficient statistics
telescope: the alpha-rate is ``a + Li(t_k)`` and the beta-rate is
``b + F(t_k)`` for the chosen error-bound integral F.

The posterior trajectory across checkpoints is the package's diagnostic
instrument: the alpha mean approaches 1 under every error model (the
prime-count analogue of the classical x/log x law), while the beta mean
diverges under the square-root-barrier models, stays near 1 under
``X_OVER_LOG``, and creeps upward extremely slowly under ``MT``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import DomainError
from .specialfn import (
    ErrorBoundModel,
    Li,
    error_density,
    error_integral,
    li,
    MT_DECAY_CONSTANT,
    positive_density_floor,
)

__all__ = [
    "Hyperparameters",
    "RecursionState",
    "MixtureComponent",
    "GammaProductMixture",
    "TrajectoryRow",
    "init",
    "update",
    "posterior",
    "posterior_mean_alpha",
    "posterior_var_alpha",
    "posterior_mean_beta",
    "posterior_var_beta",
    "log_posterior_predictive",
    "trajectory",
    "asymptotic_form_table",
    "model_compare_log_ratio",
]


class Hyperparameters(NamedTuple):
    """Prior hyperparameters (exponential rates a, b; shape offsets gamma, xi)."""

    a: float = 0.0
    b: float = 0.0
    gamma: float = 1.0
    xi: float = 1.0


@dataclass(frozen=True)
class RecursionState:
    """Sufficient statistics of the stage-k posterior.

    ``sum_b1`` and ``sum_b2`` include the prior rates, so they equal
    ``a + Li(t_last)`` and ``b + F(t_last)`` respectively.
    """

    k: int
    hyper: Hyperparameters
    sum_b1: float
    sum_b2: float
    t_last: float
    model: ErrorBoundModel


class MixtureComponent(NamedTuple):
    weight: float
    rate_a: float
    shape_a: float
    rate_b: float
    shape_b: float


@dataclass(frozen=True)
class GammaProductMixture:
    """Mixture of products of independent gamma densities over (alpha, beta)."""

    components: list[MixtureComponent]

    def pdf(self, alpha: float, beta: float) -> float:
        total = 0.0
        for w, ra, sa, rb, sb in self.components:
            la = sa * math.log(ra) - math.lgamma(sa) + (sa - 1.0) * math.log(alpha) - ra * alpha
            lb = sb * math.log(rb) - math.lgamma(sb) + (sb - 1.0) * math.log(beta) - rb * beta
            total += w * math.exp(la + lb)
        return total


class TrajectoryRow(NamedTuple):
    k: int
    t_last: float
    mean_alpha: float
    var_alpha: float
    mean_beta: float
    var_beta: float


def init(hyper: Hyperparameters, model: ErrorBoundModel, t1: float) -> RecursionState:
    """Start the recursion at the first observed prime ``t1``."""
    hyper = Hyperparameters(*hyper)
    if any(h < 0 for h in hyper):
        raise DomainError(f"hyperparameters must be >= 0, got {hyper}")
    if t1 < 2.0:
        raise DomainError(f"first prime must be >= 2, got {t1}")
    return RecursionState(
        k=1,
        hyper=hyper,
        sum_b1=hyper.a + Li(float(t1)),
        sum_b2=hyper.b + error_integral(model, float(t1)),
        t_last=float(t1),
        model=model,
    )


def update(state: RecursionState, t_next: float) -> RecursionState:
    """Advance one stage by conditioning on the next prime."""
    t_next = float(t_next)
    if t_next <= state.t_last:
        raise DomainError(
            f"primes must be strictly increasing: {t_next} after {state.t_last}"
        )
    return RecursionState(
        k=state.k + 1,
        hyper=state.hyper,
        sum_b1=state.sum_b1 + (Li(t_next) - Li(state.t_last)),
        sum_b2=state.sum_b2
        + (error_integral(state.model, t_next) - error_integral(state.model, state.t_last)),
        t_last=t_next,
        model=state.model,
    )


def _log_weights(state: RecursionState) -> tuple[float, float]:
    """Normalized log weights of the two posterior components."""
    a, b, gamma, xi = state.hyper
    k = state.k
    shapes = (gamma + k, xi + k - 1.0, gamma + k - 1.0, xi + k)
    if min(shapes) <= 0.0:
        raise DomainError(f"improper posterior component: shapes {shapes}")
    ra, rb = state.sum_b1, state.sum_b2
    if ra <= 0.0 or rb <= 0.0:
        raise DomainError(
            "improper posterior: non-positive rate (the accumulated integrals "
            "are empty or negative this close to the support edge)"
        )
    c2 = error_density(state.model, state.t_last)
    if c2 <= 0.0:
        raise DomainError(
            f"error density is not positive at t={state.t_last:g}; start the "
            f"recursion at {positive_density_floor(state.model)} or later"
        )
    log_a, log_b = math.log(ra), math.log(rb)
    lw1 = (
        math.log(li(state.t_last))
        + math.lgamma(gamma + k)
        - (gamma + k) * log_a
        + math.lgamma(xi + k - 1.0)
        - (xi + k - 1.0) * log_b
    )
    lw2 = (
        math.log(c2)
        + math.lgamma(gamma + k - 1.0)
        - (gamma + k - 1.0) * log_a
        + math.lgamma(xi + k)
        - (xi + k) * log_b
    )
    top = max(lw1, lw2)
    norm = top + math.log(math.exp(lw1 - top) + math.exp(lw2 - top))
    return lw1 - norm, lw2 - norm


def posterior(state: RecursionState) -> GammaProductMixture:
    """Closed-form stage-k posterior as a two-component gamma-product mixture."""
    lw1, lw2 = _log_weights(state)
    gamma, xi = state.hyper.gamma, state.hyper.xi
    k = state.k
    ra, rb = state.sum_b1, state.sum_b2
    return GammaProductMixture(
        components=[
            MixtureComponent(math.exp(lw1), ra, gamma + k, rb, xi + k - 1.0),
            MixtureComponent(math.exp(lw2), ra, gamma + k - 1.0, rb, xi + k),
        ]
    )


def posterior_mean_alpha(state: RecursionState) -> float:
    w1, w2 = (math.exp(w) for w in _log_weights(state))
    gamma, k = state.hyper.gamma, state.k
    return (w1 * (gamma + k) + w2 * (gamma + k - 1.0)) / state.sum_b1


def posterior_var_alpha(state: RecursionState) -> float:
    w1, w2 = (math.exp(w) for w in _log_weights(state))
    gamma, k = state.hyper.gamma, state.k
    s1, s2 = gamma + k, gamma + k - 1.0
    second = (w1 * s1 * (s1 + 1.0) + w2 * s2 * (s2 + 1.0)) / state.sum_b1**2
    mean = (w1 * s1 + w2 * s2) / state.sum_b1
    return second - mean * mean


def posterior_mean_beta(state: RecursionState) -> float:
    w1, w2 = (math.exp(w) for w in _log_weights(state))
    xi, k = state.hyper.xi, state.k
    return (w1 * (xi + k - 1.0) + w2 * (xi + k)) / state.sum_b2


def posterior_var_beta(state: RecursionState) -> float:
    w1, w2 = (math.exp(w) for w in _log_weights(state))
    xi, k = state.hyper.xi, state.k
    s1, s2 = xi + k - 1.0, xi + k
    second = (w1 * s1 * (s1 + 1.0) + w2 * s2 * (s2 + 1.0)) / state.sum_b2**2
    mean = (w1 * s1 + w2 * s2) / state.sum_b2
    return second - mean * mean


def log_posterior_predictive(state: RecursionState, t: float) -> float:
    """Log density of the next prime's position at ``t > t_last``.

    Four gamma-ratio terms; the stage sums are extended across (t_last, t]
    and the new coefficients are evaluated at ``t`` itself.  Everything is
    assembled in log space since the gamma functions overflow near k ~ 170.
    """
    t = float(t)
    if t <= state.t_last:
        raise DomainError("predictive point must exceed the last prime")
    a, b, gamma, xi = state.hyper
    k = state.k
    log_a, log_b = math.log(state.sum_b1), math.log(state.sum_b2)
    ap = state.sum_b1 + (Li(t) - Li(state.t_last))
    bp = state.sum_b2 + (error_integral(state.model, t) - error_integral(state.model, state.t_last))
    log_ap, log_bp = math.log(ap), math.log(bp)

    lc1_prev = math.log(li(state.t_last))
    c2_prev = error_density(state.model, state.t_last)
    if c2_prev <= 0.0:
        raise DomainError("error density not positive at the conditioning prime")
    lc2_prev = math.log(c2_prev)
    lc1_new = math.log(li(t))
    c2_new = error_density(state.model, t)
    if c2_new <= 0.0:
        raise DomainError("error density not positive at the predictive point")
    lc2_new = math.log(c2_new)

    def piece(lc: float, shape_a: float, shape_b: float) -> float:
        return (
            lc
            + math.lgamma(shape_a)
            - shape_a * log_ap
            + math.lgamma(shape_b)
            - shape_b * log_bp
        )

    terms = (
        piece(lc1_new + lc1_prev, gamma + k + 1.0, xi + k - 1.0),
        piece(lc2_new + lc1_prev, gamma + k, xi + k),
        piece(lc1_new + lc2_prev, gamma + k, xi + k),
        piece(lc2_new + lc2_prev, gamma + k - 1.0, xi + k + 1.0),
    )
    norm_terms = (
        lc1_prev
        + math.lgamma(gamma + k)
        - (gamma + k) * log_a
        + math.lgamma(xi + k - 1.0)
        - (xi + k - 1.0) * log_b,
        lc2_prev
        + math.lgamma(gamma + k - 1.0)
        - (gamma + k - 1.0) * log_a
        + math.lgamma(xi + k)
        - (xi + k) * log_b,
    )
    top = max(terms)
    log_num = top + math.log(sum(math.exp(v - top) for v in terms))
    top_n = max(norm_terms)
    log_den = top_n + math.log(sum(math.exp(v - top_n) for v in norm_terms))
    return log_num - log_den


def trajectory(
    model: ErrorBoundModel,
    primes: Sequence[int],
    hyper: Hyperparameters,
    checkpoints: Sequence[float],
) -> list[TrajectoryRow]:
    """Posterior moment rows at each checkpoint threshold.

    ``checkpoints`` are x-thresholds; each row reports the state after the
    largest prime not exceeding that threshold.  Primes below the model's
    positive-density floor (the prime 2 for the ``X_OVER_LOG`` and ``MT``
    shapes) are skipped so every mixture coefficient stays positive.
    """
    floor = positive_density_floor(model)
    cps = sorted(float(c) for c in checkpoints)
    rows: list[TrajectoryRow] = []
    state: RecursionState | None = None
    idx = 0

    def flush_until(limit: float) -> None:
        nonlocal idx
        while idx < len(cps) and cps[idx] < limit:
            if state is not None and state.t_last <= cps[idx]:
                rows.append(
                    TrajectoryRow(
                        state.k,
                        state.t_last,
                        posterior_mean_alpha(state),
                        posterior_var_alpha(state),
                        posterior_mean_beta(state),
                        posterior_var_beta(state),
                    )
                )
            idx += 1

    for p in primes:
        p = float(p)
        if p < floor:
            continue
        flush_until(p)
        state = init(hyper, model, p) if state is None else update(state, p)
    flush_until(math.inf)
    return rows


def asymptotic_form_table(k_values: Sequence[int]) -> list[tuple[int, float, float]]:
    """Rows ``(k, sqrt(k)/(log k)^{3/2}, (log k)^{-1/4} exp(sqrt(log k / 6.315)))``.

    These are the large-k growth laws of the beta posterior mean under the
    square-root-barrier model and the MT model respectively; evaluated in
    log space so arguments like 10**500 are exact.
    """
    rows = []
    for k in k_values:
        if k < 3:
            raise DomainError(f"asymptotic forms need k >= 3, got {k}")
        log_k = math.log(k)
        sqrt_form = math.exp(0.5 * log_k - 1.5 * math.log(log_k))
        mt_form = math.exp(
            math.sqrt(log_k / MT_DECAY_CONSTANT) - 0.25 * math.log(log_k)
        )
        rows.append((k, sqrt_form, mt_form))
    return rows


def model_compare_log_ratio(
    state_m1: RecursionState, state_m2: RecursionState, t_next: float
) -> float:
    """Log predictive ratio of two states fed identical primes.

    Positive values favor the first model at ``t_next``; for the MT versus
    ``X_OVER_LOG`` pair the ratio grows without bound in k.
    """
    if state_m1.k != state_m2.k or state_m1.t_last != state_m2.t_last:
        raise DomainError(
            "model comparison requires states conditioned on the same primes"
        )
    if state_m1.model == state_m2.model:
        return 0.0
    return log_posterior_predictive(state_m1, t_next) - log_posterior_predictive(
        state_m2, t_next
    )

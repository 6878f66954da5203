"""Closed-form relative entropy of entanglement for symmetric states.

The relative entropy of entanglement (REE) of a state is its relative
entropy to the nearest separable state.  For totally symmetric qubit states
and all of their reduced states the minimizer is a phase-averaged product
state, which makes the measure an explicit finite sum: every function here
is exact and cheap up to ``n ~ 10**6``.

All entanglement and entropy values are returned in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, xlogy

from .core import (
    LN2,
    DickeState,
    GeneralizedDickeState,
    _is_scalar,
    binary_entropy,
    log_binomial,
    reduced_l,
)

LESS = "LESS"
GREATER = "GREATER"
EQUAL = "EQUAL"

#: tie tolerance for ordering comparisons
ORDER_TOL = 1e-9

#: slack for the closed-form inequality checks
INEQ_TOL = 1e-12

#: additive constant of the half-filling log-law, from the Stirling
#: prefactor 2.507 ~ sqrt(2*pi) converted to base 2
STIRLING_PREFACTOR = 2.507
ASYMPTOTIC_CONSTANT = math.log2(STIRLING_PREFACTOR / 2.0)


def _validated_nk(n, k):
    n_a = np.asarray(n, dtype=float)
    k_a = np.asarray(k, dtype=float)
    if np.any(n_a < 1):
        raise ValueError("require n >= 1")
    if np.any(k_a < 0) or np.any(k_a > n_a):
        raise ValueError("require 0 <= k <= n")
    return n_a, k_a


def ree_pure(n, k):
    """Entanglement of the full symmetric ``(n, k)`` state, in bits.

    Equals ``-log2[ C(n,k) (k/n)^k (1-k/n)^(n-k) ]``: the state's overlap
    cost against its phase-averaged product reference.  Zero at ``k`` equal
    to 0 or n, symmetric under ``k <-> n-k``, and maximal at half filling,
    where it grows like ``(1/2) log2 n``.

    Accepts scalars or broadcasting arrays.
    """
    n_a, k_a = _validated_nk(n, k)
    k0 = np.minimum(k_a, n_a - k_a)
    r = k0 / n_a
    log_c = log_binomial(n_a, k0)
    val = -(log_c + xlogy(k0, r) + xlogy(n_a - k0, 1.0 - r)) / LN2
    return float(val) if _is_scalar(n, k) else val


def ree_pure_asymptotic(n: int) -> float:
    """Half-filling large-``n`` law ``(1/2) log2 n + const``, in bits.

    The constant comes from the Stirling approximation of the central
    binomial coefficient; the leading term is the point: total entanglement
    grows logarithmically with the number of qubits.
    """
    if n < 2 or n % 2:
        raise ValueError("asymptotic form is defined for even n >= 2")
    return 0.5 * math.log2(n) + ASYMPTOTIC_CONSTANT


def ree_two_site(n, k):
    """Entanglement between any two sites of the ``(n, k)`` state, in bits.

    Closed form::

        log2(n/(n-1)) + a*log2((k-1)/k) + b*log2((n-k-1)/(n-k))

    with ``a = k(k-1)/(n(n-1))`` and ``b = (n-k)(n-k-1)/(n(n-1))``;
    zero-weight terms are dropped.  Vanishes as ``n -> inf`` at fixed
    filling, so two-site entanglement carries no long-range order.
    """
    n_a, k_a = _validated_nk(n, k)
    if np.any(n_a < 2):
        raise ValueError("two-site measure requires n >= 2")
    k0 = np.minimum(k_a, n_a - k_a)
    denom = n_a * (n_a - 1.0)
    a = k0 * (k0 - 1.0) / denom
    b = (n_a - k0) * (n_a - k0 - 1.0) / denom
    ratio_a = np.where(k0 >= 2, (k0 - 1.0) / np.where(k0 > 0, k0, 1.0), 1.0)
    ratio_b = (n_a - k0 - 1.0) / (n_a - k0)
    val = (np.log(n_a / (n_a - 1.0)) + xlogy(a, ratio_a) + xlogy(b, ratio_b)) / LN2
    val = np.maximum(val, 0.0)
    return float(val) if _is_scalar(n, k) else val


def ree_l(n: int, k: int, l: int) -> float:
    """Entanglement of any ``l`` of the ``n`` qubits, in bits.

    The reduced state and its separable reference are diagonal in the same
    level basis, so the REE collapses to a classical relative entropy
    between hypergeometric and binomial level weights.  Consistency:
    equals :func:`ree_two_site` at ``l = 2``, :func:`ree_pure` at ``l = n``,
    and is zero at ``l = 1``.
    """
    if n < 1 or not 0 <= k <= n:
        raise ValueError("require n >= 1 and 0 <= k <= n")
    if not 1 <= l <= n:
        raise ValueError("require 1 <= l <= n")
    if k in (0, n) or l == 1:
        return 0.0
    j = np.arange(max(0, k - (n - l)), min(l, k) + 1)
    log_sigma = log_binomial(l, j) + log_binomial(n - l, k - j) - log_binomial(n, k)
    r = k / n
    log_rho = log_binomial(l, j) + j * math.log(r) + (l - j) * math.log1p(-r)
    val = float(np.sum(np.exp(log_sigma) * (log_sigma - log_rho)) / LN2)
    return max(val, 0.0)


def is_two_site_entangled(n, k):
    """Whether two sites of the ``(n, k)`` state fail the partial-transpose test.

    The reduced pair is entangled iff ``c**2 > a*b``, which for these states
    reduces to ``1 <= k <= n-1``: any symmetric state that is not a product
    state carries two-site entanglement, at every separation.
    """
    n_a, k_a = _validated_nk(n, k)
    if np.any(n_a < 2):
        raise ValueError("two-site predicate requires n >= 2")
    out = (k_a >= 1) & (k_a <= n_a - 1)
    return bool(out) if _is_scalar(n, k) else out


def entropy_one_vs_rest(n, k):
    """Entanglement of one site with the remaining ``n-1``, in bits.

    The global state is pure, so this is the single-site marginal entropy
    ``H2(k/n)``.
    """
    n_a, k_a = _validated_nk(n, k)
    if np.any(n_a < 2):
        raise ValueError("one-vs-rest split requires n >= 2")
    out = binary_entropy(k_a / n_a)
    return float(out) if _is_scalar(n, k) else out


def entropy_block(n: int, k: int, l: int) -> float:
    """Entanglement between a block of ``l`` sites and the rest, in bits.

    For the pure global state this is the block's von Neumann entropy,
    i.e. the Shannon entropy of the hypergeometric level weights.  The
    weights are peaked with width ``~sqrt(l)``, so at half filling the
    block entropy grows like ``(1/2) log2 l``, matching the log-law of the
    total entanglement.
    """
    if not 1 <= l <= n - 1:
        raise ValueError("block split requires 1 <= l <= n-1")
    w = reduced_l(DickeState(n, k), l).weights
    return float(-xlogy(w, w).sum() / LN2)


@dataclass(frozen=True)
class SumInequalityReport:
    """Pairwise-vs-global comparison for one site against the rest."""

    lhs: float
    rhs: float
    holds: bool
    e12: float
    e12_cap: float
    cap_holds: bool


def check_sum_inequality(n: int, k: int) -> SumInequalityReport:
    """Check ``(n-1) * E_pair <= E_one_vs_rest`` and the ``1/(n-1)`` cap.

    Tracing cannot increase entanglement, so the ``n-1`` pairwise terms a
    site participates in are jointly bounded by its one-vs-rest
    entanglement; since the latter is at most one bit, pair entanglement
    decays at least as fast as ``1/(n-1)``.
    """
    e12 = ree_two_site(n, k)
    lhs = (n - 1) * e12
    rhs = entropy_one_vs_rest(n, k)
    cap = 1.0 / (n - 1)
    return SumInequalityReport(
        lhs=lhs,
        rhs=rhs,
        holds=bool(lhs <= rhs + INEQ_TOL),
        e12=e12,
        e12_cap=cap,
        cap_holds=bool(e12 <= cap + INEQ_TOL),
    )


@dataclass(frozen=True)
class CrossoverReport:
    """Ordering of accumulated low-order entanglement against the next order."""

    m: int
    sum_lower: float
    higher: float
    ordering: str


def crossover_compare(n: int, k: int, m: int) -> CrossoverReport:
    """Compare ``sum_{i=1..m} E_i`` with ``E_{m+1}`` for block sizes ``i``.

    ``E_i`` is :func:`ree_l` at block size ``i`` (the ``i=1`` term is zero
    and is included).  Both orderings occur: for small ``m`` the single
    higher-order term dominates, for large ``m`` the accumulated sum does.
    Ties within ``ORDER_TOL`` report EQUAL.
    """
    if not 1 <= m <= n - 1:
        raise ValueError("require 1 <= m <= n-1")
    sum_lower = float(sum(ree_l(n, k, i) for i in range(1, m + 1)))
    higher = ree_l(n, k, m + 1)
    gap = sum_lower - higher
    if abs(gap) <= ORDER_TOL:
        ordering = EQUAL
    else:
        ordering = LESS if gap < 0 else GREATER
    return CrossoverReport(m=m, sum_lower=sum_lower, higher=higher, ordering=ordering)


def crossover_scan(n: int, k: int, m_max: int | None = None) -> list[CrossoverReport]:
    """Scan ``m = 1 .. m_max`` and report each ordering.

    The scan locates the crossover empirically: the smallest ``m`` whose
    ordering is no longer LESS is where the accumulated sum overtakes the
    next single order.
    """
    if m_max is None:
        m_max = n - 1
    if not 1 <= m_max <= n - 1:
        raise ValueError("require 1 <= m_max <= n-1")
    reports = []
    running = 0.0
    for m in range(1, m_max + 1):
        running += ree_l(n, k, m)
        higher = ree_l(n, k, m + 1)
        gap = running - higher
        if abs(gap) <= ORDER_TOL:
            ordering = EQUAL
        else:
            ordering = LESS if gap < 0 else GREATER
        reports.append(
            CrossoverReport(m=m, sum_lower=running, higher=higher, ordering=ordering)
        )
    return reports


def first_crossover(reports: list[CrossoverReport]) -> int | None:
    """Smallest ``m`` in a scan whose ordering is not LESS, if any."""
    for report in reports:
        if report.ordering != LESS:
            return report.m
    return None


def ree_pure_generalized(state: GeneralizedDickeState) -> float:
    """Entanglement of a symmetric state of d-level systems, in bits.

    With level counts ``(n_1, .., n_d)`` summing to ``n``::

        -log2 multinomial(n; n_1..n_d) + sum_j n_j log2(n / n_j)

    Zero-count levels drop out; reduces exactly to :func:`ree_pure` for two
    levels.
    """
    counts = np.asarray(state.counts, dtype=float)
    n = float(state.n)
    log_multinomial = gammaln(n + 1.0) - gammaln(counts + 1.0).sum()
    val = -(log_multinomial + xlogy(counts, counts / n).sum()) / LN2
    return max(float(val), 0.0)

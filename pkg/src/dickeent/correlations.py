"""Classical correlations, mutual information, and long-range order.

Two-site entanglement in a symmetric state dies out as the lattice grows,
but the classical correlations between two sites do not, and neither does
the off-diagonal two-site matrix element that signals long-range order.
This module computes those surviving quantities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import xlogy

from .core import LN2, DickeState, TwoSiteState, _is_scalar, binary_entropy, reduced_two_site
from .measures import is_two_site_entangled, ree_two_site


def classical_correlation_closed(r):
    """Two-site classical correlations at filling fraction ``r``, in bits.

    Closed form::

        (r - 2r^2) log2 r + ((1-r) - 2(1-r)^2) log2(1-r)
            - 2r(1-r) log2(2r(1-r))

    with 0*log(0) = 0.  Symmetric under ``r <-> 1-r``; equals 0.5 at half
    filling and 0 at the product points — so classical correlations persist
    in the macroscopic limit even where pair entanglement vanishes.
    """
    r_a = np.asarray(r, dtype=float)
    if np.any(r_a < 0) or np.any(r_a > 1):
        raise ValueError("filling fraction must lie in [0, 1]")
    s = 1.0 - r_a
    cross = 2.0 * r_a * s
    val = (xlogy(r_a - 2.0 * r_a**2, r_a) + xlogy(s - 2.0 * s**2, s) - xlogy(cross, cross)) / LN2
    return float(val) if _is_scalar(r) else val


@dataclass(frozen=True)
class MeasuredCorrelation:
    """Best projective-measurement correlation and the angles achieving it."""

    bits: float
    theta: float
    phi: float


def _conditional_entropy(state: TwoSiteState, theta, phi):
    """Average post-measurement entropy of site B for a site-A projector.

    The measurement direction is the Bloch vector (theta, phi); vectorized
    over angle arrays.  The coherence of this state family is real, so the
    azimuth only rotates the phase of the conditional off-diagonal entry and
    drops out of its eigenvalues; the phi axis of any angle grid is flat.
    """
    a, b, c = state.a, state.b, state.c
    theta, phi = np.broadcast_arrays(
        np.asarray(theta, dtype=float), np.asarray(phi, dtype=float)
    )
    u = np.cos(theta / 2.0) ** 2
    w = np.abs(np.sin(theta)) * c / 2.0

    def branch(u_branch):
        x = u_branch * b + (1.0 - u_branch) * c
        y = u_branch * c + (1.0 - u_branch) * a
        p = x + y
        root = np.sqrt(((x - y) / 2.0) ** 2 + w**2)
        top = (x + y) / 2.0 + root
        frac = np.clip(np.divide(top, p, out=np.zeros_like(p), where=p > 1e-15), 0.0, 1.0)
        ent = -(xlogy(frac, frac) + xlogy(1.0 - frac, 1.0 - frac)) / LN2
        return np.where(p > 1e-15, p * ent, 0.0)

    return branch(u) + branch(1.0 - u)


def classical_correlation_measured(state: TwoSiteState, grid: int = 64) -> MeasuredCorrelation:
    """Maximum entropy reduction on one site from measuring the other, in bits.

    Restricted to single-qubit projective measurements (a two-angle Bloch
    parameterization, a ``grid x grid`` angle scan plus local refinement);
    this is therefore a lower bound on the fully general definition, which
    allows arbitrary measurement operators.  Nonnegative, and zero for
    product states.
    """
    marginal = binary_entropy(state.a + state.c)
    thetas = np.linspace(0.0, math.pi, grid)
    phis = np.linspace(0.0, 2.0 * math.pi, grid, endpoint=False)
    cond = _conditional_entropy(state, thetas[:, None], phis[None, :])
    i, j = np.unravel_index(int(np.argmin(cond)), cond.shape)
    theta0, phi0 = float(thetas[i]), float(phis[j])

    result = minimize(
        lambda x: float(_conditional_entropy(state, x[0], x[1])),
        x0=[theta0, phi0],
        method="Nelder-Mead",
        options={"xatol": 1e-8, "fatol": 1e-10, "maxiter": 400},
    )
    cond_best, theta, phi = min(
        (float(cond[i, j]), theta0, phi0),
        (float(result.fun), float(result.x[0]), float(result.x[1])),
    )
    return MeasuredCorrelation(bits=max(marginal - cond_best, 0.0), theta=theta, phi=phi)


def odlro(n, k):
    """Off-diagonal long-range-order element ``k(n-k)/(n(n-1))``.

    This is the two-site coherence ``c``; it is independent of the pair
    separation, tends to ``r(1-r)`` at fixed filling ``r = k/n``, and peaks
    near 1/4 at half filling.
    """
    n_a = np.asarray(n, dtype=float)
    k_a = np.asarray(k, dtype=float)
    if np.any(n_a < 2):
        raise ValueError("pair coherence requires n >= 2")
    if np.any(k_a < 0) or np.any(k_a > n_a):
        raise ValueError("require 0 <= k <= n")
    val = k_a * (n_a - k_a) / (n_a * (n_a - 1.0))
    return float(val) if _is_scalar(n, k) else val


def max_singlet_fraction(state: TwoSiteState) -> float:
    """Maximally-entangled-state fraction of a two-site state.

    Identified with the coherence ``c``.  Linear in the state, so unlike
    entanglement it survives mixing unattenuated.
    """
    return state.c


def mutual_information_pure(n, k):
    """Total (quantum plus classical) two-ended correlations, in bits.

    Relative entropy of the ``(n, k)`` state to the product of its single
    site marginals: ``n * H2(k/n)``, the sum of individual qubit entropies.
    Grows linearly in ``n`` at fixed filling and equals ``n`` at half
    filling.
    """
    n_a = np.asarray(n, dtype=float)
    k_a = np.asarray(k, dtype=float)
    if np.any(n_a < 1):
        raise ValueError("require n >= 1")
    if np.any(k_a < 0) or np.any(k_a > n_a):
        raise ValueError("require 0 <= k <= n")
    val = n_a * binary_entropy(k_a / n_a)
    return float(val) if _is_scalar(n, k) else val


@dataclass(frozen=True)
class CorrelationReport:
    """Summary of two-site correlation quantities for one ``(n, k)`` state."""

    e12: float
    classical: float
    mutual: float
    odlro: float
    entangled: bool

    def __post_init__(self):
        if self.mutual < 0 or self.classical < 0:
            raise ValueError("correlation quantities must be nonnegative")


def correlation_report(n: int, k: int) -> CorrelationReport:
    """Bundle the per-pair quantities for the symmetric ``(n, k)`` state."""
    state = DickeState(n, k)
    pair = reduced_two_site(state)
    return CorrelationReport(
        e12=ree_two_site(n, k),
        classical=classical_correlation_closed(state.filling),
        mutual=mutual_information_pure(n, k),
        odlro=pair.c,
        entangled=is_two_site_entangled(n, k),
    )

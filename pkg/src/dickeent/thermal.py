"""Thermal mixtures of symmetric states.

A lattice whose low-lying levels are all symmetric states is modelled at
finite temperature by a probability vector over excitation numbers.  This
module builds such ensembles from level energies, decides pair
separability, bounds the mixture's total entanglement from above by its
relative entropy to a manifestly separable reference, and evaluates the
correlation quantities that survive the mixing.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.constants import electron_volt, k as boltzmann_constant
from scipy.special import expit, rel_entr, softmax, xlogy

from .core import LN2, TwoSiteState, WEIGHT_TOL, binary_entropy, log_binomial
from .measures import ree_pure

#: strictly-positive threshold for the inseparability double sum
INSEPARABILITY_TOL = 1e-15


@dataclass(frozen=True, eq=False)
class ThermalEnsemble:
    """Probability vector over the excitation levels of ``n`` qubits."""

    n: int
    p: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("ensemble requires n >= 1")
        p = np.asarray(self.p, dtype=float)
        if p.ndim != 1 or p.size != self.n + 1:
            raise ValueError("p must have n + 1 entries")
        if np.any(p < -WEIGHT_TOL):
            raise ValueError("probabilities must be nonnegative")
        if abs(float(p.sum()) - 1.0) > max(WEIGHT_TOL, 1e-15 * p.size):
            raise ValueError("probabilities must sum to 1")
        p = p.copy()
        p.flags.writeable = False
        object.__setattr__(self, "p", p)


def uniform_ensemble(n: int) -> ThermalEnsemble:
    """Equal mixture of all ``n + 1`` excitation levels."""
    return ThermalEnsemble(n, np.full(n + 1, 1.0 / (n + 1)))


def point_ensemble(n: int, k: int) -> ThermalEnsemble:
    """Degenerate ensemble concentrated on a single level."""
    p = np.zeros(n + 1)
    p[k] = 1.0
    return ThermalEnsemble(n, p)


def make_ensemble(energies, kt: float, mode: str = "fermi") -> ThermalEnsemble:
    """Occupation probabilities for the given level energies at temperature ``kt``.

    ``energies`` lists ``E_0 .. E_n`` in any consistent unit and ``kt`` is
    the temperature in the same unit.  ``mode="fermi"`` uses occupancies
    ``1 / (exp(E/kT) + 1)`` normalized to a probability vector (the raw
    occupancies do not sum to one); ``mode="boltzmann"`` uses
    ``exp(-E/kT) / Z``.  The separability conclusions downstream do not
    depend on which is chosen.
    """
    e = np.asarray(energies, dtype=float)
    if e.ndim != 1 or e.size < 2:
        raise ValueError("energies must list at least two levels")
    if not (kt > 0):
        raise ValueError("temperature must be positive")
    if mode == "fermi":
        occ = expit(-e / kt)
        total = float(occ.sum())
        if not total > 0:
            raise ValueError("occupancies underflowed; rescale energies")
        p = occ / total
    elif mode == "boltzmann":
        p = softmax(-e / kt)
    else:
        raise ValueError("mode must be 'fermi' or 'boltzmann'")
    return ThermalEnsemble(e.size - 1, p)


def thermal_two_site(ensemble: ThermalEnsemble) -> TwoSiteState:
    """Two-site reduced state of the mixture: the weighted pair states."""
    n = ensemble.n
    if n < 2:
        raise ValueError("two-site reduction requires n >= 2")
    k = np.arange(n + 1, dtype=float)
    p = ensemble.p
    denom = float(n) * (n - 1)
    return TwoSiteState(
        a=float(p @ (k * (k - 1))) / denom,
        b=float(p @ ((n - k) * (n - k - 1))) / denom,
        c=float(p @ (k * (n - k))) / denom,
    )


def inseparability_sum(ensemble: ThermalEnsemble) -> float:
    """Value of the pairwise inseparability double sum.

    ``sum_{k,l} p_k p_l k(n-l) [ (n-k) l - (k-1)(n-l-1) ]`` equals
    ``n^2 (n-1)^2 (c^2 - ab)`` for the mixed pair state, so its sign is
    exactly the partial-transpose criterion.  Computed through the level
    moments, which is the same algebra at ``O(n)`` cost.
    """
    n = ensemble.n
    if n < 2:
        raise ValueError("pair separability requires n >= 2")
    k = np.arange(n + 1, dtype=float)
    p = ensemble.p
    coherence = float(p @ (k * (n - k)))
    both_up = float(p @ (k * (k - 1)))
    both_down = float(p @ ((n - k) * (n - k - 1)))
    return coherence * coherence - both_up * both_down


def thermal_inseparable(ensemble: ThermalEnsemble) -> bool:
    """Whether two sites of the mixture are entangled.

    True iff the inseparability double sum is strictly positive, which is
    the partial-transpose criterion for the mixed pair state.  Any mixture
    supported only on the two fully polarized levels is separable.  The
    criterion is a function of the level probabilities alone; temperature
    and energies enter only through them.
    """
    return bool(inseparability_sum(ensemble) > INSEPARABILITY_TOL)


def _reference_level_weights(ensemble: ThermalEnsemble) -> np.ndarray:
    """Level weights of the mixture of per-level separable reference states.

    Level ``k`` of the reference built for excitation number ``l`` carries
    the binomial weight ``C(n,k) (l/n)^k (1-l/n)^(n-k)``; mixing those
    references with the ensemble probabilities stays separable and stays
    diagonal in the symmetric-level basis.
    """
    n = ensemble.n
    p = ensemble.p
    k = np.arange(n + 1, dtype=float)
    log_c = log_binomial(n, k)
    q = np.zeros(n + 1)
    q[0] += p[0]
    q[n] += p[n]
    interior = [l for l in range(1, n) if p[l] > 0.0]
    if interior:
        chunk = max(1, int(2_000_000 // (n + 1)))
        for start in range(0, len(interior), chunk):
            ls = np.asarray(interior[start : start + chunk], dtype=float)[:, None]
            logw = log_c[None, :] + k[None, :] * np.log(ls / n)
            logw += (n - k)[None, :] * np.log1p(-ls / n)
            q += p[np.asarray(interior[start : start + chunk])] @ np.exp(logw)
    return q


def ree_upper_bound(ensemble: ThermalEnsemble) -> float:
    """Certified upper bound on the mixture's total entanglement, in bits.

    The exact relative entropy of the mixture to the thermal average of the
    per-level separable reference states.  Both are diagonal in the
    symmetric-level basis, so the bound reduces to a classical divergence
    ``sum_k p_k log2(p_k / q_k)``.  It is tight on point masses (where it
    equals :func:`ree_pure`) and decays to zero for the uniform mixture
    faster than ``log(n)/n``.
    """
    q = _reference_level_weights(ensemble)
    return max(float(rel_entr(ensemble.p, q).sum() / LN2), 0.0)


def ree_upper_bound_printed(ensemble: ThermalEnsemble) -> float:
    """Cross-entropy variant ``-sum_k p_k log2 q_k`` of the bound.

    Differs from :func:`ree_upper_bound` by the ensemble entropy, which the
    exact bound subtracts.  Exposed for side-by-side reporting; it is not
    itself a valid entanglement bound.
    """
    q = _reference_level_weights(ensemble)
    return float(-xlogy(ensemble.p, q).sum() / LN2)


def average_entanglement(ensemble: ThermalEnsemble) -> float:
    """Probability-weighted mean of the per-level entanglements, in bits.

    Uses the exact per-level values, so the fully polarized levels
    contribute zero.  For the uniform mixture this grows like
    ``(1/2) log2 n``, the same law as the half-filling pure state; it is an
    ensemble average, not an entanglement measure of the mixed state.
    """
    n = ensemble.n
    values = np.array([ree_pure(n, k) for k in range(n + 1)])
    return float(ensemble.p @ values)


def average_entanglement_asymptotic(ensemble: ThermalEnsemble) -> float:
    """Large-``n`` comparator ``sum_k p_k (1/2) log2(k(n-k)/n)``.

    The summand is the asymptotic form of the per-level entanglement; the
    fully polarized levels are excluded (their exact entanglement is zero,
    while the asymptotic form diverges there).
    """
    n = ensemble.n
    k = np.arange(1, n)
    if n < 2:
        return 0.0
    vals = 0.5 * np.log2(k * (n - k) / n)
    return float(ensemble.p[1:n] @ vals)


def odlro_mixture(ensemble: ThermalEnsemble) -> float:
    """Ensemble average of the macroscopic-limit pair coherence.

    Averages ``(k/n)(1 - k/n)``; for the uniform mixture this equals
    ``1/2 - (2n+1)/(6n)`` exactly and tends to ``1/6``, so long-range order
    survives complete mixing of the levels.
    """
    n = ensemble.n
    k = np.arange(n + 1, dtype=float)
    return float(ensemble.p @ ((k / n) * (1.0 - k / n)))


def odlro_mixture_exact(ensemble: ThermalEnsemble) -> float:
    """Finite-``n`` pair coherence of the mixture, ``sum_k p_k k(n-k)/(n(n-1))``."""
    n = ensemble.n
    if n < 2:
        raise ValueError("pair coherence requires n >= 2")
    k = np.arange(n + 1, dtype=float)
    return float(ensemble.p @ (k * (n - k))) / (float(n) * (n - 1))


def mutual_information_mixture(ensemble: ThermalEnsemble) -> float:
    """Total correlations of the mixture, in bits.

    Sum of single-site marginal entropies minus the global entropy: the
    marginal of every site is the two-outcome distribution at the mean
    filling, and the global entropy is the Shannon entropy of the level
    probabilities (the levels are orthogonal).
    """
    n = ensemble.n
    k = np.arange(n + 1, dtype=float)
    mean_filling = float(ensemble.p @ k) / n
    ensemble_entropy = float(-xlogy(ensemble.p, ensemble.p).sum() / LN2)
    return n * binary_entropy(mean_filling) - ensemble_entropy


@dataclass(frozen=True)
class MutualInformationMixtureReport:
    """Printed-expression and exact values for the uniform mixture."""

    paper_value: float
    exact_value: float


def mutual_information_mixture_uniform(n: int) -> MutualInformationMixtureReport:
    """Total correlations of the uniform mixture, in bits, two ways.

    ``exact_value`` is ``n - log2(n+1)``: marginal entropies of the mean
    filling minus the mixture entropy.  ``paper_value`` replaces the entropy
    of the average marginal by the average of the per-level marginal
    entropies, ``(n/(n+1)) sum_k H2(k/n) - log2(n+1)``; both are reported
    because the literature expression is ambiguous between them.  Only the
    exact value approaches ``n - log2 n``.
    """
    if n < 1:
        raise ValueError("require n >= 1")
    k = np.arange(n + 1, dtype=float)
    paper = (n / (n + 1.0)) * float(binary_entropy(k / n).sum()) - math.log2(n + 1)
    exact = n - math.log2(n + 1)
    return MutualInformationMixtureReport(paper_value=paper, exact_value=exact)


@dataclass(frozen=True)
class CriticalTempParams:
    """Inputs of the weak-coupling critical-temperature estimate.

    ``energy_scale`` is the pairing energy window in electron-volts and
    ``coupling`` the dimensionless product of the density of states at the
    Fermi surface and the attractive interaction strength.
    """

    energy_scale: float
    coupling: float

    def __post_init__(self):
        if not self.energy_scale > 0:
            raise ValueError("energy scale must be positive")
        if not self.coupling > 0:
            raise ValueError("coupling must be positive")


def critical_temperature(params: CriticalTempParams) -> float:
    """Weak-coupling critical temperature ``(E / k_B) exp(-1/coupling)`` in kelvin.

    Uses CODATA constants.  The formula is derived for couplings well below
    one; a warning is emitted outside that regime.
    """
    if params.coupling >= 1.0:
        warnings.warn(
            "coupling >= 1 is outside the weak-coupling regime; "
            "the exponential formula is unreliable there",
            stacklevel=2,
        )
    energy_joule = params.energy_scale * electron_volt
    return energy_joule / boltzmann_constant * math.exp(-1.0 / params.coupling)


def coupling_for_temperature(energy_scale: float, t_c: float) -> float:
    """Coupling implied by a target critical temperature, inverting the formula."""
    if not energy_scale > 0 or not t_c > 0:
        raise ValueError("energy scale and temperature must be positive")
    ratio = energy_scale * electron_volt / (boltzmann_constant * t_c)
    if ratio <= 1.0:
        raise ValueError("target temperature exceeds the energy scale")
    return 1.0 / math.log(ratio)

"""Symbol calculus: diamond products, Wick-symbol series, heat transforms.

Three views of the same operator meet here.  The diamond product gives the
symbol of a composition of Toeplitz operators with polynomial symbols by
exact differentiation.  The Wick symbol of a radial operator is recovered
from its γ-sequence through the series ``σ(r) = e^{−r²} Σ γ(n) r^{2n}/n!``.
The heat transform ``H_t`` smooths a symbol by a complex Gaussian of
variance ``t``, normalized so that ``H₁`` carries the anti-Wick symbol of
an operator onto its Wick symbol.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, DivergenceError, DomainError
from .quadrature import GammaSequence
from .symbols import (
    BivariatePolynomial,
    Combination,
    RadialExponential,
    RadialMonomial,
    Symbol,
    to_polynomial,
)

__all__ = [
    "RadialPowerSeries",
    "GaussianWickFit",
    "diamond",
    "wick_from_gamma",
    "heat_transform",
    "fit_gaussian_wick",
]


# ---------------------------------------------------------------------------
# diamond product


def diamond(phi: Symbol, psi: Symbol) -> BivariatePolynomial:
    """The product ``φ ◇ ψ = Σ_k (−1)ᵏ/k! (∂_z^k φ)(∂_z̄^k ψ)``.

    Both factors must be polynomial (radial monomials convert via
    ``r^{2m} = z^m z̄^m``); the sum terminates at ``k = deg_z φ`` and all
    coefficient arithmetic is exact products of integers and inputs.
    """
    p = to_polynomial(phi)
    q = to_polynomial(psi)
    max_k = max((j for j, _k in p.coefficients), default=0)
    out: dict[tuple[int, int], complex] = {}
    for k_order in range(max_k + 1):
        sign_over_fact = (-1.0) ** k_order / math.factorial(k_order)
        for (pj, pk), pc in p.coefficients.items():
            if pj < k_order:
                continue
            dz_coeff = pc * math.perm(pj, k_order)  # j!/(j−k)!
            for (qj, qk), qc in q.coefficients.items():
                if qk < k_order:
                    continue
                dzbar_coeff = qc * math.perm(qk, k_order)
                key = (pj - k_order + qj, pk + qk - k_order)
                out[key] = out.get(key, 0j) + sign_over_fact * dz_coeff * dzbar_coeff
    return BivariatePolynomial(out)


# ---------------------------------------------------------------------------
# Wick symbol from a γ-sequence


@dataclass(frozen=True, eq=False)
class RadialPowerSeries:
    """The radial function ``σ(r) = e^{−r²} Σ_{n<N} γ(n) r^{2n}/n!``.

    Evaluation enforces the truncation-tail bound
    ``max|γ| · r^{2N}/N!`` (the ``e^{±r²}`` factors cancel against the
    prefactor); radii where the bound exceeds the tolerance are refused
    rather than silently extrapolated.
    """

    gamma: GammaSequence

    def tail_bound(self, r: float) -> float:
        x = float(r) * float(r)
        n = len(self.gamma)
        peak = float(np.max(np.abs(self.gamma.values))) if n else 0.0
        if x == 0.0 or peak == 0.0:
            return 0.0
        log_tail = n * math.log(x) - math.lgamma(n + 1.0)
        return peak * math.exp(log_tail) if log_tail < 700.0 else math.inf

    def eval(self, r: float, tol: float = 1e-10) -> complex:
        bound = self.tail_bound(r)
        if bound > tol:
            needed = len(self.gamma)
            while needed < 100_000 and _series_tail(r, needed) > tol / max(
                1.0, float(np.max(np.abs(self.gamma.values)))
            ):
                needed *= 2
            raise AccuracyError(
                f"series tail {bound:.3e} exceeds tol {tol:.3e} at r={r} with "
                f"{len(self.gamma)} terms; ~{needed} terms would suffice"
            )
        x = float(r) * float(r)
        total = 0j
        weight = 1.0  # x^n / n!
        for n, g in enumerate(self.gamma.values):
            total += g * weight
            weight *= x / (n + 1.0)
        return math.exp(-x) * total


def _series_tail(r: float, n_terms: int) -> float:
    x = float(r) * float(r)
    if x == 0.0:
        return 0.0
    log_tail = n_terms * math.log(x) - math.lgamma(n_terms + 1.0)
    return math.exp(log_tail) if log_tail < 700.0 else math.inf


def wick_from_gamma(gamma: GammaSequence, r: float, tol: float = 1e-10) -> complex:
    """Value of the Wick symbol of the radial operator with sequence γ at radius ``r``."""
    return RadialPowerSeries(gamma).eval(r, tol=tol)


# ---------------------------------------------------------------------------
# heat transform


def heat_transform(symbol: Symbol, t: float) -> Symbol:
    """Gaussian smoothing ``H_t(a)(z) = (πt)⁻¹ ∫ a(w) e^{−|z−w|²/t} dv(w)``.

    Normalized so that ``H₁`` maps anti-Wick symbols to Wick symbols.
    Closed forms on the representable family:

    - ``H_t(z^j z̄^k) = Σ_i C(j,i) C(k,i) i! tⁱ z^{j−i} z̄^{k−i}``
      (moments of a complex Gaussian), so ``H₁(|z|²) = |z|² + 1``;
    - ``H_t(e^{λ|z|²}) = (1−tλ)⁻¹ e^{λ|z|²/(1−tλ)}`` for ``Re(λ) < 1/t``,
      outside which the defining integral diverges.
    """
    if not (t > 0.0) or not math.isfinite(t):
        raise DomainError(f"heat-transform time must be positive and finite, got {t}")
    if isinstance(symbol, RadialMonomial):
        return heat_transform(to_polynomial(symbol), t)
    if isinstance(symbol, BivariatePolynomial):
        out: dict[tuple[int, int], complex] = {}
        for (j, k), c in symbol.coefficients.items():
            for i in range(min(j, k) + 1):
                w = c * math.comb(j, i) * math.comb(k, i) * math.factorial(i) * t**i
                key = (j - i, k - i)
                out[key] = out.get(key, 0j) + w
        return BivariatePolynomial(out)
    if isinstance(symbol, RadialExponential):
        lam = symbol.lam
        if lam.real * t >= 1.0:
            raise DivergenceError(
                f"heat transform diverges: Re(lambda)={lam.real:g} is not < 1/t={1.0 / t:g}"
            )
        scale = 1.0 / (1.0 - t * lam)
        if lam == 0:
            return RadialExponential(0j)
        return Combination(((scale, RadialExponential(lam * scale)),))
    if isinstance(symbol, Combination):
        return Combination(tuple((w, heat_transform(s, t)) for w, s in symbol.terms))
    raise DomainError(f"heat transform not defined for {symbol!r}")


# ---------------------------------------------------------------------------
# Gaussian recognition of a Wick symbol


@dataclass(frozen=True)
class GaussianWickFit:
    """Result of fitting ``σ(r) ≈ amplitude · e^{−rate·r²}`` on a radius grid."""

    amplitude: complex
    rate: complex
    residual: float
    grid_points: int


def safe_fit_radius(gamma: GammaSequence, tol: float = 1e-10, r_cap: float = 2.0) -> float:
    """Largest radius (capped at ``r_cap``) where the series prefix meets ``tol``.

    Inverts the truncation-tail bound ``max|γ| · r^{2N}/N! ≤ tol`` for the
    radius and shrinks the root slightly so later evaluations sit strictly
    inside the bound.  Lets fit grids adapt to short prefixes instead of
    refusing them.
    """
    n = len(gamma)
    peak = float(np.max(np.abs(gamma.values))) if n else 0.0
    if n == 0 or peak == 0.0:
        return r_cap
    log_x = (math.log(tol) - math.log(peak) + math.lgamma(n + 1.0)) / n
    return min(r_cap, 0.999 * math.exp(0.5 * log_x))


def fit_gaussian_wick(
    gamma: GammaSequence,
    r_max: float = 2.0,
    n_points: int = 25,
    tol: float = 1e-10,
) -> GaussianWickFit:
    """Log-linear least-squares fit of the Wick series against ``r²``.

    ``log σ(r) = log C − K r²`` is linear in ``r²``; the phase is unwrapped
    along the grid so complex logarithms stay on one branch.  The residual
    is the maximum absolute deviation of the model on the grid, which the
    caller compares against its own tolerance.
    """
    if n_points < 3:
        raise DomainError("need at least 3 grid points for a fit")
    r = np.linspace(0.0, r_max, n_points)
    values = np.array([wick_from_gamma(gamma, float(ri), tol=tol) for ri in r])
    if np.any(values == 0):
        return GaussianWickFit(amplitude=0j, rate=0j, residual=math.inf, grid_points=n_points)
    logs = np.log(np.abs(values)) + 1j * np.unwrap(np.angle(values))
    design = np.column_stack([np.ones_like(r), -(r * r)])
    coef, *_ = np.linalg.lstsq(design, logs, rcond=None)
    amplitude = cmath.exp(complex(coef[0]))
    rate = complex(coef[1])
    model = amplitude * np.exp(-rate * r * r)
    residual = float(np.max(np.abs(values - model)))
    return GaussianWickFit(
        amplitude=amplitude, rate=rate, residual=residual, grid_points=n_points
    )

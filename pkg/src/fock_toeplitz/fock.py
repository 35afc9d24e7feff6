"""Finite truncations of Fock-space objects.

Everything acts on the span of the monomial basis ``e_n = zⁿ/√n!`` for
``n < N``: coherent-state coefficient vectors, Toeplitz matrices (diagonal
for radial symbols, banded for monomial symbols ``z^j z̄^k``), ladder and
scaling operators, numerical Wick symbols via the coherent-state ratio,
operator norms, and the prefix spectrum of a radial operator.

Matrix convention: ``entries[m, n] = ⟨A e_n, e_m⟩``, so columns are images
of basis vectors and composition is plain matrix multiplication.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import AccuracyError, DomainError
from .quadrature import DEFAULT_TOL, GammaSequence, gamma_sequence
from .symbols import Symbol, is_radial, to_polynomial

__all__ = [
    "FockVector",
    "TruncatedOperator",
    "SpectrumPrefix",
    "coherent_coefficients",
    "eval_fock",
    "toeplitz_matrix",
    "ladder_matrices",
    "scaling_operator",
    "wick_symbol_numeric",
    "coherent_tail_bound",
    "norm_estimate",
    "spectrum_radial",
    "r_map",
    "r_star",
    "r_matrix",
    "r_star_matrix",
    "radial_operator_from_sequence",
]


@dataclass(frozen=True, eq=False)
class FockVector:
    """Coefficients ``c_n`` of a truncated element ``Σ c_n e_n``."""

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs, dtype=complex).reshape(-1)
        object.__setattr__(self, "coeffs", c)

    def __len__(self) -> int:
        return len(self.coeffs)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """An ``N×N`` matrix in the monomial basis."""

    dim: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.entries, dtype=complex)
        if a.shape != (self.dim, self.dim):
            raise DomainError(f"operator entries must be {self.dim}x{self.dim}, got {a.shape}")
        object.__setattr__(self, "entries", a)

    def apply(self, f: FockVector) -> FockVector:
        if len(f) != self.dim:
            raise DomainError(f"vector length {len(f)} does not match dim {self.dim}")
        return FockVector(self.entries @ f.coeffs)

    def diagonal(self) -> np.ndarray:
        return np.diag(self.entries).copy()


def coherent_coefficients(a: complex, n_entries: int) -> FockVector:
    """Expansion of the coherent state ``K_a(z) = e^{z ā}``: ``c_n = āⁿ/√n!``."""
    a = complex(a)
    c = np.empty(n_entries, dtype=complex)
    term = 1.0 + 0j
    for n in range(n_entries):
        c[n] = term
        term *= a.conjugate() / math.sqrt(n + 1.0)
    return FockVector(c)


def eval_fock(f: FockVector, z: complex) -> complex:
    """Pointwise value ``Σ c_n zⁿ/√n!``."""
    z = complex(z)
    basis = 1.0 + 0j
    total = 0j
    for n, c in enumerate(f.coeffs):
        total += c * basis
        basis *= z / math.sqrt(n + 1.0)
    return total


def _monomial_entries(j: int, k: int, n_dim: int) -> np.ndarray:
    """Matrix of ``T_{z^j z̄^k}``: entry ``(n+j−k, n) = (n+j)!/√(n!(n+j−k)!)``."""
    out = np.zeros((n_dim, n_dim), dtype=complex)
    for n in range(n_dim):
        m = n + j - k
        if 0 <= m < n_dim:
            log_val = gammaln(n + j + 1.0) - 0.5 * gammaln(n + 1.0) - 0.5 * gammaln(m + 1.0)
            out[m, n] = math.exp(log_val)
    return out


def toeplitz_matrix(symbol: Symbol, n_dim: int, tol: float = DEFAULT_TOL) -> TruncatedOperator:
    """Truncated Toeplitz operator ``T_φ`` in the monomial basis.

    Radial symbols give the diagonal of their γ-sequence; polynomial symbols
    assemble from the banded monomial matrices by linearity.  Factorial
    ratios are evaluated in log space throughout.
    """
    if n_dim < 1:
        raise DomainError("truncation dimension must be >= 1")
    if is_radial(symbol):
        gamma = gamma_sequence(symbol, n_dim, tol=tol)
        return TruncatedOperator(dim=n_dim, entries=np.diag(gamma.values))
    poly = to_polynomial(symbol)  # DomainError for non-polynomial, non-radial shapes
    entries = np.zeros((n_dim, n_dim), dtype=complex)
    for (j, k), c in poly.coefficients.items():
        entries += c * _monomial_entries(j, k, n_dim)
    return TruncatedOperator(dim=n_dim, entries=entries)


def ladder_matrices(n_dim: int) -> tuple[TruncatedOperator, TruncatedOperator]:
    """Creation and annihilation matrices: ``â* e_n = √(n+1) e_{n+1}``, ``â e_n = √n e_{n−1}``.

    On the truncation the commutator ``[â, â*]`` equals the identity on all
    basis directions except the last, where the cut-off row is an artifact.
    """
    if n_dim < 2:
        raise DomainError("ladder matrices need dimension >= 2")
    creation = np.zeros((n_dim, n_dim), dtype=complex)
    annihilation = np.zeros((n_dim, n_dim), dtype=complex)
    for n in range(n_dim - 1):
        creation[n + 1, n] = math.sqrt(n + 1.0)
        annihilation[n, n + 1] = math.sqrt(n + 1.0)
    return (
        TruncatedOperator(dim=n_dim, entries=creation),
        TruncatedOperator(dim=n_dim, entries=annihilation),
    )


def scaling_operator(a: complex, n_dim: int) -> TruncatedOperator:
    """The operator ``M_a f(z) = a f(az)``, diagonal with entries ``a^{n+1}``."""
    a = complex(a)
    diag = np.array([a ** (n + 1) for n in range(n_dim)], dtype=complex)
    return TruncatedOperator(dim=n_dim, entries=np.diag(diag))


def coherent_tail_bound(x: float, n_terms: int) -> float:
    """Bound on the tail ``Σ_{n≥N} xⁿ/n!``: ``x^N/N! · e^x``, in log space."""
    if x == 0.0:
        return 0.0
    log_bound = n_terms * math.log(x) - math.lgamma(n_terms + 1.0) + x
    return math.exp(log_bound) if log_bound < 700.0 else math.inf


def wick_symbol_numeric(
    A: TruncatedOperator, v: complex, z: complex, tol: float = 1e-10
) -> complex:
    """Wick symbol by the coherent-state ratio ``(A K_v)(z) / K_v(z)``.

    The coherent state is truncated at ``A.dim`` coefficients, so the
    exponential-series tail at ``x = |v||z|`` must already be below ``tol``;
    otherwise an :class:`AccuracyError` reports the dimension that would
    suffice.
    """
    v, z = complex(v), complex(z)
    x = abs(v) * abs(z)
    bound = coherent_tail_bound(x, A.dim)
    if bound > tol:
        needed = A.dim
        while needed < 100_000 and coherent_tail_bound(x, needed) > tol:
            needed *= 2
        raise AccuracyError(
            f"coherent-state tail {bound:.3e} exceeds tol {tol:.3e} at truncation "
            f"{A.dim}; dimension ~{needed} would suffice"
        )
    numerator = eval_fock(A.apply(coherent_coefficients(v, A.dim)), z)
    denominator = cmath.exp(z * v.conjugate())
    return numerator / denominator


def norm_estimate(A: TruncatedOperator) -> float:
    """Largest singular value of the truncation (lower bound for the full norm)."""
    return float(np.linalg.norm(A.entries, 2))


@dataclass(frozen=True)
class SpectrumPrefix:
    """Distinct values among a γ-prefix; only a prefix of the true spectrum.

    The spectrum of a radial Toeplitz operator is the closure of the full
    value set {γ(n)}; a finite prefix cannot determine the closure, so the
    result is labeled rather than claimed complete.
    """

    points: tuple[complex, ...]
    label: str = "prefix of spectrum"


def spectrum_radial(gamma: GammaSequence, tol: float = 1e-9) -> SpectrumPrefix:
    """Collapse duplicate γ-values under ``tol``, preserving first-seen order."""
    points: list[complex] = []
    for v in gamma.values:
        v = complex(v)
        if all(abs(v - p) > tol for p in points):
            points.append(v)
    return SpectrumPrefix(points=tuple(points))


# ---------------------------------------------------------------------------
# R / R* coefficient maps
#
# R sends an analytic function to its normalized coefficient sequence and R*
# embeds a sequence back; on a truncation both act as the identity on
# coordinates.  They are provided both as functions and as explicit matrices
# so operator identities like R R* = I and T_a = R*(γ·)R can be executed.


def r_map(f: FockVector) -> np.ndarray:
    """R: coefficients of ``f`` with respect to ``{e_n}`` as a plain sequence."""
    return f.coeffs.copy()


def r_star(c) -> FockVector:
    """R*: the Fock vector with coefficient sequence ``c``."""
    return FockVector(np.asarray(c, dtype=complex))


def r_matrix(n_dim: int) -> np.ndarray:
    """Coordinate matrix of R on the truncation (identity)."""
    return np.eye(n_dim, dtype=complex)


def r_star_matrix(n_dim: int) -> np.ndarray:
    """Coordinate matrix of R* on the truncation (identity)."""
    return np.eye(n_dim, dtype=complex)


def radial_operator_from_sequence(values) -> TruncatedOperator:
    """Assemble ``R* · diag(γ) · R`` explicitly as a matrix product."""
    values = np.asarray(values, dtype=complex)
    n_dim = len(values)
    entries = r_star_matrix(n_dim) @ np.diag(values) @ r_matrix(n_dim)
    return TruncatedOperator(dim=n_dim, entries=entries)

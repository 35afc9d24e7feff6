"""Closed-form symbol functions on the complex plane.

A symbol is a function of ``z`` (and ``z̄``) drawn from a small closed-form
family: radial monomials ``r^{2m}``, radial exponentials ``e^{λr²}``,
bivariate polynomials ``Σ c_{jk} z^j z̄^k``, and finite linear combinations
of the above.  Restricting to this family keeps every class-membership
question decidable by inspecting integral convergence conditions instead of
sampling.

The weighted moment sequence ``q_f`` and the power series ``A_f`` attached to
a square-integrable radial symbol live here as well, since both are defined
purely in terms of the symbol.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np
from scipy.special import gammaln

from .errors import DivergenceError, DomainError, NonFiniteResultError

__all__ = [
    "RadialMonomial",
    "RadialExponential",
    "BivariatePolynomial",
    "Combination",
    "Symbol",
    "SymbolClass",
    "MembershipVerdict",
    "ASeriesResult",
    "is_radial",
    "radial_terms",
    "to_polynomial",
    "evaluate",
    "radial_profile",
    "membership",
    "q_sequence",
    "a_series",
    "describe",
    "symbol_to_json",
    "symbol_from_json",
    "complex_to_json",
    "complex_from_json",
]


# ---------------------------------------------------------------------------
# symbol variants


@dataclass(frozen=True)
class RadialMonomial:
    """The radial symbol ``a(r) = r^{2m}``."""

    m: int

    def __post_init__(self) -> None:
        if not isinstance(self.m, (int, np.integer)) or self.m < 0:
            raise ValueError(f"monomial exponent must be a nonnegative integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))


@dataclass(frozen=True)
class RadialExponential:
    """The radial symbol ``a(r) = e^{λ r²}``."""

    lam: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "lam", complex(self.lam))


@dataclass(frozen=True)
class BivariatePolynomial:
    """The symbol ``φ(z, z̄) = Σ c_{jk} z^j z̄^k`` with finitely many terms.

    ``coefficients`` maps ``(j, k)`` to ``c_{jk}``; exact zero coefficients
    are dropped at construction so the stored map is a normal form.  The
    empty map is the zero symbol.
    """

    coefficients: Mapping[tuple[int, int], complex]

    def __post_init__(self) -> None:
        clean: dict[tuple[int, int], complex] = {}
        for key, c in self.coefficients.items():
            j, k = key
            if j < 0 or k < 0 or j != int(j) or k != int(k):
                raise ValueError(f"polynomial powers must be nonnegative integers, got {key!r}")
            c = complex(c)
            if c != 0:
                clean[(int(j), int(k))] = c
        object.__setattr__(self, "coefficients", clean)

    def is_radial(self) -> bool:
        """True when only diagonal powers ``z^m z̄^m`` occur."""
        return all(j == k for j, k in self.coefficients)


@dataclass(frozen=True)
class Combination:
    """A finite weighted sum of symbols, kept flat (no nested combinations)."""

    terms: tuple[tuple[complex, "Symbol"], ...]

    def __post_init__(self) -> None:
        flat: list[tuple[complex, Symbol]] = []
        for w, s in self.terms:
            w = complex(w)
            if w == 0:
                continue
            if isinstance(s, Combination):
                flat.extend((w * wi, si) for wi, si in s.terms)
            else:
                flat.append((w, s))
        if not flat:
            raise ValueError("combination must contain at least one non-zero term")
        object.__setattr__(self, "terms", tuple(flat))


Symbol = Union[RadialMonomial, RadialExponential, BivariatePolynomial, Combination]


def is_radial(symbol: Symbol) -> bool:
    """Whether the symbol depends on ``z`` only through ``|z|``."""
    if isinstance(symbol, (RadialMonomial, RadialExponential)):
        return True
    if isinstance(symbol, BivariatePolynomial):
        return symbol.is_radial()
    if isinstance(symbol, Combination):
        return all(is_radial(s) for _, s in symbol.terms)
    raise DomainError(f"not a symbol: {symbol!r}")


def radial_terms(symbol: Symbol) -> tuple[tuple[complex, int, complex], ...]:
    """Decompose a radial symbol into terms ``c · r^{2m} e^{λr²}``.

    Returns tuples ``(c, m, λ)`` with like terms merged; terms whose merged
    coefficient is exactly zero are dropped.  Raises :class:`DomainError`
    for non-radial symbols.
    """
    if not is_radial(symbol):
        raise DomainError("symbol is not radial")

    def collect(sym: Symbol, weight: complex, acc: dict[tuple[int, complex], complex]) -> None:
        if isinstance(sym, RadialMonomial):
            key = (sym.m, 0j)
            acc[key] = acc.get(key, 0j) + weight
        elif isinstance(sym, RadialExponential):
            key = (0, sym.lam)
            acc[key] = acc.get(key, 0j) + weight
        elif isinstance(sym, BivariatePolynomial):
            for (j, _k), c in sym.coefficients.items():
                key = (j, 0j)
                acc[key] = acc.get(key, 0j) + weight * c
        else:
            for w, s in sym.terms:
                collect(s, weight * w, acc)

    acc: dict[tuple[int, complex], complex] = {}
    collect(symbol, 1.0 + 0j, acc)
    out = [(c, m, lam) for (m, lam), c in acc.items() if c != 0]
    out.sort(key=lambda t: (t[1], t[2].real, t[2].imag))
    return tuple(out)


def to_polynomial(symbol: Symbol) -> BivariatePolynomial:
    """Convert to a :class:`BivariatePolynomial`; ``r^{2m}`` becomes ``z^m z̄^m``.

    Exponential symbols have no polynomial form and raise :class:`DomainError`.
    """
    if isinstance(symbol, BivariatePolynomial):
        return symbol
    if isinstance(symbol, RadialMonomial):
        return BivariatePolynomial({(symbol.m, symbol.m): 1.0})
    if isinstance(symbol, Combination):
        coeffs: dict[tuple[int, int], complex] = {}
        for w, s in symbol.terms:
            for key, c in to_polynomial(s).coefficients.items():
                coeffs[key] = coeffs.get(key, 0j) + w * c
        return BivariatePolynomial(coeffs)
    raise DomainError("exponential symbols have no polynomial form")


# ---------------------------------------------------------------------------
# evaluation


def evaluate(symbol: Symbol, z: complex) -> complex:
    """Evaluate ``φ(z, z̄)``; radial variants go through ``r = |z|``."""
    z = complex(z)
    try:
        if isinstance(symbol, RadialMonomial):
            value = complex(abs(z) ** (2 * symbol.m))
        elif isinstance(symbol, RadialExponential):
            value = cmath.exp(symbol.lam * (z.real * z.real + z.imag * z.imag))
        elif isinstance(symbol, BivariatePolynomial):
            zb = z.conjugate()
            value = sum((c * z**j * zb**k for (j, k), c in symbol.coefficients.items()), 0j)
        elif isinstance(symbol, Combination):
            value = sum((w * evaluate(s, z) for w, s in symbol.terms), 0j)
        else:
            raise DomainError(f"not a symbol: {symbol!r}")
    except OverflowError as exc:
        raise NonFiniteResultError(f"symbol evaluation overflowed at z={z}") from exc
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise NonFiniteResultError(f"symbol evaluation not finite at z={z}")
    return value


def radial_profile(symbol: Symbol, u: np.ndarray) -> np.ndarray:
    """Vectorized ``a(√u)`` for a radial symbol, i.e. the profile in ``u = r²``.

    Preserves the floating type of ``u`` (complex result), so extended
    precision survives when the caller passes ``np.longdouble`` nodes.
    """
    terms = radial_terms(symbol)
    u = np.asarray(u)
    out = np.zeros(u.shape, dtype=np.result_type(u.dtype, np.complex128))
    for c, m, lam in terms:
        term = np.asarray(u, dtype=out.dtype) ** m if m else np.ones_like(out)
        if lam != 0:
            term = term * np.exp(out.dtype.type(lam) * u)
        out += out.dtype.type(c) * term
    if not np.all(np.isfinite(out)):
        raise NonFiniteResultError("radial profile evaluation not finite")
    return out


# ---------------------------------------------------------------------------
# class membership


class SymbolClass(enum.Enum):
    """Weighted symbol classes with decidable membership.

    ``L1_INF_WEIGHTED``: ``∫|a(r)| e^{−r²} r^n dr < ∞`` for every ``n``.
    ``L2_INF_WEIGHTED``: ``∫|a(r)|² e^{−r²} r^{n+1} dr < ∞`` for every ``n``.
    ``GROWTH_DELTA_HALF``: ``|a(z)| ≤ C e^{δ|z|²}`` for some ``δ < 1/2``.
    """

    L1_INF_WEIGHTED = "L1InfWeighted"
    L2_INF_WEIGHTED = "L2InfWeighted"
    GROWTH_DELTA_HALF = "GrowthDeltaHalf"


@dataclass(frozen=True)
class MembershipVerdict:
    space: SymbolClass
    member: bool
    witness: str


def _growth_rate(symbol: Symbol) -> float:
    """Largest Re(λ) over the exponential content of the symbol.

    Polynomial factors do not affect any of the convergence conditions, so
    the verdicts depend only on this rate.  Radial symbols are merged first
    so exactly cancelling terms do not inflate the rate.
    """
    if is_radial(symbol):
        terms = radial_terms(symbol)
        if not terms:
            return -math.inf
        return max(lam.real for _c, _m, lam in terms)
    if isinstance(symbol, BivariatePolynomial):
        return 0.0 if symbol.coefficients else -math.inf
    if isinstance(symbol, Combination):
        return max(_growth_rate(s) for _w, s in symbol.terms)
    return 0.0


def membership(symbol: Symbol, space: SymbolClass) -> MembershipVerdict:
    """Exact class membership from closed-form convergence conditions."""
    rho = _growth_rate(symbol)
    if space is SymbolClass.L1_INF_WEIGHTED:
        member = rho < 1.0
        cond = "Re(lambda) < 1"
    elif space is SymbolClass.L2_INF_WEIGHTED:
        member = 2.0 * rho < 1.0
        cond = "2 Re(lambda) < 1"
    elif space is SymbolClass.GROWTH_DELTA_HALF:
        member = rho < 0.5
        cond = "Re(lambda) < 1/2"
    else:
        raise DomainError(f"unknown symbol class: {space!r}")
    witness = (
        f"exponential growth rate max Re(lambda) = {rho:g}; "
        f"convergence requires {cond}; polynomial factors are immaterial"
    )
    return MembershipVerdict(space=space, member=member, witness=witness)


# ---------------------------------------------------------------------------
# q-sequence and A-series


def q_sequence(symbol: Symbol, n_entries: int) -> np.ndarray:
    """Weighted moments ``q_f(n) = ∫ |f(r)|² e^{−r²} r^{n+1} dr``, n < n_entries.

    Computed in closed form: expanding ``|f|²`` over the radial terms of the
    symbol gives integrals ``∫ r^{2M+n+1} e^{−s r²} dr = ½ Γ(M + (n+2)/2)
    s^{−(M+(n+2)/2)}`` with ``s = 1 − λ_i − λ̄_j``, evaluated in log space.
    """
    if not is_radial(symbol):
        raise DomainError("q-sequence requires a radial symbol")
    if not membership(symbol, SymbolClass.L2_INF_WEIGHTED).member:
        raise DivergenceError(
            "q-sequence integrals diverge: symbol is outside the weighted L2 class"
        )
    terms = radial_terms(symbol)
    n = np.arange(n_entries, dtype=float)
    total = np.zeros(n_entries, dtype=complex)
    for ci, mi, lami in terms:
        for cj, mj, lamj in terms:
            s = 1.0 - lami - lamj.conjugate()
            p = mi + mj + (n + 2.0) / 2.0
            log_mag = gammaln(p) - p * math.log(abs(s))
            phase = -p * cmath.phase(s)
            total += 0.5 * ci * cj.conjugate() * np.exp(log_mag) * np.exp(1j * phase)
    if not np.all(np.isfinite(total)):
        raise NonFiniteResultError("q-sequence overflowed; reduce the number of entries")
    return np.maximum(total.real, 0.0)


@dataclass(frozen=True)
class ASeriesResult:
    """Partial sum of ``A_f(x) = Σ x^n q_f(n) / n!`` with a convergence flag.

    ``converged`` is true only when the term ratios over the last eight
    computed terms all stay below 0.9 and the implied geometric tail bound
    is below ``tol`` relative to the partial sum.  ``last_ratio`` reports
    the offending (or final) ratio.
    """

    value: float
    converged: bool
    last_ratio: float | None
    tail_bound: float | None


_RATIO_WINDOW = 8
_RATIO_MARGIN = 0.9


def _a_series_terms(symbol: Symbol, x: float, n_terms: int) -> np.ndarray:
    """Terms ``q_f(n) x^n / n!`` computed pairwise in log space.

    ``q_f(n)`` alone overflows double precision near ``n ≈ 300`` while the
    ``x^n/n!`` factor keeps the terms themselves moderate, so the exponents
    are combined before exponentiating.
    """
    terms = radial_terms(symbol)
    n = np.arange(n_terms, dtype=float)
    log_weight = n * math.log(x) - gammaln(n + 1.0)
    total = np.zeros(n_terms, dtype=complex)
    for ci, mi, lami in terms:
        for cj, mj, lamj in terms:
            s = 1.0 - lami - lamj.conjugate()
            p = mi + mj + (n + 2.0) / 2.0
            log_mag = gammaln(p) - p * math.log(abs(s)) + log_weight
            phase = -p * cmath.phase(s)
            total += 0.5 * ci * cj.conjugate() * np.exp(log_mag + 1j * phase)
    if not np.all(np.isfinite(total)):
        raise NonFiniteResultError("A-series terms overflowed")
    return total.real


def a_series(symbol: Symbol, x: float, n_terms: int = 64, tol: float = 1e-10) -> ASeriesResult:
    """Evaluate the series ``A_f`` at ``x ≥ 0`` with a ratio-test verdict."""
    if x < 0:
        raise DomainError(f"A-series is defined for x >= 0, got {x}")
    if n_terms < 1:
        raise DomainError("need at least one term")
    if not is_radial(symbol):
        raise DomainError("A-series requires a radial symbol")
    if not membership(symbol, SymbolClass.L2_INF_WEIGHTED).member:
        raise DivergenceError(
            "A-series moments diverge: symbol is outside the weighted L2 class"
        )
    if x == 0.0 or not radial_terms(symbol):
        q0 = float(q_sequence(symbol, 1)[0])
        return ASeriesResult(value=q0, converged=True, last_ratio=0.0, tail_bound=0.0)

    terms = _a_series_terms(symbol, x, n_terms)
    total = float(np.sum(terms))
    mags = np.abs(terms)
    nonzero = mags > 0
    ratios = mags[1:][nonzero[:-1]] / mags[:-1][nonzero[:-1]]

    window = ratios[-_RATIO_WINDOW:]
    if len(window) < _RATIO_WINDOW:
        return ASeriesResult(value=total, converged=False, last_ratio=None, tail_bound=None)
    rho = float(np.max(window))
    if rho >= _RATIO_MARGIN:
        return ASeriesResult(value=total, converged=False, last_ratio=rho, tail_bound=None)
    tail = float(mags[-1]) * rho / (1.0 - rho)
    converged = tail < tol * max(1.0, abs(total))
    return ASeriesResult(value=total, converged=bool(converged), last_ratio=rho, tail_bound=tail)


# ---------------------------------------------------------------------------
# descriptions and JSON codec


def describe(symbol: Symbol) -> str:
    """Short human-readable form of the symbol."""
    if isinstance(symbol, RadialMonomial):
        return "1" if symbol.m == 0 else f"r^{2 * symbol.m}"
    if isinstance(symbol, RadialExponential):
        return f"exp(({_fmt_c(symbol.lam)})*r^2)"
    if isinstance(symbol, BivariatePolynomial):
        if not symbol.coefficients:
            return "0"
        parts = [
            f"({_fmt_c(c)})*z^{j}*zbar^{k}"
            for (j, k), c in sorted(symbol.coefficients.items())
        ]
        return " + ".join(parts)
    if isinstance(symbol, Combination):
        return " + ".join(f"({_fmt_c(w)})*[{describe(s)}]" for w, s in symbol.terms)
    return repr(symbol)


def _fmt_c(z: complex) -> str:
    if z.imag == 0:
        return f"{z.real:g}"
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:g}{sign}{abs(z.imag):g}i"


def complex_to_json(z: complex) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def complex_from_json(obj) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, dict):
        try:
            return complex(float(obj.get("re", 0.0)), float(obj.get("im", 0.0)))
        except (TypeError, ValueError) as exc:
            raise ValueError(f"malformed complex value: {obj!r}") from exc
    raise ValueError(f"malformed complex value: {obj!r}")


def symbol_to_json(symbol: Symbol) -> dict:
    """Encode a symbol as a JSON-compatible dict."""
    if isinstance(symbol, RadialMonomial):
        return {"kind": "radial_monomial", "m": symbol.m}
    if isinstance(symbol, RadialExponential):
        return {"kind": "radial_exponential", "lambda": complex_to_json(symbol.lam)}
    if isinstance(symbol, BivariatePolynomial):
        terms = [
            {"j": j, "k": k, "c": complex_to_json(c)}
            for (j, k), c in sorted(symbol.coefficients.items())
        ]
        return {"kind": "poly", "terms": terms}
    if isinstance(symbol, Combination):
        return {
            "kind": "sum",
            "terms": [{"w": complex_to_json(w), "s": symbol_to_json(s)} for w, s in symbol.terms],
        }
    raise DomainError(f"not a symbol: {symbol!r}")


def symbol_from_json(obj) -> Symbol:
    """Decode a symbol from its JSON dict form; raises ValueError when malformed."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError(f"symbol JSON must be an object with a 'kind' field, got {obj!r}")
    kind = obj["kind"]
    if kind == "radial_monomial":
        if "m" not in obj:
            raise ValueError("radial_monomial needs field 'm'")
        return RadialMonomial(m=obj["m"])
    if kind == "radial_exponential":
        if "lambda" not in obj:
            raise ValueError("radial_exponential needs field 'lambda'")
        return RadialExponential(lam=complex_from_json(obj["lambda"]))
    if kind == "poly":
        terms = obj.get("terms", [])
        if not isinstance(terms, list):
            raise ValueError("poly 'terms' must be a list")
        coeffs: dict[tuple[int, int], complex] = {}
        for t in terms:
            try:
                j, k = int(t["j"]), int(t["k"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"malformed poly term: {t!r}") from exc
            coeffs[(j, k)] = coeffs.get((j, k), 0j) + complex_from_json(t.get("c", 1.0))
        return BivariatePolynomial(coeffs)
    if kind == "sum":
        terms = obj.get("terms", [])
        if not isinstance(terms, list) or not terms:
            raise ValueError("sum 'terms' must be a non-empty list")
        decoded = []
        for t in terms:
            if "s" not in t:
                raise ValueError(f"sum term needs a sub-symbol 's': {t!r}")
            decoded.append((complex_from_json(t.get("w", 1.0)), symbol_from_json(t["s"])))
        return Combination(tuple(decoded))
    raise ValueError(f"unknown symbol kind: {kind!r}")

"""Closed-form bounds and probabilities for cutting sets, line sets and saturating sets.

Formulas that are rational in q are evaluated exactly with
:class:`fractions.Fraction`.  Transcendental ones (logarithms, exponentials)
are evaluated in interval arithmetic (``mpmath.iv``) at a chosen binary
precision, then rounded outward: lower bounds report the lower endpoint,
upper bounds the upper endpoint.  Integer roundings (ceil/floor) are
computed on both endpoints and must agree, otherwise ``PrecisionError`` is
raised instead of guessing.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import mpmath
from mpmath import iv

from .pg import gaussian_binomial, theta

DEFAULT_PREC = 64


class RegimeViolation(ValueError):
    """Parameters outside the range in which a bound's derivation is valid."""


class PrecisionError(ArithmeticError):
    """An interval straddles an integer, so a rounding cannot be certified."""


@contextlib.contextmanager
def _precision(bits: int):
    if bits < 50:
        raise ValueError("use at least 50 bits of working precision")
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


def _lo(x) -> mpmath.mpf:
    return mpmath.mp.make_mpf(x._mpi_[0])


def _hi(x) -> mpmath.mpf:
    return mpmath.mp.make_mpf(x._mpi_[1])


def _ceil(x) -> int:
    a, b = math.ceil(_lo(x)), math.ceil(_hi(x))
    if a != b:
        raise PrecisionError(f"ceil of {x} is ambiguous; raise the precision")
    return int(a)


def _floor(x) -> int:
    a, b = math.floor(_lo(x)), math.floor(_hi(x))
    if a != b:
        raise PrecisionError(f"floor of {x} is ambiguous; raise the precision")
    return int(a)


def _ivq(x: Fraction | int):
    x = Fraction(x)
    return iv.mpf(x.numerator) / x.denominator


@dataclass(frozen=True)
class BoundReport:
    """One evaluated bound.

    ``value`` is exact (int or Fraction) or an outward-rounded mpf;
    ``integer`` is the certified integer form when one exists (floor of an
    upper bound, least integer above a strict lower bound, or the value of
    an integer formula).
    """

    name: str
    inputs: dict[str, Any]
    value: Any
    side: str  # "lower", "upper" or "exact"
    citation: str
    integer: int | None = None
    note: str = ""

    def as_row(self) -> dict[str, Any]:
        v = self.value
        if isinstance(v, Fraction):
            shown = str(v)
        elif isinstance(v, mpmath.mpf):
            shown = mpmath.nstr(v, 12)
        else:
            shown = v
        return {
            "name": self.name,
            **{k: v for k, v in self.inputs.items()},
            "side": self.side,
            "value": shown,
            "integer": self.integer,
            "citation": self.citation,
            "note": self.note,
        }


# --------------------------------------------------------------------------
# lengths of minimal codes and sizes of cutting sets


def cutting_lower(N: int, q: int) -> int:
    """Every cutting blocking set of PG(N, q) has at least N(q+1) points."""
    return N * (q + 1)


def _prob_multiplier(q: int):
    """The factor 2 / (1 + 1/((q+1)^2 ln q)) as an interval."""
    return 2 / (1 + 1 / ((q + 1) ** 2 * iv.log(q)))


def random_lines_count(N: int, q: int, prec: int = DEFAULT_PREC) -> int:
    """Number of random lines that suffices for a higgledy-piggledy set with positive probability."""
    if q == 2:
        return math.ceil(Fraction(195, 100) * N)
    with _precision(prec):
        return _ceil(_prob_multiplier(q) * N)


def _binary_cutting_size(N: int, prec: int) -> int:
    with _precision(prec):
        return _ceil(iv.log(2) / iv.log(iv.mpf(4) / 3) * (2 * N + 1))


def binary_cutting_upper(N: int, prec: int = DEFAULT_PREC) -> int:
    """Size of a random point set of PG(N, 2) that is cutting with positive probability."""
    if N < 2:
        raise ValueError("need N >= 2")
    return _binary_cutting_size(N, prec)


def m_bounds(k: int, q: int, c: Fraction | float = Fraction(2, 9), prec: int = DEFAULT_PREC) -> list[BoundReport]:
    """Known bounds on m(k, q), the shortest length of a minimal [n, k]_q code.

    The quadratic upper bound c k^2 q comes with an unspecified constant; c is
    an input (default 2/9, the quoted lower limit for c) and that row is not
    a certified bound.
    """
    if k < 2:
        raise ValueError("need k >= 2")
    inputs = {"k": k, "q": q}
    out = [
        BoundReport("m_lower", inputs, (k - 1) * (q + 1), "lower", "(k-1)(q+1) <= m(k,q)", (k - 1) * (q + 1)),
        BoundReport(
            "m_quadratic_upper",
            {**inputs, "c": str(c)},
            Fraction(c) * k * k * q,
            "upper",
            "m(k,q) <= c k^2 q",
            note="c is not determined by the source bound; value is indicative only",
        ),
    ]
    with _precision(prec):
        cohen = 2 * k * iv.log(q) / iv.log(iv.mpf(q * q) / (q * q - q + 1))
        out.append(
            BoundReport("m_nonconstructive_upper", inputs, _hi(cohen), "upper", "m(k,q) <= 2k / log_q(q^2/(q^2-q+1))", _floor(cohen))
        )
        if q == 2:
            real = (2 * k - 1) / (iv.log(iv.mpf(4) / 3) / iv.log(2))
            out.append(
                BoundReport(
                    "m_probabilistic_upper",
                    inputs,
                    _hi(real),
                    "upper",
                    "m(k,2) <= (2k-1)/log2(4/3)",
                    _binary_cutting_size(k - 1, prec),
                    note="integer is the size of the random construction, ceil((2k-1) log 2/log(4/3))",
                )
            )
        else:
            lines = _ceil(_prob_multiplier(q) * (k - 1))
            out.append(
                BoundReport(
                    "m_probabilistic_upper",
                    inputs,
                    lines * (q + 1),
                    "upper",
                    "m(k,q) <= ceil(2(k-1)/(1+1/((q+1)^2 ln q))) (q+1)",
                    lines * (q + 1),
                )
            )
    return out


# --------------------------------------------------------------------------
# higgledy-piggledy line sets


def hp_line_lower(N: int, q: int) -> int:
    """Lower bound N + floor(N/2) - floor((N-1)/q) on higgledy-piggledy line sets."""
    if N < 2:
        raise ValueError("need N >= 2")
    return N + N // 2 - (N - 1) // q


def hp_hyperplane_lower(N: int, q: int, t: int) -> int:
    """Lower bound when some hyperplane contains t of the lines."""
    return N + t - (N - 1) // q


@dataclass(frozen=True)
class LineMeeting:
    exact: Fraction
    bound: Fraction


def prob_line_meets(d: int, N: int, q: int) -> LineMeeting:
    """Probability that a uniform random line meets a fixed d-subspace of PG(N, q).

    ``bound`` is the closed-form upper estimate q^(d-N+1) + q^(d-N) - q^(2d-2N+1).
    """
    if not 0 <= d <= N - 2:
        raise ValueError("need 0 <= d <= N - 2")
    gb = gaussian_binomial
    num = gb(d + 1, 2, q) + gb(d + 1, 1, q) * Fraction(gb(N + 1, 1, q) - gb(d + 1, 1, q), q)
    exact = num / gb(N + 1, 2, q)
    Q = Fraction(q)
    bound = Q ** (d - N + 1) + Q ** (d - N) - Q ** (2 * d - 2 * N + 1)
    return LineMeeting(exact, bound)


def eta(N: int, q: int) -> Fraction:
    """P(line inside a fixed codim-2 subspace | the line meets it)."""
    gb = gaussian_binomial
    inside = gb(N - 1, 2, q)
    return Fraction(inside, inside + (q ** (N - 1) + q ** (N - 2)) * gb(N - 1, 1, q))


def eta_bound(q: int) -> Fraction:
    return Fraction(1, q**3 + q**2 - q)


def gamma(q: int):
    """e^(1/(q-2)) for q > 2 and 2 e^(2/3) for q = 2, as an interval."""
    return 2 * iv.exp(iv.mpf(2) / 3) if q == 2 else iv.exp(iv.mpf(1) / (q - 2))


def codim2_factor(q: int) -> Fraction:
    """Per-line factor of the codim-2 term in the sharper chain used for q = 2.

    (1 + 1/q - 1/q^2) * (eta' + (1 - eta') q/(q+1)) with eta' = 1/(q^3+q^2-q);
    for q = 2 this is 5/4 * 7/10 = 7/8.
    """
    Q = Fraction(q)
    e = eta_bound(q)
    return (1 + 1 / Q - 1 / Q**2) * (e + (1 - e) * Q / (Q + 1))


@dataclass(frozen=True)
class SuccessBound:
    """Lower bound on P(m uniform random lines form a higgledy-piggledy set)."""

    N: int
    q: int
    m: int
    value: mpmath.mpf  # lower endpoint
    p_low: mpmath.mpf  # upper bound on the codim >= 3 failure term
    p_codim2: mpmath.mpf  # upper bound on the codim-2 failure term
    eta: Fraction
    eta_bound: Fraction
    details: dict = field(default_factory=dict)

    def __float__(self) -> float:
        return float(self.value)


def min_lines_for_regime(N: int, q: int) -> int:
    return math.ceil(Fraction(195, 100) * N) if q == 2 else math.ceil(Fraction(18, 10) * N)


def success_prob_lower(N: int, q: int, m: int, prec: int = DEFAULT_PREC) -> SuccessBound:
    """First-moment lower bound on the probability that m random lines are higgledy-piggledy.

    For q > 2::

        1 - q^-6 gamma(q) - q^(2N-m+1)/(q-1)^2 * (1 - 1/(q+1)^2)^m

    For q = 2 the codim-2 term keeps the sharper product
    ``2^(2N-m+1) * codim2_factor(2)^m``.  Raises RegimeViolation when m is
    below the range where the estimate of the codim >= 3 term is valid.
    """
    if N < 2:
        raise ValueError("need N >= 2")
    need = min_lines_for_regime(N, q)
    if m < need:
        raise RegimeViolation(f"m = {m} < {need}: the bound is not derived in this range")
    Q = Fraction(q)
    # the codim >= 3 term is below q^-6 gamma(q) only if this product is <= 1
    premise = Q ** (3 * N - 2 * m) * (1 + 1 / Q - (1 / Q**3 if q == 2 else 0)) ** m
    if premise > 1:
        raise RegimeViolation(f"q^(3N-2m)(...)^m = {float(premise):.4g} exceeds 1")
    with _precision(prec):
        p_low = gamma(q) / _ivq(Q**6)
        if q == 2:
            codim2 = Q ** (2 * N - m + 1) * codim2_factor(2) ** m
            chain = codim2
        else:
            codim2 = Q ** (2 * N - m + 1) / (Q - 1) ** 2 * (1 - 1 / (Q + 1) ** 2) ** m
            chain = (
                Q ** (2 * (N - 1) - m)
                * Q / (Q - 1)
                * Q**2 / (Q**2 - 1)
                * (1 + 1 / Q - 1 / Q**2) ** m
                * (Q + 1)
                * (Q / (Q + 1) + 1 / (Q**3 * (Q + 1))) ** m
            )
        value = 1 - p_low - _ivq(codim2)
        return SuccessBound(
            N, q, m, _lo(value), _hi(p_low), _hi(_ivq(codim2)),
            eta(N, q), eta_bound(q),
            {"codim2_chain": chain, "codim2_closed": codim2, "premise": premise},
        )


# --------------------------------------------------------------------------
# higgledy-piggledy subspaces and saturating sets


def _constants_iv(q: int):
    if q == 2:
        denom = iv.log(1 - iv.exp(-iv.mpf(2) / 3) / 2)
        return -iv.log(2) / denom, -iv.log(2 * iv.exp(iv.mpf(2) / 3)) / denom
    denom = iv.log(1 - iv.exp(-iv.mpf(1) / (q - 2)))
    return -iv.log(q) / denom, -1 / ((q - 2) * denom)


def subspace_constants(q: int, prec: int = DEFAULT_PREC) -> tuple[mpmath.mpf, mpmath.mpf]:
    """The constants (c1(q), c2(q)) of the random-subspace construction (interval midpoints)."""
    with _precision(prec):
        c1, c2 = _constants_iv(q)
        return mpmath.mpf(c1.mid._mpi_[0]), mpmath.mpf(c2.mid._mpi_[0])


def subspace_meet_bound(q: int, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """Upper bound on P(random (N-t+1)-space meets a fixed (t-2)-space)."""
    with _precision(prec):
        x = 1 - 1 / gamma(q)
        return _hi(x)


def subspace_count(N: int, t: int, q: int, prec: int = DEFAULT_PREC) -> int:
    """ceil((N-t+2)(t-1) c1(q) + c2(q)) random (N-t+1)-spaces suffice for a t-fold strong blocking set."""
    if not 2 <= t <= N:
        raise ValueError("need 2 <= t <= N")
    with _precision(prec):
        c1, c2 = _constants_iv(q)
        return _ceil((N - t + 2) * (t - 1) * c1 + c2)


def saturating_bounds(N: int, rho: int, q: int, prec: int = DEFAULT_PREC) -> list[BoundReport]:
    """Bounds on s_{q^(rho+1)}(N, rho), the least size of a rho-saturating set of PG(N, q^(rho+1))."""
    if not 1 <= rho <= N - 1:
        raise ValueError("need 1 <= rho <= N - 1")
    inputs = {"N": N, "rho": rho, "q": q}
    flat = theta(N - rho, q)  # points of an (N-rho)-space: (q^(N-rho+1)-1)/(q-1)
    out = []
    with _precision(prec):
        low = (rho + 1) / iv.e * q ** (N - rho)
        out.append(
            BoundReport("denaux_lower", inputs, _lo(low), "lower", "(rho+1)/e q^(N-rho) < s", _floor(low) + 1)
        )
        up = Fraction((rho + 1) * (rho + 2), 2) * (q ** (N - rho) + Fraction(2 * rho, rho + 2) * Fraction(q ** (N - rho) - 1, q - 1))
        out.append(
            BoundReport(
                "denaux_upper", inputs, up, "upper",
                "s <= (rho+1)(rho+2)/2 (q^(N-rho) + 2rho/(rho+2) (q^(N-rho)-1)/(q-1))", math.floor(up),
            )
        )
        c1, c2 = _constants_iv(q)
        m = _ceil(c1 * (N - rho + 1) * rho + c2)
        out.append(
            BoundReport(
                "random_subspaces_upper", inputs, m * flat, "upper",
                "s <= ceil(c1(q)(N-rho+1)rho + c2(q)) (q^(N-rho+1)-1)/(q-1)", m * flat,
            )
        )
        fs = ((N - rho + 1) * rho + 1) * flat
        out.append(
            BoundReport(
                "explicit_subspaces_upper", inputs, fs, "upper",
                "s <= ((N-rho+1)rho+1)(q^(N-rho+1)-1)/(q-1)", fs,
                note="valid only when q > N+1" + ("" if q > N + 1 else " (not applicable here)"),
            )
        )
        if rho == N - 1:
            tet = math.comb(N + 1, 2) * (q - 1) + N + 1
            out.append(BoundReport("tetrahedron_upper", inputs, tet, "upper", "C(N+1,2)(q-1)+N+1", tet))
            den = (N * (N + 1) // 2 - 2) * q - math.comb(N, 2) + min(7, 2 * q)
            out.append(
                BoundReport("denaux_tetrahedron_upper", inputs, den, "upper", "(N(N+1)/2-2)q - C(N,2) + min(7,2q)", den)
            )
            if q > 2:
                lines = _ceil(_prob_multiplier(q) * N)
                out.append(
                    BoundReport(
                        "random_lines_upper", inputs, lines * (q + 1), "upper",
                        "s <= ceil(2N/(1+1/((q+1)^2 ln q))) (q+1)", lines * (q + 1),
                    )
                )
    return out


# --------------------------------------------------------------------------
# audits of the auxiliary inequalities


@dataclass
class AuditReport:
    checks: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def gaussian_bound_audit(n_max: int = 12, q_set=(2, 3, 4, 5, 7, 8, 9), prec: int = DEFAULT_PREC) -> AuditReport:
    """Check the Gaussian-binomial and theta inequalities exhaustively over a grid."""
    rep = AuditReport()

    def check(ok: bool, what: str) -> None:
        rep.checks += 1
        if not ok:
            rep.violations.append(what)

    with _precision(prec):
        for q in q_set:
            Q = Fraction(q)
            g = gamma(q)
            for n in range(1, n_max + 1):
                for k in range(1, n + 1):
                    val = gaussian_binomial(n, k, q)
                    b = g * _ivq(Q ** ((n - k) * k))  # gamma(2) carries the extra factor 2
                    check(val < _lo(b), f"[{n},{k}]_{q} = {val} not below {b}")
                if n >= 2:
                    val = gaussian_binomial(n, n - 2, q)
                    b = Q ** (2 * (n - 2)) * Q / (Q - 1) * Q**2 / (Q**2 - 1)
                    check(val < b, f"[{n},{n - 2}]_{q} = {val} not below {b}")
            th = [theta(i, q) for i in range(n_max + 1)]
            for b_ in range(n_max + 1):
                for a in range(b_):
                    lhs = (th[a] + 1 / Q) / th[b_]
                    mid = Q ** (a - b_)
                    rhs = Fraction(th[a] + 1, th[b_])
                    check(lhs <= mid < rhs, f"theta ratio fails at a={a}, b={b_}, q={q}")
                    if a <= b_ - 2:
                        check(Fraction(th[a] + th[b_], q) > 2 * th[a] + 1, f"theta sum fails at a={a}, b={b_}, q={q}")
            for k in range(1, n_max + 1):
                check(
                    gaussian_binomial(k + 1, 2, q) * (q + 1) == th[k] * th[k - 1],
                    f"line count identity fails at k={k}, q={q}",
                )
    return rep

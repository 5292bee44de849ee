"""Polynomials in the Lefschetz class L and truncated power series over them.

Classes in the Grothendieck ring that this package produces are integer
polynomials in ``L``. Power series in ``T`` over ``Z[L]`` carry an explicit
truncation order ``N`` (coefficients ``c_0 .. c_N``); combining series of
different orders is an error rather than a silent re-truncation.

Exponentiation of a series ``A(T) = 1 + ...`` by a class goes through the
Euler factorization ``A(T) = prod_i (1 - T^i)^(-a_i)`` and the rule
``(1 - L^k T^i)^(-1) = sum_n L^(kn) T^(in)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class NonUnitConstantTerm(ValueError):
    pass


class TruncationMismatch(ValueError):
    pass


@dataclass(frozen=True)
class MotivicPoly:
    """Element of Z[L]; ``coeffs[k]`` is the coefficient of ``L^k``."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @classmethod
    def zero(cls) -> "MotivicPoly":
        return cls(())

    @classmethod
    def one(cls) -> "MotivicPoly":
        return cls((1,))

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "MotivicPoly":
        return cls((0,) * k + (c,))

    @classmethod
    def coerce(cls, x) -> "MotivicPoly":
        if isinstance(x, MotivicPoly):
            return x
        if isinstance(x, int):
            return cls((x,))
        return cls(tuple(x))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __add__(self, other) -> "MotivicPoly":
        other = MotivicPoly.coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return MotivicPoly(tuple(self[k] + other[k] for k in range(n)))

    __radd__ = __add__

    def __neg__(self) -> "MotivicPoly":
        return MotivicPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> "MotivicPoly":
        return self + (-MotivicPoly.coerce(other))

    def __rsub__(self, other) -> "MotivicPoly":
        return MotivicPoly.coerce(other) - self

    def __mul__(self, other) -> "MotivicPoly":
        other = MotivicPoly.coerce(other)
        if self.is_zero() or other.is_zero():
            return MotivicPoly.zero()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return MotivicPoly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "MotivicPoly":
        out = MotivicPoly.one()
        for _ in range(e):
            out = out * self
        return out

    def eval(self, x: int) -> int:
        """Specialize L -> x (point count over F_x when x is a prime power)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def terms(self) -> list[tuple[int, int]]:
        """Nonzero ``(power, coefficient)`` pairs, highest power first."""
        return [(k, c) for k, c in reversed(list(enumerate(self.coeffs))) if c]

    def pretty(self) -> str:
        """Table style: ``L^8+2L^7+L+1``."""
        if self.is_zero():
            return "0"
        parts = []
        for k, c in self.terms():
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                var = "L" if k == 1 else f"L^{k}"
                body = var if a == 1 else f"{a}{var}"
            parts.append((sign, body))
        s = "".join(sg + b for sg, b in parts)
        return s[1:] if s.startswith("+") else s

    def __str__(self) -> str:
        """Expression style: ``2*L^3 - L^2``."""
        if self.is_zero():
            return "0"
        out = ""
        for i, (k, c) in enumerate(self.terms()):
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                var = "L" if k == 1 else f"L^{k}"
                body = var if a == 1 else f"{a}*{var}"
            if i == 0:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out

    def to_json(self) -> list[int]:
        return list(self.coeffs)


def _coerce_coeffs(coeffs: Iterable) -> list[MotivicPoly]:
    return [MotivicPoly.coerce(c) for c in coeffs]


@dataclass(frozen=True)
class MotivicSeries:
    """Truncated series ``c_0 + c_1 T + ... + c_N T^N`` over Z[L]."""

    N: int
    coeffs: tuple[MotivicPoly, ...]

    def __post_init__(self):
        cs = _coerce_coeffs(self.coeffs)
        if len(cs) > self.N + 1:
            raise TruncationMismatch(f"{len(cs)} coefficients for order {self.N}")
        cs += [MotivicPoly.zero()] * (self.N + 1 - len(cs))
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def one(cls, N: int) -> "MotivicSeries":
        return cls(N, (MotivicPoly.one(),))

    def __getitem__(self, n: int) -> MotivicPoly:
        return self.coeffs[n]

    def truncate(self, N: int) -> "MotivicSeries":
        if N > self.N:
            raise TruncationMismatch(f"cannot extend order {self.N} to {N}")
        return MotivicSeries(N, self.coeffs[: N + 1])

    def _check(self, other: "MotivicSeries"):
        if not isinstance(other, MotivicSeries):
            return NotImplemented
        if other.N != self.N:
            raise TruncationMismatch(f"orders differ: {self.N} vs {other.N}")

    def __add__(self, other: "MotivicSeries") -> "MotivicSeries":
        self._check(other)
        return MotivicSeries(self.N, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: "MotivicSeries") -> "MotivicSeries":
        self._check(other)
        return series_mul(self, other, self.N)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MotivicSeries):
            return NotImplemented
        self._check(other)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.N, self.coeffs))

    def eval(self, x: int) -> list[int]:
        return [c.eval(x) for c in self.coeffs]

    def to_json(self) -> dict:
        return {"N": self.N, "coeffs": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, data) -> "MotivicSeries":
        return cls(int(data["N"]), tuple(MotivicPoly(tuple(c)) for c in data["coeffs"]))


def series_mul(A: MotivicSeries, B: MotivicSeries, N: int) -> MotivicSeries:
    if A.N < N or B.N < N:
        raise TruncationMismatch(f"operands of order {A.N}, {B.N} below {N}")
    out = []
    for n in range(N + 1):
        acc = MotivicPoly.zero()
        for k in range(n + 1):
            if not A[k].is_zero() and not B[n - k].is_zero():
                acc = acc + A[k] * B[n - k]
        out.append(acc)
    return MotivicSeries(N, tuple(out))


def series_inverse(A: MotivicSeries, N: int) -> MotivicSeries:
    if A.N < N:
        raise TruncationMismatch(f"operand of order {A.N} below {N}")
    if A[0] != MotivicPoly.one():
        raise NonUnitConstantTerm(f"constant term is {A[0]}, need 1")
    inv = [MotivicPoly.one()]
    for n in range(1, N + 1):
        acc = MotivicPoly.zero()
        for k in range(1, n + 1):
            acc = acc + A[k] * inv[n - k]
        inv.append(-acc)
    return MotivicSeries(N, tuple(inv))


def _geometric_power(k: int, i: int, c: int, N: int) -> MotivicSeries:
    """(1 - L^k T^i)^(-c) truncated at N, for any integer c."""
    coeffs = [MotivicPoly.zero()] * (N + 1)
    if c >= 0:
        # sum_n binom(n + c - 1, n) L^(kn) T^(in)
        b = 1
        n = 0
        while i * n <= N:
            coeffs[i * n] = MotivicPoly.monomial(k * n, b)
            n += 1
            b = b * (n + c - 1) // n
    else:
        e = -c
        b = 1
        for n in range(e + 1):
            if i * n > N:
                break
            coeffs[i * n] = MotivicPoly.monomial(k * n, (-1) ** n * b)
            b = b * (e - n) // (n + 1)
    return MotivicSeries(N, tuple(coeffs))


@dataclass(frozen=True)
class EulerFactors:
    """Exponents ``a_1 .. a_N`` with ``A(T) = prod (1 - T^i)^(-a_i)``."""

    N: int
    exponents: tuple[MotivicPoly, ...]

    def __post_init__(self):
        if len(self.exponents) != self.N:
            raise TruncationMismatch(f"{len(self.exponents)} exponents for order {self.N}")
        object.__setattr__(self, "exponents", tuple(_coerce_coeffs(self.exponents)))

    def a(self, i: int) -> MotivicPoly:
        return self.exponents[i - 1]

    def expand(self) -> MotivicSeries:
        return power_structure_pow(self, MotivicPoly.one(), self.N)


def euler_factorization(A: MotivicSeries, N: int | None = None) -> EulerFactors:
    """Peel off ``(1 - T^i)^(-a_i)`` for i = 1..N, reading a_i off the quotient."""
    N = A.N if N is None else N
    if A.N < N:
        raise TruncationMismatch(f"series of order {A.N} below {N}")
    if A[0] != MotivicPoly.one():
        raise NonUnitConstantTerm(f"constant term is {A[0]}, need 1")
    rest = A.truncate(N)
    exps = []
    for i in range(1, N + 1):
        a_i = rest[i]
        exps.append(a_i)
        if a_i.is_zero():
            continue
        # divide by (1 - T^i)^(-a_i), i.e. multiply by (1 - T^i)^(a_i)
        for k, c in enumerate(a_i.coeffs):
            if c:
                rest = series_mul(rest, _geometric_power(k, i, -c, N), N)
    return EulerFactors(N, tuple(exps))


def power_structure_pow(F: EulerFactors, exponent, N: int | None = None) -> MotivicSeries:
    """``prod_i (1 - T^i)^(-a_i * exponent)`` truncated at N."""
    N = F.N if N is None else N
    if F.N < N:
        raise TruncationMismatch(f"factors of order {F.N} below {N}")
    exponent = MotivicPoly.coerce(exponent)
    out = MotivicSeries.one(N)
    for i in range(1, N + 1):
        p = F.a(i) * exponent
        for k, c in enumerate(p.coeffs):
            if c:
                out = series_mul(out, _geometric_power(k, i, c, N), N)
    return out


def series_pow(A: MotivicSeries, exponent, N: int | None = None) -> MotivicSeries:
    N = A.N if N is None else N
    return power_structure_pow(euler_factorization(A, N), exponent, N)


def hilbert_series_from_classes(classes: Sequence, N: int | None = None) -> MotivicSeries:
    """``1 + sum_{n>=1} classes[n-1] T^n``."""
    N = len(classes) if N is None else N
    return MotivicSeries(N, (MotivicPoly.one(),) + tuple(classes[:N]))


def global_hilbert_series(d: int, N: int, punctual: MotivicSeries) -> MotivicSeries:
    """Series of [Hilb^n(A^d)] from the punctual series at the origin of A^d."""
    return power_structure_pow(euler_factorization(punctual, N), MotivicPoly.monomial(d), N)

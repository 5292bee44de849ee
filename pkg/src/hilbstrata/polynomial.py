"""Sparse multivariate integer polynomials in numbered variables.

A monomial is a sorted tuple of variable ids with repetition, so ``(3, 3, 7)``
is ``v3^2 * v7`` and ``()`` is the constant monomial. A polynomial maps
monomials to nonzero integer coefficients.
"""
from __future__ import annotations

from typing import Iterable, Mapping

Mono = tuple[int, ...]


def _mono_mul(a: Mono, b: Mono) -> Mono:
    return tuple(sorted(a + b))


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Mono, int] | Iterable[tuple[Mono, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Mono, int] = {}
        for mono, c in items:
            mono = tuple(sorted(mono))
            acc[mono] = acc.get(mono, 0) + c
        self.terms = {k: v for k, v in acc.items() if v}

    @classmethod
    def const(cls, c: int) -> "Poly":
        return cls({(): c})

    @classmethod
    def var(cls, v: int, c: int = 1) -> "Poly":
        return cls({(v,): c})

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant(self) -> int:
        return self.terms.get((), 0)

    def variables(self) -> set[int]:
        return {v for m in self.terms for v in m}

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, int):
            return Poly({m: c * other for m, c in self.terms.items()})
        out: dict[Mono, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(self.key())

    def key(self) -> tuple:
        return tuple(sorted(self.terms.items()))

    def substitute(self, v: int, expr: "Poly") -> "Poly":
        if v not in self.variables():
            return self
        powers = [Poly.const(1)]
        out = Poly()
        for mono, c in self.terms.items():
            k = mono.count(v)
            rest = Poly({tuple(x for x in mono if x != v): c})
            while len(powers) <= k:
                powers.append(powers[-1] * expr)
            out = out + rest * powers[k]
        return out

    def evaluate(self, values: Mapping[int, int] | list[int], q: int | None = None) -> int:
        total = 0
        for mono, c in self.terms.items():
            t = c
            for v in mono:
                t *= values[v]
            total += t
        return total % q if q else total

    def normalized(self) -> "Poly":
        """Scale by -1 if needed so the lex-first monomial has positive coefficient."""
        if not self.terms:
            return self
        first = min(self.terms)
        return -self if self.terms[first] < 0 else self

    def to_json(self) -> list:
        return [[c, list(m)] for m, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, data) -> "Poly":
        return cls([(tuple(m), int(c)) for c, m in data])

    def format(self, names=None) -> str:
        if not self.terms:
            return "0"
        names = names or (lambda v: f"v{v}")
        out = ""
        for i, (mono, c) in enumerate(sorted(self.terms.items())):
            factors = []
            j = 0
            while j < len(mono):
                k = mono.count(mono[j])
                factors.append(names(mono[j]) + (f"^{k}" if k > 1 else ""))
                j += k
            body = "*".join(factors)
            a = abs(c)
            if not body:
                body = str(a)
            elif a != 1:
                body = f"{a}*{body}"
            if i == 0:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out

    def __repr__(self) -> str:
        return f"Poly({self.format()})"

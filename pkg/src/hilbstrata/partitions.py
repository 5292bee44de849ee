"""m-dimensional partitions and the monomial sets attached to them.

A partition ``lam`` of ``n`` with ``m`` indexing coordinates is stored sparsely
as its support: a sorted tuple of ``(index, value)`` pairs with ``value > 0``.
Monomials in ``x0, x1, ..., xm`` are plain exponent tuples ``(e0, e1, ..., em)``;
``x0`` is the "height" variable whose exponent runs up the columns.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Mapping

Monomial = tuple[int, ...]
Index = tuple[int, ...]


class PartitionError(ValueError):
    pass


class NonMonotone(PartitionError):
    def __init__(self, smaller: Index, larger: Index, lo: int, hi: int):
        self.pair = (smaller, larger)
        super().__init__(
            f"not monotone: lambda{list(smaller)}={lo} < lambda{list(larger)}={hi}"
        )


class NonPositiveEntry(PartitionError):
    pass


class EnumerationBudgetExceeded(RuntimeError):
    def __init__(self, produced: int):
        self.produced = produced
        super().__init__(f"enumeration budget exceeded after {produced} partitions")


def monomial_key(mono: Monomial) -> tuple[int, ...]:
    """Canonical order: lex on (e1, ..., em) with x1 most significant, then e0."""
    return tuple(mono[1:]) + (mono[0],)


@dataclass(frozen=True)
class MDPartition:
    m: int
    support: tuple[tuple[Index, int], ...]

    @classmethod
    def from_mapping(cls, m: int, entries: Mapping[Index, int]) -> "MDPartition":
        return validate_partition(entries, m=m)

    @cached_property
    def entries(self) -> dict[Index, int]:
        return dict(self.support)

    @property
    def n(self) -> int:
        return sum(v for _, v in self.support)

    def __getitem__(self, idx: Index) -> int:
        return self.entries.get(tuple(idx), 0)

    def encode(self) -> str:
        """Compact canonical string, e.g. ``2:0,0=2;1,0=1``."""
        body = ";".join(",".join(map(str, r)) + f"={v}" for r, v in self.support)
        return f"{self.m}:{body}"

    def to_json(self) -> dict:
        return {"m": self.m, "entries": [[list(r), v] for r, v in self.support]}

    @classmethod
    def from_json(cls, data: Mapping) -> "MDPartition":
        m = int(data["m"])
        raw = {}
        for r, v in data["entries"]:
            r = tuple(int(x) for x in r)
            if r in raw:
                raise PartitionError(f"duplicate index {list(r)}")
            raw[r] = int(v)
        return validate_partition(raw, m=m)

    def __str__(self) -> str:
        if self.m == 1:
            return "(" + ",".join(str(v) for _, v in self.support) + ")"
        return "{" + ", ".join(f"{r}: {v}" for r, v in self.support) + "}"

    def sort_key(self) -> tuple[int, ...]:
        # descending lex on the flattened height array over the box [0, n]^m
        n = self.n
        ent = self.entries
        return tuple(
            -ent.get(r, 0) for r in itertools.product(range(n + 1), repeat=self.m)
        )


def validate_partition(candidate: Mapping, m: int | None = None) -> MDPartition:
    """Check positivity and monotonicity of a raw support map; normalize."""
    entries: dict[Index, int] = {}
    for r, v in candidate.items():
        r = (r,) if isinstance(r, int) else tuple(int(x) for x in r)
        if m is None:
            m = len(r)
        if len(r) != m:
            raise PartitionError(f"index {list(r)} does not have {m} coordinates")
        if any(x < 0 for x in r):
            raise PartitionError(f"negative coordinate in {list(r)}")
        if v == 0:
            continue
        if v < 0:
            raise NonPositiveEntry(f"entry at {list(r)} is {v}")
        entries[r] = int(v)
    if m is None or m < 1:
        raise PartitionError("dimension m must be at least 1")
    # checking immediate predecessors suffices for the product order
    for r, v in sorted(entries.items()):
        for i in range(m):
            if r[i] == 0:
                continue
            s = r[:i] + (r[i] - 1,) + r[i + 1:]
            if entries.get(s, 0) < v:
                raise NonMonotone(s, r, entries.get(s, 0), v)
    return MDPartition(m, tuple(sorted(entries.items())))


def _generate(m: int, n: int, cap) -> Iterator[dict[Index, int]]:
    # cap(index) -> upper bound for the entry at index (None = unbounded)
    if n == 0:
        yield {}
        return
    if m == 0:
        c = cap(()) if cap is not None else None
        if c is None or c >= n:
            yield {(): n}
        return
    for k in range(n, 0, -1):
        first_cap = (lambda rest: cap((0,) + rest)) if cap else None
        for first in _generate(m - 1, k, first_cap):

            def rest_cap(idx, first=first):
                bound = first.get(idx[1:], 0)
                if cap is not None:
                    c = cap((idx[0] + 1,) + idx[1:])
                    if c is not None:
                        bound = min(bound, c)
                return bound

            for rest in _generate(m, n - k, rest_cap):
                out = {(0,) + r: v for r, v in first.items()}
                out.update({(r[0] + 1,) + r[1:]: v for r, v in rest.items()})
                yield out


def enumerate_partitions(m: int, n: int, budget: int | None = None) -> list[MDPartition]:
    """All m-dimensional partitions of n, each once, in canonical order.

    A partition is built slice by slice along the first coordinate: slice 0 is
    an (m-1)-dimensional partition, and every later slice is bounded entrywise
    by the one before it.
    """
    if m < 1 or n < 0:
        raise ValueError("need m >= 1 and n >= 0")
    out = []
    for ent in _generate(m, n, None):
        out.append(MDPartition(m, tuple(sorted(ent.items()))))
        if budget is not None and len(out) > budget:
            raise EnumerationBudgetExceeded(len(out))
    out.sort(key=MDPartition.sort_key)
    return out


def order_ideal(lam: MDPartition) -> list[Monomial]:
    monos = [(j,) + r for r, v in lam.support for j in range(v)]
    return sorted(monos, key=monomial_key)


def border(lam: MDPartition) -> list[Monomial]:
    inside = set(order_ideal(lam))
    out = set()
    for t in inside:
        for i in range(lam.m + 1):
            b = t[:i] + (t[i] + 1,) + t[i + 1:]
            if b not in inside:
                out.add(b)
    return sorted(out, key=monomial_key)


def corner_indices(lam: MDPartition) -> set[Index]:
    """Indices where every decrementable coordinate strictly drops lambda."""
    if lam.n == 0:
        return set()
    out = set()
    for r in itertools.product(range(lam.n + 1), repeat=lam.m):
        v = lam[r]
        if all(
            r[i] == 0 or lam[r[:i] + (r[i] - 1,) + r[i + 1:]] > v for i in range(lam.m)
        ):
            out.add(r)
    return out


def integer_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Classical partitions of n as weakly decreasing tuples."""
    def rec(rem, mx):
        if rem == 0:
            yield ()
            return
        for p in range(min(rem, mx), 0, -1):
            for rest in rec(rem - p, p):
                yield (p,) + rest
    yield from rec(n, n)


def closed_form_punctual_A2(n: int):
    """Sum over partitions beta of n of L^(n - #parts(beta))."""
    from .motivic import MotivicPoly

    total = MotivicPoly.zero()
    for beta in integer_partitions(n):
        total = total + MotivicPoly.monomial(n - len(beta))
    return total

"""Exact solution enumeration for small polynomial systems over prime fields."""
from __future__ import annotations

from typing import Sequence

from .polynomial import Poly


class BudgetExceeded(RuntimeError):
    def __init__(self, required: int, budget: int, what: str = ""):
        self.required = required
        self.budget = budget
        super().__init__(f"{what}needs {required} assignments, budget is {budget}")


def _compile(relations: Sequence[Poly], order: Sequence[int]):
    """Group relations by the position (in ``order``) of their last variable."""
    pos = {v: i for i, v in enumerate(order)}
    checks: list[list[list[tuple[int, tuple[int, ...]]]]] = [[] for _ in order]
    for p in relations:
        last = max(pos[v] for v in p.variables())
        checks[last].append([(c, tuple(pos[v] for v in mono)) for mono, c in p.terms.items()])
    return checks


def iter_solutions(relations: Sequence[Poly], variables: Sequence[int], q: int, budget: int | None = None):
    """Yield every F_q assignment (as a tuple aligned with ``variables``) satisfying all relations.

    Depth-first over ``variables`` in the given order; a relation is evaluated
    as soon as its last variable has been assigned.
    """
    order = list(variables)
    if any(p.is_constant() and not p.is_zero() and p.constant() % q for p in relations):
        return
    relations = [p for p in relations if not p.is_constant()]
    k = len(order)
    if budget is not None and q**k > budget:
        raise BudgetExceeded(q**k, budget)
    checks = _compile(relations, order)
    vals = [0] * k

    def ok(level):
        for rel in checks[level]:
            total = 0
            for c, mono in rel:
                t = c
                for i in mono:
                    t *= vals[i]
                total += t
            if total % q:
                return False
        return True

    def rec(level):
        if level == k:
            yield tuple(vals)
            return
        for a in range(q):
            vals[level] = a
            if ok(level):
                yield from rec(level + 1)

    yield from rec(0)


def count_solutions(relations: Sequence[Poly], variables: Sequence[int], q: int, budget: int | None = None) -> int:
    return sum(1 for _ in iter_solutions(relations, variables, q, budget))


def _reduce(p: Poly, q: int) -> Poly:
    return Poly({m: c % q for m, c in p.terms.items()})


def _split(p: Poly, v: int) -> dict[int, Poly]:
    """Coefficients of ``p`` as a polynomial in ``v``: power -> Poly free of v."""
    out: dict[int, dict] = {}
    for mono, c in p.terms.items():
        k = mono.count(v)
        rest = tuple(x for x in mono if x != v)
        out.setdefault(k, {})[rest] = c
    return {k: Poly(t) for k, t in out.items()}


def _clear(p: Poly, v: int, num: Poly, den: Poly, q: int) -> Poly:
    """``p(v = num/den) * den^deg_v(p)``, reduced mod q."""
    parts = _split(p, v)
    K = max(parts)
    if K == 0:
        return p
    num_pows = [Poly.const(1)]
    den_pows = [Poly.const(1)]
    for _ in range(K):
        num_pows.append(_reduce(num_pows[-1] * num, q))
        den_pows.append(_reduce(den_pows[-1] * den, q))
    out = Poly()
    for k, coeff in parts.items():
        out = out + coeff * num_pows[k] * den_pows[K - k]
    return _reduce(out, q)


class _SplitCounter:
    """Exact F_q point counts by case splits on linearly occurring variables.

    For a relation ``c*v + d`` with ``v`` absent from ``c`` and ``d``, the
    points split into those with ``c != 0`` (where ``v = -d/c`` is determined)
    and those with ``c = d = 0``. Inequations ``c != 0`` are carried along and
    resolved at the end by inclusion-exclusion. When no variable occurs
    linearly, the most frequent one is enumerated.
    """

    def __init__(self, q: int, budget: int | None):
        self.q = q
        self.budget = budget
        self.work = 0
        self.memo: dict = {}

    def _tick(self, k: int = 1):
        self.work += k
        if self.budget is not None and self.work > self.budget:
            raise BudgetExceeded(self.work, self.budget, "split counting ")

    def count(self, rels: list[Poly], cons: list[Poly], nvars: int) -> int:
        q = self.q
        rs = {}
        for p in rels:
            p = _reduce(p, q)
            if p.is_zero():
                continue
            if p.is_constant():
                return 0
            rs[p.key()] = p
        cs = {}
        for g in cons:
            g = _reduce(g, q)
            if g.is_zero():
                return 0
            if g.is_constant():
                continue
            cs[g.key()] = g
        used = set()
        for p in list(rs.values()) + list(cs.values()):
            used |= p.variables()
        factor = q ** (nvars - len(used))
        key = (tuple(sorted(rs)), tuple(sorted(cs)), len(used))
        if key in self.memo:
            return factor * self.memo[key]
        self._tick()
        val = self._count(sorted(rs.values(), key=Poly.key), sorted(cs.values(), key=Poly.key), used)
        self.memo[key] = val
        return factor * val

    def _count(self, rels: list[Poly], cons: list[Poly], used: set[int]) -> int:
        q = self.q
        nv = len(used)
        if not rels:
            if not cons:
                return q**nv
            g, rest = cons[0], cons[1:]
            return self.count([], rest, nv) - self.count([g], rest, nv)
        best = None
        for p in sorted(rels, key=lambda p: (len(p.terms), p.key())):
            for v in sorted(p.variables()):
                parts = _split(p, v)
                if max(parts) != 1:
                    continue
                c = parts[1]
                d = parts.get(0, Poly())
                if c.is_constant():
                    inv = pow(c.constant(), -1, q)
                    num = -d * inv
                    new_rels = [_clear(r, v, num, Poly.const(1), q) for r in rels if r is not p]
                    new_cons = [_clear(g, v, num, Poly.const(1), q) for g in cons]
                    return self.count(new_rels, new_cons, nv - 1)
                score = (len(c.terms), c.degree(), len(p.terms))
                if best is None or score < best[0]:
                    best = (score, p, v, c, d)
        if best is not None:
            _, p, v, c, d = best
            others = [r for r in rels if r is not p]
            with_c = self.count(
                [_clear(r, v, -d, c, q) for r in others],
                [_clear(g, v, -d, c, q) for g in cons] + [c],
                nv - 1,
            )
            without_c = self.count(others + [c, d], cons, nv)
            return with_c + without_c
        # no linear occurrence anywhere: enumerate the most frequent variable
        freq: dict[int, int] = {}
        for p in rels:
            for v in p.variables():
                freq[v] = freq.get(v, 0) + 1
        v = min(freq, key=lambda x: (-freq[x], x))
        self._tick(q)
        total = 0
        for a in range(q):
            val = Poly.const(a)
            total += self.count(
                [r.substitute(v, val) for r in rels], [g.substitute(v, val) for g in cons], nv - 1
            )
        return total


def count_by_splitting(relations: Sequence[Poly], variables: Sequence[int], q: int, budget: int | None = None) -> int:
    """Number of F_q points of ``relations = 0`` in the affine space on ``variables``."""
    vs = set(variables)
    for p in relations:
        if not p.variables() <= vs:
            raise ValueError("relation mentions an undeclared variable")
    return _SplitCounter(q, budget).count(list(relations), [], len(vs))

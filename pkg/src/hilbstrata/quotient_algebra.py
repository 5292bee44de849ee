"""Concrete points of a stratum over F_q and recovery of their partition.

A point assigns an F_q value to every coefficient variable. Substituting it
into the formal multiplication matrices gives commuting matrices acting on
``F_q^n`` (the quotient algebra in the basis ``O_lam``). The partition is read
back off the chain of subquotients ``x1^r A / x1^(r+1) A`` and its refinements
along ``x2, ..., xm``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

import numpy as np

from .border_relations import (
    RelationSystem,
    StratumData,
    commutator_relations,
    formal_multiplication_matrices,
)
from .counting import BudgetExceeded, iter_solutions
from .partitions import MDPartition, Monomial, validate_partition
from .stratum import eliminate

EXHAUSTIVE_LIMIT = 2**16


class NoPoints(RuntimeError):
    pass


class NotCommuting(ValueError):
    pass


@dataclass(frozen=True)
class StratumPoint:
    q: int
    assignment: tuple[int, ...]  # value of variable id i at position i


def rref(mat: np.ndarray, q: int) -> np.ndarray:
    """Row-reduced echelon form over F_q, zero rows dropped."""
    a = np.array(mat, dtype=np.int64) % q
    if a.ndim != 2 or a.size == 0:
        return a.reshape(0, a.shape[-1] if a.ndim == 2 else 0)
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, q)) % q
        others = np.nonzero(a[:, c])[0]
        for o in others:
            if o != r:
                a[o] = (a[o] - a[o, c] * a[r]) % q
        r += 1
    return a[:r]


class Subspace:
    """Subspace of F_q^n held as a canonical RREF basis (rows)."""

    def __init__(self, rows, n: int, q: int):
        self.n = n
        self.q = q
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, n)
        self.basis = rref(rows, q) if len(rows) else rows

    @classmethod
    def full(cls, n: int, q: int) -> "Subspace":
        return cls(np.eye(n, dtype=np.int64), n, q)

    @classmethod
    def zero(cls, n: int, q: int) -> "Subspace":
        return cls(np.zeros((0, n), dtype=np.int64), n, q)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(np.vstack([self.basis, other.basis]), self.n, self.q)

    def image(self, T: np.ndarray) -> "Subspace":
        if not self.dim:
            return self
        return Subspace((T @ self.basis.T).T % self.q, self.n, self.q)

    def contains(self, other: "Subspace") -> bool:
        return (self + other).dim == self.dim

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and np.array_equal(self.basis, other.basis)


def _stratum(lam: MDPartition):
    data = StratumData(lam)
    system = commutator_relations(lam, data)
    return data, system, eliminate(system)


def sample_points(
    lam: MDPartition,
    q: int,
    count: int,
    budget: int = 200_000_000,
    seed: int = 0,
    context: tuple | None = None,
) -> list[StratumPoint]:
    """Up to ``count`` distinct F_q points of the stratum, each re-verified.

    Free coordinates are assigned directly, the variables tied by residual
    relations are drawn from their enumerated solution set, and eliminated
    variables are recomputed from their substitutions.
    """
    data, system, residual = context or _stratum(lam)
    rng = random.Random(seed)
    if residual.empty:
        raise NoPoints(f"stratum {lam} is empty")
    active = residual.active_vars()
    spare = [v for v in residual.free_vars if v not in set(active)]
    if q ** len(active) > budget:
        raise BudgetExceeded(q ** len(active), budget, "residual enumeration ")
    sols = list(iter_solutions(residual.residual_relations, active, q)) if active else [()]
    if not sols:
        raise NoPoints(f"stratum {lam} has no F_{q} points")
    total = len(sols) * q ** len(spare)
    if total <= EXHAUSTIVE_LIMIT:
        everything = [
            (s, f) for s in sols for f in itertools.product(range(q), repeat=len(spare))
        ]
        chosen = everything if total <= count else rng.sample(everything, count)
    else:
        picked = set()
        while len(picked) < count:
            s = rng.randrange(len(sols))
            f = tuple(rng.randrange(q) for _ in spare)
            picked.add((s, f))
        chosen = [(sols[s], f) for s, f in sorted(picked)]
    out = []
    for s, f in chosen:
        vals = dict(zip(active, s))
        vals.update(zip(spare, f))
        full = residual.back_substitute(vals, q)
        point = StratumPoint(q, tuple(full[v] % q for v in range(residual.num_vars)))
        if not system.solutions_satisfied(point.assignment, q):
            raise AssertionError(f"sampled point of {lam} violates the original relations")
        out.append(point)
    return out


def instantiate_matrices(lam: MDPartition, point: StratumPoint, data: StratumData | None = None) -> list[np.ndarray]:
    data = data or StratumData(lam)
    q = point.q
    out = []
    for T in formal_multiplication_matrices(lam, data):
        M = np.zeros((T.size, T.size), dtype=np.int64)
        for l, col in enumerate(T.columns):
            for k, p in col.items():
                M[k, l] = p.evaluate(point.assignment, q)
        out.append(M)
    return out


def check_commuting(mats, q: int | None = None) -> bool:
    for A, B in itertools.combinations(mats, 2):
        d = A @ B - B @ A
        if q is not None:
            d %= q
        if np.any(d):
            return False
    return True


def partition_from_matrices(mats, m: int, n: int, q: int, check: bool = True) -> MDPartition:
    """Read the partition off the subquotient chain of commuting matrices.

    At level t (x_t, processed in order x1..xm) a node ``(V, W)`` splits into
    children ``(T_t^r V + W, T_t^(r+1) V + W)`` for r = 0, 1, ... until the
    child is trivial; after level m the leaf dimension is the entry of lambda.
    """
    if not check_commuting(mats, q):
        raise NotCommuting("matrices do not commute")
    if n == 0:
        return validate_partition({}, m=m)
    entries: dict[tuple[int, ...], int] = {}

    def rec(level: int, V: Subspace, W: Subspace, index: tuple[int, ...]):
        if check:
            # sums of images of commuting operators stay invariant under all of them
            for T in mats:
                assert V.contains(V.image(T)) and W.contains(W.image(T)), "subquotient not invariant"
        if level > m:
            d = V.dim - W.dim
            if d:
                entries[index] = d
            return
        T = mats[level]
        cur = V
        total = 0
        for r in itertools.count():
            nxt = cur.image(T)
            child_v = cur + W
            child_w = nxt + W
            d = child_v.dim - child_w.dim
            if d == 0:
                break
            total += d
            rec(level + 1, child_v, child_w, index + (r,))
            cur = nxt
        if check:
            assert total == V.dim - W.dim, "subquotient dimensions do not telescope"

    rec(1, Subspace.full(n, q), Subspace.zero(n, q), ())
    return validate_partition(entries, m=m)


def _monomial_vector(mono: Monomial, mats, e: np.ndarray, q: int) -> np.ndarray:
    v = e.copy()
    for r, k in enumerate(mono):
        for _ in range(k):
            v = (mats[r] @ v) % q
    return v


def annihilation_ok(lam: MDPartition, point: StratumPoint, mats=None, data: StratumData | None = None) -> bool:
    """Every border generator, evaluated on the matrices, kills the class of 1."""
    data = data or StratumData(lam)
    mats = mats if mats is not None else instantiate_matrices(lam, point, data)
    q = point.q
    n = len(data.basis)
    if n == 0:
        return True
    e = np.zeros(n, dtype=np.int64)
    e[data.basis_index[(0,) * (lam.m + 1)]] = 1
    for j, b in enumerate(data.border):
        v = _monomial_vector(b, mats, e, q)
        for var in data.variables:
            if var.border_index == j:
                v[var.target_index] -= point.assignment[var.id]
        if np.any(v % q):
            return False
    return True


def variable_names(m: int) -> list[str]:
    return ["z", "x", "y"][: m + 1] if m <= 2 else [f"x{i}" for i in range(m + 1)]


def format_monomial(mono: Monomial, names: list[str]) -> str:
    parts = []
    for i in range(len(mono)):
        k = mono[i]
        if k == 1:
            parts.append(names[i])
        elif k > 1:
            parts.append(f"{names[i]}^{k}")
    return "*".join(parts) if parts else "1"


def ideal_generators(lam: MDPartition, point: StratumPoint | None = None, data: StratumData | None = None) -> list[str]:
    """Border generators ``b - sum a * t``; symbolic when ``point`` is None."""
    data = data or StratumData(lam)
    names = variable_names(lam.m)
    out = []
    for j, b in enumerate(data.border):
        s = format_monomial(b, names)
        for var in data.variables:
            if var.border_index != j:
                continue
            t = format_monomial(var.target_mono, names)
            if point is None:
                s += f" - {var.name}*{t}"
            else:
                c = point.assignment[var.id]
                if c:
                    coef = "" if c == 1 else f"{c}*"
                    s += f" - {coef}{t}"
        out.append(s)
    return out


@dataclass
class RoundTripReport:
    lam: MDPartition
    q: int
    points_tested: int
    commute_ok: bool
    roundtrip_ok: bool
    annihilation_ok: bool
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.commute_ok and self.roundtrip_ok and self.annihilation_ok

    def to_json(self) -> dict:
        d = {
            "lambda": self.lam.to_json(),
            "q": self.q,
            "points_tested": self.points_tested,
            "commute_ok": self.commute_ok,
            "roundtrip_ok": self.roundtrip_ok,
        }
        if self.detail:
            d["detail"] = self.detail
        return d


def round_trip(lam: MDPartition, q: int, samples: int, seed: int = 0, budget: int = 200_000_000) -> RoundTripReport:
    data, system, residual = _stratum(lam)
    points = sample_points(lam, q, samples, budget=budget, seed=seed, context=(data, system, residual))
    commute = recovered = annihilated = True
    detail = ""
    for pt in points:
        mats = instantiate_matrices(lam, pt, data)
        if not check_commuting(mats, q):
            commute = False
            detail = detail or f"matrices do not commute at {pt.assignment}"
            continue
        got = partition_from_matrices(mats, lam.m, lam.n, q)
        if got != lam:
            recovered = False
            detail = detail or f"recovered {got} at {pt.assignment}"
        if not annihilation_ok(lam, pt, mats, data):
            annihilated = False
            detail = detail or f"generator does not annihilate 1 at {pt.assignment}"
    return RoundTripReport(lam, q, len(points), commute, recovered, annihilated, detail)


def solution_set(system: RelationSystem, q: int, budget: int | None = None) -> set[tuple[int, ...]]:
    """Every F_q solution of ``system`` (exhaustive, with pruning)."""
    nv = len(system.variables)
    # descending ids: variables tend to be determined by higher-numbered ones
    order = list(range(nv))[::-1]
    sols = iter_solutions(system.relations, order, q, budget)
    return {tuple(reversed(s)) for s in sols}

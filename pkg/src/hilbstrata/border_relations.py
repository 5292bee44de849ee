"""Formal multiplication matrices of an order ideal and their commutation relations.

For a partition ``lam`` with order ideal ``O = (t_1..t_n)`` and border
``(b_1..b_nu)``, every border monomial gets a generator
``F_j = b_j - sum_i alpha^j_i t_i``. Only coefficients whose target ``t_i`` has
an x1..xm tail strictly lex-greater than the tail of ``b_j`` are variables;
all other ``alpha^j_i`` are structurally zero. The stratum of ideals of type
``lam`` is cut out by the commutativity of the matrices of multiplication by
``x_0, ..., x_m``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .partitions import MDPartition, Monomial, border, order_ideal
from .polynomial import Poly


@dataclass(frozen=True)
class CoeffVar:
    id: int
    border_index: int
    target_index: int
    border_mono: Monomial
    target_mono: Monomial

    @property
    def name(self) -> str:
        b = " ".join(map(str, self.border_mono))
        t = " ".join(map(str, self.target_mono))
        return f"a[{b}][{t}]"

    @property
    def label(self) -> tuple[str, str]:
        """Compact superscript/subscript pair, e.g. ``("002", "010")``."""
        return "".join(map(str, self.border_mono)), "".join(map(str, self.target_mono))


@dataclass
class StratumData:
    """Order ideal, border and coefficient variables of one partition."""

    lam: MDPartition
    basis: list[Monomial] = field(init=False)
    border: list[Monomial] = field(init=False)
    variables: list[CoeffVar] = field(init=False)

    def __post_init__(self):
        self.basis = order_ideal(self.lam)
        self.border = border(self.lam)
        self.variables = coefficient_variables(self.lam, self.basis, self.border)

    @cached_property
    def basis_index(self) -> dict[Monomial, int]:
        return {t: i for i, t in enumerate(self.basis)}

    @cached_property
    def border_index(self) -> dict[Monomial, int]:
        return {b: j for j, b in enumerate(self.border)}

    @cached_property
    def var_at(self) -> dict[tuple[int, int], CoeffVar]:
        """(border index j, target index i) -> variable."""
        return {(v.border_index, v.target_index): v for v in self.variables}

    def alpha(self, j: int, i: int) -> Poly:
        v = self.var_at.get((j, i))
        return Poly.var(v.id) if v is not None else Poly()

    def rho(self, r: int, i: int) -> tuple[str, int]:
        """Where x_r * t_i lands: ``("O", j)`` for t_j, ``("B", k)`` for b_k."""
        t = self.basis[i]
        prod = t[:r] + (t[r] + 1,) + t[r + 1:]
        if prod in self.basis_index:
            return "O", self.basis_index[prod]
        return "B", self.border_index[prod]


def coefficient_variables(lam: MDPartition, basis=None, bord=None) -> list[CoeffVar]:
    basis = order_ideal(lam) if basis is None else basis
    bord = border(lam) if bord is None else bord
    out = []
    for j, b in enumerate(bord):
        for i, t in enumerate(basis):
            # tuple comparison is lex with x1 most significant
            if t[1:] > b[1:]:
                out.append(CoeffVar(len(out), j, i, b, t))
    return out


# Sparse symbolic matrix: column index -> {row index: entry polynomial}.
# Structural entries are Poly.const(1); coefficient entries are Poly.var(id).
Columns = list[dict[int, Poly]]


@dataclass
class SymbolicMatrix:
    size: int
    columns: Columns

    def entry(self, k: int, l: int) -> Poly:
        return self.columns[l].get(k, Poly())

    def dense(self) -> list[list[Poly]]:
        return [[self.entry(k, l) for l in range(self.size)] for k in range(self.size)]

    def __matmul__(self, other: "SymbolicMatrix") -> "SymbolicMatrix":
        cols = []
        for l in range(self.size):
            out: dict[int, Poly] = {}
            for d, b in other.columns[l].items():
                for k, a in self.columns[d].items():
                    out[k] = out.get(k, Poly()) + a * b
            cols.append({k: p for k, p in out.items() if not p.is_zero()})
        return SymbolicMatrix(self.size, cols)


def formal_multiplication_matrices(lam: MDPartition, data: StratumData | None = None) -> list[SymbolicMatrix]:
    data = data or StratumData(lam)
    n = len(data.basis)
    mats = []
    for r in range(lam.m + 1):
        cols: Columns = []
        for l in range(n):
            kind, idx = data.rho(r, l)
            if kind == "O":
                cols.append({idx: Poly.const(1)})
            else:
                cols.append(
                    {v.target_index: Poly.var(v.id) for v in data.variables if v.border_index == idx}
                )
        mats.append(SymbolicMatrix(n, cols))
    return mats


@dataclass
class RelationSystem:
    variables: list[CoeffVar]
    relations: list[Poly]

    def __post_init__(self):
        self.relations = normalize_relations(self.relations)

    def name(self, vid: int) -> str:
        return self.variables[vid].name

    def solutions_satisfied(self, values, q: int) -> bool:
        return all(p.evaluate(values, q) == 0 for p in self.relations)

    def to_json(self) -> dict:
        return {
            "variables": [
                {
                    "id": v.id,
                    "name": v.name,
                    "border": list(v.border_mono),
                    "target": list(v.target_mono),
                }
                for v in self.variables
            ],
            "relations": [p.to_json() for p in self.relations],
        }

    def format_relations(self) -> list[str]:
        return [p.format(self.name) + " = 0" for p in self.relations]


def normalize_relations(relations) -> list[Poly]:
    seen = {}
    for p in relations:
        if p.is_zero():
            continue
        p = p.normalized()
        seen.setdefault(p.key(), p)
    return [seen[k] for k in sorted(seen)]


def commutator_relations(lam: MDPartition, data: StratumData | None = None) -> RelationSystem:
    """Entries of ``T_r T_s - T_s T_r`` for all ``r < s``."""
    data = data or StratumData(lam)
    mats = formal_multiplication_matrices(lam, data)
    rels = []
    for r in range(len(mats)):
        for s in range(r + 1, len(mats)):
            ab = mats[r] @ mats[s]
            ba = mats[s] @ mats[r]
            for l in range(ab.size):
                rows = set(ab.columns[l]) | set(ba.columns[l])
                for k in sorted(rows):
                    rels.append(ab.entry(k, l) - ba.entry(k, l))
    return RelationSystem(data.variables, rels)


def commutator_entries(lam: MDPartition, data: StratumData | None = None) -> dict[tuple[int, int, int, int], Poly]:
    """Nonzero commutator entries keyed by ``(r, s, row, col)``."""
    data = data or StratumData(lam)
    mats = formal_multiplication_matrices(lam, data)
    out = {}
    for r in range(len(mats)):
        for s in range(r + 1, len(mats)):
            ab = mats[r] @ mats[s]
            ba = mats[s] @ mats[r]
            for l in range(ab.size):
                for k in set(ab.columns[l]) | set(ba.columns[l]):
                    p = ab.entry(k, l) - ba.entry(k, l)
                    if not p.is_zero():
                        out[(r, s, k, l)] = p
    return out


def _apply_row(data: StratumData, r: int, p: int, column_of) -> Poly:
    """Row p of ``T_r`` applied to the vector ``d -> column_of(d)``.

    This is the shared left-hand side shape of the three equation families:
    sum over d with x_r t_d in O of delta(p, rho_r(d)) * column_of(d)
    plus sum over d with x_r t_d on the border of alpha^{rho_r(d)}_p * column_of(d).
    """
    acc = Poly()
    for d in range(len(data.basis)):
        col = column_of(d)
        if col.is_zero():
            continue
        kind, idx = data.rho(r, d)
        if kind == "O":
            if idx == p:
                acc = acc + col
        else:
            acc = acc + data.alpha(idx, p) * col
    return acc


def hardrel_entries(lam: MDPartition, data: StratumData | None = None) -> dict[tuple[int, int, int, int], Poly]:
    """The three explicit equation families, keyed by ``(r, s, p, i)``.

    (1) x_r t_i = t_j, x_s t_i = b_k, x_r b_k = b_l:  (T_r alpha^k)_p = alpha^l_p
    (2) same with r and s exchanged
    (3) x_r t_i = b_j, x_s t_i = b_k:  (T_r alpha^k)_p = (T_s alpha^j)_p
    Entries are ``lhs - rhs`` with ``r < s`` and the commutator sign ``T_r T_s - T_s T_r``.
    """
    data = data or StratumData(lam)
    n = len(data.basis)
    m = lam.m
    out = {}
    for r in range(m + 1):
        for s in range(r + 1, m + 1):
            for i in range(n):
                kr, jr = data.rho(r, i)
                ks, js = data.rho(s, i)
                if kr == "O" and ks == "O":
                    continue
                for p in range(n):
                    if kr == "O" and ks == "B":
                        k = js
                        bl = _shift(data.border[k], r)
                        l = data.border_index[bl]
                        lhs = _apply_row(data, r, p, lambda d: data.alpha(k, d))
                        val = lhs - data.alpha(l, p)
                    elif kr == "B" and ks == "O":
                        k = jr
                        bl = _shift(data.border[k], s)
                        l = data.border_index[bl]
                        lhs = _apply_row(data, s, p, lambda d: data.alpha(k, d))
                        # this family computes T_s T_r - T_r T_s; flip to match
                        val = data.alpha(l, p) - lhs
                    else:
                        j, k = jr, js
                        lhs = _apply_row(data, r, p, lambda d: data.alpha(k, d))
                        rhs = _apply_row(data, s, p, lambda d: data.alpha(j, d))
                        val = lhs - rhs
                    if not val.is_zero():
                        out[(r, s, p, i)] = val
    return out


def _shift(mono: Monomial, r: int) -> Monomial:
    return mono[:r] + (mono[r] + 1,) + mono[r + 1:]


def hardrel_relations(lam: MDPartition, data: StratumData | None = None) -> RelationSystem:
    data = data or StratumData(lam)
    return RelationSystem(data.variables, list(hardrel_entries(lam, data).values()))


def compare_relation_sources(lam: MDPartition) -> list[tuple[int, int, int, int]]:
    """Entries ``(r, s, row, col)`` where the two derivations disagree."""
    data = StratumData(lam)
    a = commutator_entries(lam, data)
    b = hardrel_entries(lam, data)
    return sorted(k for k in set(a) | set(b) if a.get(k, Poly()) != b.get(k, Poly()))

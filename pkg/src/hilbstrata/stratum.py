"""Classes of strata: elimination, point counting over F_p, interpolation.

The relation system of a stratum is first reduced by substituting away every
variable that occurs linearly with a unit coefficient in some relation (and
nowhere else in that relation). Such substitutions are valid over Z, hence
over every prime field at once. Whatever survives is counted by brute force
over several primes and the counts are interpolated to a polynomial in L.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .border_relations import RelationSystem, StratumData, commutator_relations, normalize_relations
from .config import ConfigError, CountingConfig
from .motivic import MotivicPoly
from .counting import BudgetExceeded, count_by_splitting, count_solutions, iter_solutions
from .partitions import MDPartition, enumerate_partitions
from .polynomial import Poly

log = logging.getLogger(__name__)


@dataclass
class ResidualSystem:
    """What is left of a relation system after unit-coefficient elimination.

    ``substitutions`` are in elimination order; each expression may only
    mention variables that are still alive or eliminated later, so
    back-substitution runs in reverse.
    """

    num_vars: int
    residual_vars: list[int]
    residual_relations: list[Poly]
    substitutions: list[tuple[int, Poly]]
    pure_free: list[int]
    empty: bool = False

    @property
    def eliminated_count(self) -> int:
        return len(self.substitutions)

    @property
    def pure_free_count(self) -> int:
        return len(self.pure_free)

    @property
    def affine(self) -> bool:
        return not self.empty and not self.residual_relations

    @property
    def free_vars(self) -> list[int]:
        return sorted(self.residual_vars + self.pure_free)

    @property
    def dimension(self) -> int:
        return len(self.residual_vars) + len(self.pure_free)

    def active_vars(self) -> list[int]:
        """Variables that occur in some residual relation."""
        return sorted(set().union(*(p.variables() for p in self.residual_relations)))

    def back_substitute(self, values: dict[int, int], q: int) -> dict[int, int]:
        out = dict(values)
        for v, expr in reversed(self.substitutions):
            out[v] = expr.evaluate(out, q)
        return out

    def to_record(self) -> dict:
        return {
            "num_vars": self.num_vars,
            "residual_vars": self.residual_vars,
            "residual_relations": [p.to_json() for p in self.residual_relations],
            "substitutions": [[v, e.to_json()] for v, e in self.substitutions],
            "pure_free": self.pure_free,
            "empty": self.empty,
        }

    @classmethod
    def from_record(cls, d: dict) -> "ResidualSystem":
        return cls(
            d["num_vars"],
            list(d["residual_vars"]),
            [Poly.from_json(p) for p in d["residual_relations"]],
            [(v, Poly.from_json(e)) for v, e in d["substitutions"]],
            list(d["pure_free"]),
            d["empty"],
        )

    def to_json(self, names=None) -> dict:
        names = names or (lambda v: f"v{v}")
        return {
            "residual_vars": [names(v) for v in self.residual_vars],
            "residual_relations": [p.to_json() for p in self.residual_relations],
            "residual_relations_text": [p.format(names) + " = 0" for p in self.residual_relations],
            "eliminated": [[names(v), e.format(names)] for v, e in self.substitutions],
            "eliminated_count": self.eliminated_count,
            "pure_free": [names(v) for v in self.pure_free],
            "pure_free_count": self.pure_free_count,
            "empty": self.empty,
            "affine": self.affine,
        }


def _find_pivot(rels: list[Poly]) -> tuple[int, Poly, int] | None:
    candidates = sorted(set().union(*(p.variables() for p in rels))) if rels else []
    for v in candidates:
        for p in rels:
            c = p.terms.get((v,))
            if c not in (1, -1):
                continue
            if any(v in mono for mono in p.terms if mono != (v,)):
                continue
            return v, p, c
    return None


def eliminate(system: RelationSystem) -> ResidualSystem:
    nvars = len(system.variables)
    seen = set().union(*(p.variables() for p in system.relations)) if system.relations else set()
    rels = normalize_relations(system.relations)
    subs: list[tuple[int, Poly]] = []
    empty = False
    while True:
        if any(p.is_constant() for p in rels):
            empty = True
            break
        pivot = _find_pivot(rels)
        if pivot is None:
            break
        v, p, c = pivot
        # c*v + rest = 0 with c = +-1  =>  v = -c * rest
        expr = (p - Poly.var(v, c)) * (-c)
        subs.append((v, expr))
        rels = normalize_relations(q.substitute(v, expr) for q in rels if q is not p)
    eliminated = {v for v, _ in subs}
    residual_vars = sorted(seen - eliminated)
    pure_free = sorted(set(range(nvars)) - seen)
    return ResidualSystem(nvars, residual_vars, rels, subs, pure_free, empty)


COUNTERS = {"brute": count_solutions, "split": count_by_splitting}


def count_points(residual: ResidualSystem, q: int, budget: int = 200_000_000, method: str = "brute") -> int:
    """Exact number of F_q points of the stratum described by ``residual``.

    ``brute`` enumerates the variables tied by residual relations with early
    pruning; ``split`` case-splits on linearly occurring variables.
    """
    if residual.empty:
        return 0
    active = residual.active_vars()
    spare = residual.dimension - len(active)
    if not active:
        return q**spare
    n = COUNTERS[method](residual.residual_relations, active, q, budget)
    return n * q**spare


def interpolate(points: Sequence[tuple[int, int]]) -> list[Fraction]:
    """Coefficients (ascending) of the unique polynomial of degree < len(points) through them."""
    xs = [Fraction(x) for x, _ in points]
    k = len(points)
    coeffs = [Fraction(0)] * k
    for i, (xi, (_, yi)) in enumerate(zip(xs, points)):
        # basis polynomial prod_{j != i} (X - x_j) / (x_i - x_j)
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for d in range(len(basis) - 1):
                basis[d] -= xj * basis[d + 1]
            denom *= xi - xj
        scale = Fraction(yi) / denom
        for d, b in enumerate(basis):
            coeffs[d] += scale * b
    return coeffs


@dataclass
class NotPolynomialEvidence:
    counts: dict[int, int]
    reason: str

    def to_json(self) -> dict:
        return {"reason": self.reason, "counts": {str(k): v for k, v in self.counts.items()}}


@dataclass
class StratumResult:
    lam: MDPartition
    residual: ResidualSystem
    counts: dict[int, int] = field(default_factory=dict)
    klass: MotivicPoly | None = None
    evidence: NotPolynomialEvidence | None = None
    from_counts: bool = False
    num_variables: int = 0
    num_relations: int = 0

    @property
    def affine(self) -> bool:
        return self.residual.affine

    @property
    def is_polynomial(self) -> bool:
        return self.klass is not None

    def summary_json(self) -> dict:
        return {
            "lambda": self.lam.to_json(),
            "n": self.lam.n,
            "num_variables": self.num_variables,
            "num_relations": self.num_relations,
            "affine": self.affine,
            "empty": self.residual.empty,
            "dimension": self.residual.dimension,
            "eliminated_count": self.residual.eliminated_count,
            "pure_free_count": self.residual.pure_free_count,
            "residual_relation_count": len(self.residual.residual_relations),
            "counts": {str(k): v for k, v in sorted(self.counts.items())},
            "class": self.klass.to_json() if self.klass is not None else None,
            "class_text": str(self.klass) if self.klass is not None else None,
            "from_counts": self.from_counts,
            "evidence": self.evidence.to_json() if self.evidence else None,
        }

    def to_record(self) -> dict:
        rec = self.summary_json()
        rec["residual"] = self.residual.to_record()
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "StratumResult":
        ev = rec.get("evidence")
        return cls(
            lam=MDPartition.from_json(rec["lambda"]),
            residual=ResidualSystem.from_record(rec["residual"]),
            counts={int(k): v for k, v in rec["counts"].items()},
            klass=MotivicPoly(tuple(rec["class"])) if rec["class"] is not None else None,
            evidence=(
                NotPolynomialEvidence({int(k): v for k, v in ev["counts"].items()}, ev["reason"])
                if ev
                else None
            ),
            from_counts=rec["from_counts"],
            num_variables=rec["num_variables"],
            num_relations=rec["num_relations"],
        )


def class_from_counts(residual: ResidualSystem, cfg: CountingConfig) -> tuple[dict[int, int], MotivicPoly | None, str]:
    """Count over enough primes to pin down the residual count polynomial, then validate."""
    active = residual.active_vars()
    spare = residual.dimension - len(active)
    deg_bound = len(active)
    need = deg_bound + 1 + cfg.holdout_count
    if len(cfg.primes) < need:
        raise ConfigError(f"need {need} primes, config has {len(cfg.primes)}")
    primes = cfg.primes[:need]
    core = {}
    for q in primes:
        core[q] = COUNTERS[cfg.method](residual.residual_relations, active, q, cfg.budget)
    counts = {q: c * q**spare for q, c in core.items()}
    nodes = primes[: deg_bound + 1]
    coeffs = interpolate([(q, core[q]) for q in nodes])
    if any(c.denominator != 1 for c in coeffs):
        return counts, None, "interpolated coefficients are not integers"
    poly = MotivicPoly(tuple(int(c) for c in coeffs))
    if poly.degree > deg_bound:
        return counts, None, f"degree {poly.degree} exceeds bound {deg_bound}"
    for q in primes[deg_bound + 1:]:
        if poly.eval(q) != core[q]:
            return counts, None, f"holdout prime {q}: count {core[q]} != {poly.eval(q)}"
    return counts, poly * MotivicPoly.monomial(spare), ""


def stratum_class(lam: MDPartition, cfg: CountingConfig | None = None) -> StratumResult:
    cfg = cfg or CountingConfig()
    data = StratumData(lam)
    system = commutator_relations(lam, data)
    residual = eliminate(system)
    res = StratumResult(
        lam, residual, num_variables=len(system.variables), num_relations=len(system.relations)
    )
    if residual.empty:
        res.klass = MotivicPoly.zero()
    elif residual.affine:
        res.klass = MotivicPoly.monomial(residual.dimension)
    else:
        counts, poly, reason = class_from_counts(residual, cfg)
        res.counts = counts
        res.from_counts = True
        if poly is None:
            log.warning("stratum %s: no polynomial count (%s)", lam, reason)
            res.evidence = NotPolynomialEvidence(counts, reason)
        else:
            res.klass = poly
    return res


class StratumNotPolynomial(RuntimeError):
    def __init__(self, results: list[StratumResult]):
        self.results = results
        bad = [str(r.lam) for r in results if r.klass is None]
        super().__init__(f"strata without polynomial class: {', '.join(bad)}")


def _stratum_worker(args):
    lam, cfg = args
    return stratum_class(lam, cfg)


def stratum_results(m: int, n: int, cfg: CountingConfig | None = None, cache=None) -> list[StratumResult]:
    """Results for every partition of n, in canonical order, using/filling ``cache``."""
    cfg = cfg or CountingConfig()
    lams = enumerate_partitions(m, n)
    results: dict[int, StratumResult] = {}
    todo = []
    for i, lam in enumerate(lams):
        hit = cache.get(lam) if cache is not None else None
        if hit is not None:
            results[i] = hit
        else:
            todo.append(i)
    if cfg.workers > 1 and len(todo) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(cfg.workers) as pool:
            fresh = pool.map(_stratum_worker, [(lams[i], cfg) for i in todo])
            _collect(todo, fresh, results, cache)
    else:
        _collect(todo, (stratum_class(lams[i], cfg) for i in todo), results, cache)
    return [results[i] for i in range(len(lams))]


def _collect(todo, fresh, results, cache):
    # write each result as it arrives so an interrupted run keeps finished strata
    for i, r in zip(todo, fresh):
        results[i] = r
        if cache is not None:
            cache.put(r)


def punctual_class(m: int, n: int, cfg: CountingConfig | None = None, cache=None) -> MotivicPoly:
    """Sum of the stratum classes over all m-dimensional partitions of n."""
    results = stratum_results(m, n, cfg, cache)
    if any(r.klass is None for r in results):
        raise StratumNotPolynomial(results)
    total = MotivicPoly.zero()
    for r in results:
        total = total + r.klass
    return total


def random_check_elimination(system: RelationSystem, residual: ResidualSystem, q: int, trials: int, rng) -> int:
    """Sample residual-satisfying points, back-substitute, count original-system failures."""
    failures = 0
    active = residual.active_vars()
    sols = list(iter_solutions(residual.residual_relations, active, q)) if active else [()]
    if not sols:
        return 0
    for _ in range(trials):
        vals = {v: rng.randrange(q) for v in residual.free_vars}
        vals.update(dict(zip(active, rng.choice(sols))))
        full = residual.back_substitute(vals, q)
        if not system.solutions_satisfied(full, q):
            failures += 1
    return failures

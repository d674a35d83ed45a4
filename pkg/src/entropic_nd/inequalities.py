"""Named entropic test expressions, monogamy sums and exact validity certificates.

An expression is a signed sum of conditional entropies ``H(X|Y)``, read as the
claim ``expr <= 0``. Expanding ``H(X|Y) = H(XY) - H(Y)`` gives an integer
linear functional on subset coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .polyhedra import lp
from .polyhedra.cone import LinearInequality, elemental_terms
from .scenario import EntropyVector, IndexMismatch, Scenario, SubsetIndex

NCHV = "NCHV"
LHV = "LHV"
SHANNON = "Shannon"


class NotValid(ValueError):
    """The expression is not bounded by zero on the projected Shannon cone."""

    def __init__(self, message: str, witness: EntropyVector, value: Fraction):
        super().__init__(message)
        self.witness = witness
        self.value = value


class InconsistentIdentification(ValueError):
    pass


@dataclass(frozen=True)
class Term:
    """``sign * H(target | given)``; ``given`` may be None for a plain entropy."""

    sign: int
    target: str
    given: str | None = None

    def expand(self) -> dict:
        out = {}
        if self.given is None:
            out[frozenset([self.target])] = self.sign
            return out
        joint = frozenset([self.target, self.given])
        out[joint] = self.sign
        g = frozenset([self.given])
        out[g] = out.get(g, 0) - self.sign
        return out

    def renamed(self, mapping: Mapping[str, str]) -> "Term":
        g = None if self.given is None else mapping.get(self.given, self.given)
        return Term(self.sign, mapping.get(self.target, self.target), g)

    def labels(self) -> frozenset:
        return frozenset([self.target] if self.given is None else [self.target, self.given])

    def to_text(self) -> str:
        if self.given is None:
            return f"H({self.target})"
        return f"H({self.target}|{self.given})"


@dataclass(frozen=True)
class TestExpression:
    """A linear entropic expression with its intended bound ``<= 0``."""

    __test__ = False  # keep pytest from collecting this class

    name: str
    labels: tuple
    terms: tuple
    validity: str = NCHV

    def functional(self) -> dict:
        """Collected integer coefficients on subsets (zeros dropped)."""
        out: dict = {}
        for t in self.terms:
            for s, c in t.expand().items():
                out[s] = out.get(s, 0) + c
        return {s: c for s, c in out.items() if c}

    def contexts(self) -> list[frozenset]:
        seen = []
        for t in self.terms:
            if t.labels() not in seen:
                seen.append(t.labels())
        return seen

    def coefficients(self, index: SubsetIndex) -> tuple:
        vec = [0] * len(index)
        for s, c in self.functional().items():
            if s not in index:
                raise IndexMismatch(f"coordinate {','.join(sorted(s))} not in index")
            vec[index.position(s)] += c
        return tuple(vec)

    def as_inequality(self, index: SubsetIndex) -> LinearInequality:
        """``-expr >= 0`` in the cone text format."""
        return LinearInequality(index, tuple(-c for c in self.coefficients(index)))

    def negated(self) -> "TestExpression":
        return TestExpression(f"-{self.name}", self.labels,
                              tuple(Term(-t.sign, t.target, t.given) for t in self.terms),
                              self.validity)

    def is_zero(self) -> bool:
        return not self.functional()

    def to_text(self) -> str:
        out = ""
        for k, t in enumerate(self.terms):
            if k == 0:
                out = ("-" if t.sign < 0 else "") + t.to_text()
            else:
                out += (" - " if t.sign < 0 else " + ") + t.to_text()
        return (out or "0") + " <= 0"


def evaluate_expression(expr: TestExpression, vector: EntropyVector):
    """Value of ``expr`` on ``vector`` (bits); exact for exact vectors."""
    total = 0
    for s, c in expr.functional().items():
        v = vector.get(s)
        if v is None:
            raise IndexMismatch(f"vector lacks coordinate {','.join(sorted(s))}")
        total += c * v
    return total


def chain(order: Sequence[str], name: str = "chain", validity: str = NCHV) -> TestExpression:
    """``H(X1|Xk) - [H(X1|X2) + H(X2|X3) + ... + H(X_{k-1}|Xk)]``."""
    order = list(order)
    if len(order) < 3 or len(set(order)) != len(order):
        raise ValueError("a chain needs at least three distinct labels")
    terms = [Term(1, order[0], order[-1])]
    terms += [Term(-1, order[i], order[i + 1]) for i in range(len(order) - 1)]
    return TestExpression(name, tuple(order), tuple(terms), validity)


def entropic_cycle(n: int, variant: str = "chain", prefix: str = "A") -> TestExpression:
    """n-cycle test on labels ``A1..An``.

    ``variant="chain"`` is the chain-rule form used by the cycle scenario.
    ``variant="main"`` is the star form ``H(A1|An) - sum_{i=2}^n H(A1|Ai)``,
    whose terms need A1 compatible with every other label.
    """
    if n < 3:
        raise ValueError("entropic_cycle needs n >= 3")
    labels = [f"{prefix}{i}" for i in range(1, n + 1)]
    if variant == "chain":
        return chain(labels, f"cycle{n}", NCHV)
    if variant == "main":
        terms = [Term(1, labels[0], labels[-1])]
        terms += [Term(-1, labels[0], labels[i]) for i in range(1, n)]
        return TestExpression(f"cycle{n}-main", tuple(labels), tuple(terms), NCHV)
    raise ValueError(f"unknown variant {variant!r}")


def entropic_chained_bell(m: int) -> TestExpression:
    """Chained Bell expression over the 2m-cycle ``A0-B0-A1-...-B_{m-1}``."""
    if m < 2:
        raise ValueError("entropic_chained_bell needs m >= 2")
    order = []
    for i in range(m):
        order += [f"A{i}", f"B{i}"]
    e = chain(order, "chsh" if m == 2 else f"chained{m}", LHV)
    labels = tuple(f"A{i}" for i in range(m)) + tuple(f"B{i}" for i in range(m))
    return TestExpression(e.name, labels, e.terms, LHV)


def monogamy_sum(exprs: Sequence[TestExpression],
                 identifications: Sequence[Mapping[str, str] | None] | None = None,
                 name: str | None = None) -> TestExpression:
    """Sum of expressions after renaming each one's labels into a union.

    ``identifications[k]`` maps labels of ``exprs[k]`` to union labels
    (missing labels keep their name). Each map must be injective.
    """
    if identifications is None:
        identifications = [None] * len(exprs)
    if len(identifications) != len(exprs):
        raise InconsistentIdentification("one identification map per expression")
    labels, terms = [], []
    for e, ident in zip(exprs, identifications):
        ident = dict(ident or {})
        unknown = set(ident) - set(e.labels)
        if unknown:
            raise InconsistentIdentification(f"map renames unknown labels {sorted(unknown)}")
        image = [ident.get(x, x) for x in e.labels]
        if len(set(image)) != len(image):
            raise InconsistentIdentification(f"identification for {e.name} is not injective")
        for x in image:
            if x not in labels:
                labels.append(x)
        terms += [t.renamed(ident) for t in e.terms]
    validity = exprs[0].validity if len({e.validity for e in exprs}) == 1 else NCHV
    return TestExpression(name or "+".join(e.name for e in exprs), tuple(labels),
                          tuple(terms), validity)


def recollect(functional: Mapping, skeleton: Sequence[Term]) -> tuple | None:
    """Rebuild conditional terms from collected coefficients.

    ``skeleton`` fixes which label pairs carry a term and with what sign; the
    conditioning side of each pair is searched (the skeleton's own choice is
    tried first). Returns the first term tuple whose expansion equals
    ``functional``, or None.
    """
    target = {frozenset(s): c for s, c in functional.items() if c}
    options = []
    for t in skeleton:
        if t.given is None:
            options.append([t])
        else:
            options.append([t, Term(t.sign, t.given, t.target)])
    for choice in product(*options):
        got: dict = {}
        for t in choice:
            for s, c in t.expand().items():
                got[s] = got.get(s, 0) + c
        if {s: c for s, c in got.items() if c} == target:
            return tuple(choice)
    return None


# -- validity certificates ------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    """``-expr = sum_k multiplier_k * elemental_k`` on the full Shannon index."""

    expression: TestExpression
    index: SubsetIndex
    multipliers: tuple        # (Fraction, {subset: coeff}) pairs, multiplier > 0

    def check(self) -> bool:
        """Recheck the identity by exact summation (no LP involved)."""
        total: dict = {}
        for lam, terms in self.multipliers:
            if lam <= 0:
                return False
            for s, c in terms.items():
                total[s] = total.get(s, 0) + lam * c
        want = {s: -c for s, c in self.expression.functional().items()}
        keys = set(total) | set(want)
        return all(total.get(s, 0) == want.get(s, 0) for s in keys)

    def to_text(self) -> str:
        lines = []
        for lam, terms in self.multipliers:
            q = LinearInequality.from_terms(self.index, terms)
            lines.append(f"{lam} * [{q.to_text()}]")
        return "\n".join(lines)


def _check_scenario(expr: TestExpression, scenario: Scenario) -> None:
    obs = scenario.observed_index
    for s in expr.functional():
        if s not in obs:
            raise IndexMismatch(
                f"{expr.name}: coordinate {','.join(sorted(s))} is not observed in the scenario")


def verify_nchv_bound(expr: TestExpression, scenario: Scenario) -> Certificate:
    """Prove ``expr <= 0`` on the Shannon cone over the scenario's labels.

    Solves ``sum_k lam_k e_k = -expr`` with ``lam >= 0`` over the elemental
    inequalities ``e_k`` by exact simplex. Since the projection of the Shannon
    cone is exactly what the elementals imply on observed coordinates, this is
    equivalent to validity on the projected cone. Raises :class:`NotValid`
    with a normalized Shannon vector maximizing ``expr`` otherwise.
    """
    _check_scenario(expr, scenario)
    labels = list(scenario.labels)
    full = SubsetIndex.full(labels)
    elems = elemental_terms(labels)
    target = [0] * len(full)
    for s, c in expr.functional().items():
        target[full.position(s)] = -c
    A_eq = [[0] * len(elems) for _ in range(len(full))]
    for k, t in enumerate(elems):
        for s, c in t.items():
            A_eq[full.position(s)][k] += c
    # minimise total weight for a sparse proof
    res = lp.solve([-1] * len(elems), A_eq=A_eq, b_eq=target)
    if res.success:
        mult = tuple((lam, elems[k]) for k, lam in enumerate(res.x) if lam != 0)
        cert = Certificate(expr, full, mult)
        assert cert.check()
        return cert
    witness, value = _max_on_section(expr, full, elems)
    raise NotValid(f"{expr.name} exceeds 0 on the Shannon cone", witness, value)


def _max_on_section(expr, full, elems):
    """Maximise expr over {h : E h >= 0, sum h = 1} exactly."""
    c = [0] * len(full)
    for s, v in expr.functional().items():
        c[full.position(s)] = v
    A_ub = []
    for t in elems:
        row = [0] * len(full)
        for s, v in t.items():
            row[full.position(s)] -= v
        A_ub.append(row)
    res = lp.solve(c, A_ub, [0] * len(A_ub), A_eq=[[1] * len(full)], b_eq=[1])
    if not res.success:
        raise RuntimeError(f"witness LP ended with status {res.status}")
    return EntropyVector(full, tuple(res.x)), res.value


def catalog(name: str) -> TestExpression:
    """Look up an expression by CLI name: cycleN, kcbs, chsh, chainedM."""
    key = name.lower()
    if key == "kcbs":
        return entropic_cycle(5)
    if key == "chsh":
        return entropic_chained_bell(2)
    if key.startswith("cycle") and key[5:].isdigit():
        return entropic_cycle(int(key[5:]))
    if key.startswith("chained") and key[7:].isdigit():
        return entropic_chained_bell(int(key[7:]))
    raise KeyError(f"unknown expression {name!r}")


def scenario_for(expr: TestExpression) -> Scenario:
    """Scenario whose contexts are exactly the label pairs used by ``expr``."""
    from .scenario import new_scenario

    pairs = [tuple(sorted(c)) for c in expr.contexts() if len(c) == 2]
    singles = [c for c in expr.contexts() if len(c) == 1 and not any(c <= set(p) for p in pairs)]
    return new_scenario(expr.labels, pairs, pairs + [tuple(c) for c in singles])


def iter_terms(exprs: Iterable[TestExpression]) -> list[Term]:
    return [t for e in exprs for t in e.terms]

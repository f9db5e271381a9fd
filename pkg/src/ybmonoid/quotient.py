"""The truncated quotient M/mu, its semi-truss structure and the induced solution."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .congruence import CheckResult, Congruence, _verdict
from .errors import (
    DegreeOutOfRange,
    MultipleWitnesses,
    NoWitness,
    WellDefinednessFailure,
)
from .monoid import ClassId, GradedMonoid, apply_perm
from .solution import Solution, check_ybe, validate_solution

QClass = tuple[int, int]  # (degree, quotient index)


@dataclass
class QuotientMonoid:
    congruence: Congruence = field(repr=False)
    max_degree: int
    # index[d][i] = quotient index of monoid class (d, i); root[d][k] = least class in block k
    index: list[np.ndarray] = field(repr=False)
    root: list[list[int]] = field(repr=False)
    plus_table: dict = field(repr=False)
    circ_table: dict = field(repr=False)
    lambda_table: dict = field(repr=False)
    normality: dict = field(repr=False)
    inconclusive: bool = False

    @property
    def monoid(self) -> GradedMonoid:
        return self.congruence.monoid

    def classes(self, d: int) -> list[QClass]:
        return [(d, k) for k in range(len(self.root[d]))]

    def all_classes(self, upto: int | None = None) -> list[QClass]:
        upto = self.max_degree if upto is None else upto
        return [c for d in range(upto + 1) for c in self.classes(d)]

    def of(self, c: ClassId) -> QClass:
        d, i = c
        return d, int(self.index[d][i])

    def of_word(self, letters) -> QClass:
        return self.of(self.monoid.class_of(tuple(letters)))

    def rep(self, q: QClass) -> tuple[int, ...]:
        d, k = q
        return self.monoid.rep((d, self.root[d][k]))

    def members(self, q: QClass) -> list[ClassId]:
        d, k = q
        return [(d, i) for i in np.flatnonzero(self.index[d] == k).tolist()]

    def _bound(self, d: int):
        if d > self.max_degree:
            raise DegreeOutOfRange(f"degree {d} exceeds quotient bound {self.max_degree}")

    def plus(self, a: QClass, b: QClass) -> QClass:
        self._bound(a[0] + b[0])
        return self.plus_table[a, b]

    def circ(self, a: QClass, b: QClass) -> QClass:
        self._bound(a[0] + b[0])
        return self.circ_table[a, b]


def _plus_cls(g: GradedMonoid, a: ClassId, b: ClassId) -> ClassId:
    return g.class_of(g.rep(a) + g.rep(b))


def _circ_cls(g: GradedMonoid, a: ClassId, b: ClassId) -> ClassId:
    return g.class_of(g.rep(a) + apply_perm(g.lambda_of(a), 1, g.rep(b)))


def _lambda_cls(g: GradedMonoid, a: ClassId, b: ClassId, eps: int) -> ClassId:
    return g.class_of(apply_perm(g.lambda_of(a), eps, g.rep(b)))


def build_quotient(c: Congruence) -> QuotientMonoid:
    """Tabulate +, o and lambda-bar on the quotient classes of degree <= D.

    Every table entry is recomputed from every pair of representatives; a
    mismatch raises :class:`WellDefinednessFailure` carrying the witness.
    """
    g, D = c.monoid, c.report_degree
    index, root = [], []
    for d in range(D + 1):
        blocks = c.blocks[d]
        roots = sorted(set(blocks.tolist()))
        pos = {r: k for k, r in enumerate(roots)}
        index.append(np.array([pos[int(b)] for b in blocks], dtype=np.int64))
        root.append(roots)
    q = QuotientMonoid(c, D, index, root, {}, {}, {}, {}, inconclusive=not c.stabilized)

    tables = (
        ("plus", q.plus_table, lambda a, b: _plus_cls(g, a, b)),
        ("circ", q.circ_table, lambda a, b: _circ_cls(g, a, b)),
        ("lambda+", None, lambda a, b: _lambda_cls(g, a, b, 1)),
        ("lambda-", None, lambda a, b: _lambda_cls(g, a, b, -1)),
    )
    for qa in q.all_classes():
        for qb in q.all_classes(D - qa[0]):
            ma, mb = q.members(qa), q.members(qb)
            for name, table, op in tables:
                images = {q.of(op(a, b)): (a, b) for a in ma for b in mb}
                if len(images) != 1:
                    (u, (a1, b1)), (v, (a2, b2)) = list(images.items())[:2]
                    raise WellDefinednessFailure(
                        f"{name} depends on representatives",
                        {"op": name, "left": [list(a1), list(b1)], "right": [list(a2), list(b2)],
                         "images": [list(u), list(v)]},
                    )
                (img,) = images
                if table is not None:
                    table[qa, qb] = img
                else:
                    q.lambda_table[qa, qb, 1 if name == "lambda+" else -1] = img
    for qa in q.all_classes():
        for qb in q.all_classes(D - qa[0]):
            try:
                q.normality[qb, qa] = c_witness(q, qb, qa)
            except (NoWitness, MultipleWitnesses):
                pass
    return q


def bar_lambda(q: QuotientMonoid, a: QClass, b: QClass, eps: int = 1) -> QClass:
    """lambda-bar_a(b) (eps=+1) or its inverse (eps=-1) on quotient classes."""
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    q._bound(a[0] + b[0])
    return q.lambda_table[a, b, eps]


def c_witness(q: QuotientMonoid, a: QClass, b: QClass) -> QClass:
    """The unique class c with a + b = b + c, found by scanning deg(a) classes."""
    q._bound(a[0] + b[0])
    target = q.plus(a, b)
    found = [c for c in q.classes(a[0]) if q.plus(b, c) == target]
    if not found:
        raise NoWitness(f"no c with {a}+{b} = {b}+c", [])
    if len(found) > 1:
        raise MultipleWitnesses(f"several c with {a}+{b} = {b}+c", found)
    return found[0]


def bar_r(q: QuotientMonoid, a: QClass, b: QClass) -> tuple[QClass, QClass]:
    w = bar_lambda(q, a, b, 1)
    return w, bar_lambda(q, w, c_witness(q, a, w), -1)


def verify_semitruss(q: QuotientMonoid, max_total_degree: int) -> list[CheckResult]:
    """Associativity of + and o, the left semi-truss law
    a o (b + c) = (a o b) + lambda-bar_a(c), and normality M + a in a + M."""
    if max_total_degree > q.max_degree:
        raise DegreeOutOfRange(f"total degree {max_total_degree} exceeds bound {q.max_degree}")
    stab = not q.inconclusive
    results = []
    assoc = {"+": None, "o": None}
    law = None
    for a in q.all_classes(max_total_degree):
        for b in q.all_classes(max_total_degree - a[0]):
            for c in q.all_classes(max_total_degree - a[0] - b[0]):
                for op, f in (("+", q.plus), ("o", q.circ)):
                    if assoc[op] is None and f(f(a, b), c) != f(a, f(b, c)):
                        assoc[op] = {"triple": [list(a), list(b), list(c)]}
                lhs = q.circ(a, q.plus(b, c))
                rhs = q.plus(q.circ(a, b), bar_lambda(q, a, c, 1))
                if law is None and lhs != rhs:
                    law = {"triple": [list(a), list(b), list(c)], "lhs": list(lhs), "rhs": list(rhs)}
    results.append(_verdict("quotient: (M,+) associative", assoc["+"], stab))
    results.append(_verdict("quotient: (M,o) associative", assoc["o"], stab))
    results.append(_verdict("quotient: left semi-truss law", law, stab))
    normal = None
    for a in q.all_classes(max_total_degree):
        for b in q.all_classes(max_total_degree - a[0]):
            target = q.plus(b, a)
            if not any(q.plus(a, c) == target for c in q.classes(b[0])):
                normal = {"a": list(a), "b": list(b)}
                break
        if normal:
            break
    results.append(_verdict("quotient: M+a contained in a+M", normal, stab))
    return results


@dataclass
class InducedSolutionResult:
    generator_solution: Solution
    letter_map: list[int]
    ybe_ok: bool
    left_nondegenerate: bool
    equals_original: bool

    def to_dict(self) -> dict:
        return {
            "solution": self.generator_solution.to_dict(),
            "letter_map": self.letter_map,
            "ybe_ok": self.ybe_ok,
            "left_nondegenerate": self.left_nondegenerate,
            "equals_original": self.equals_original,
        }


def induced_generator_solution(q: QuotientMonoid, s: Solution | None = None) -> InducedSolutionResult:
    """r-bar restricted to the degree-1 classes, re-encoded as a Solution.

    Degree-1 classes are numbered by least representative letter;
    ``letter_map[x]`` is the number of the class of letter ``x``.
    """
    s = s or q.congruence.solution
    if q.max_degree < 2:
        raise DegreeOutOfRange("the induced solution needs degree 2")
    xs = q.classes(1)
    m = len(xs)
    sigma = [[0] * m for _ in range(m)]
    gamma = [[0] * m for _ in range(m)]
    for (_, i), (_, j) in itertools.product(xs, repeat=2):
        (_, u), (_, v) = bar_r(q, (1, i), (1, j))
        sigma[i][j] = u
        gamma[j][i] = v
    sol = validate_solution(m, sigma, gamma)
    ybe_ok = check_ybe(sol)[0]
    letter_map = [q.of_word((x,))[1] for x in range(s.n)]
    equals = m == s.n and sol.sigma == s.sigma and sol.gamma == s.gamma
    return InducedSolutionResult(sol, letter_map, ybe_ok, sol.is_left_nondegenerate, equals)


def verify_bar_r_ybe(q: QuotientMonoid, max_degree: int) -> list[CheckResult]:
    """Braid relation for r-bar on class triples of degree <= max_degree, and
    injectivity of b -> lambda-bar_a(b) per degree (left non-degeneracy)."""
    if 2 * max_degree > q.max_degree:
        raise DegreeOutOfRange(f"pairs of degree {max_degree} exceed bound {q.max_degree}")
    stab = not q.inconclusive
    cls = [c for c in q.all_classes(max_degree) if c[0] >= 1]

    def r12(t):
        u, v = bar_r(q, t[0], t[1])
        return u, v, t[2]

    def r23(t):
        u, v = bar_r(q, t[1], t[2])
        return t[0], u, v

    braid = None
    for t in itertools.product(cls, repeat=3):
        if r12(r23(r12(t))) != r23(r12(r23(t))):
            braid = {"triple": [list(c) for c in t]}
            break
    inj = None
    for a in q.all_classes(max_degree):
        for d in range(max_degree + 1):
            images = [bar_lambda(q, a, b, 1) for b in q.classes(d)]
            if len(set(images)) != len(images):
                inj = {"a": list(a), "degree": d}
                break
        if inj:
            break
    return [
        _verdict("quotient: r-bar braid relation", braid, stab),
        _verdict("quotient: r-bar left non-degenerate", inj, stab),
    ]

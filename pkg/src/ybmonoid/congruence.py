"""Left cancellative congruences eta, nu and mu on a truncated structure monoid.

Each congruence is computed as the least relation, on all classes of degree
``<= D + slack``, that contains the seed pairs and is closed under the rules
of its kind:

* ``eta``: seeds ``c+a = c+b``; closed under ``x + -``, ``- + x`` and left
  cancellation by ``x +``.
* ``nu``: the same with ``o`` in place of ``+``.
* ``mu``: seeds as for ``eta``; closed under ``x + -``, ``- + x``, left
  cancellation by ``x +``, ``- o x`` and the letterwise action of every
  ``lambda'_z``.

Single generators suffice for translations and cancellations because every
element is a sum (or product) of generators and the fixpoint iterates.  The
``lambda'_z`` rule is exact: ``z -> lambda'_z`` takes values in the finite group
generated by the ``sigma_x``, which contains all inverses, so both signs of
the exponent are covered.  Everything above degree ``D`` is witness space and
the result is reported on degrees ``<= D`` only.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetMismatch, ViewMismatch
from .monoid import (
    ADDITIVE,
    DEFAULT_WORD_BUDGET,
    MULTIPLICATIVE,
    ClassId,
    GradedMonoid,
    apply_perm,
)
from .solution import Solution, profile

ETA, NU, MU = "eta", "nu", "mu"
KINDS = (ETA, NU, MU)

PASS, FAIL, INCONCLUSIVE, SKIPPED = "pass", "fail", "inconclusive", "skipped"


@dataclass
class CheckResult:
    name: str
    status: str
    witness: object = None
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.status in (PASS, SKIPPED)

    def to_dict(self) -> dict:
        out = {"name": self.name, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.note:
            out["note"] = self.note
        return out


def _verdict(name, witness, stabilized, note="") -> CheckResult:
    if witness is None:
        return CheckResult(name, PASS, note=note)
    if not stabilized:
        note = (note + "; " if note else "") + "truncation inconclusive: congruence not stabilized"
        return CheckResult(name, INCONCLUSIVE, witness, note)
    return CheckResult(name, FAIL, witness, note)


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, i: int) -> int:
        parent = self.parent
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    def union(self, i: int, j: int) -> bool:
        a, b = self.find(i), self.find(j)
        if a == b:
            return False
        # smaller index becomes the root so roots are block minima
        if a < b:
            self.parent[b] = a
        else:
            self.parent[a] = b
        return True


@dataclass
class Congruence:
    """Per-degree partition of the additive classes of degree ``<= report_degree``.

    ``blocks[d][i]`` is the least class index related to class ``(d, i)``.
    """

    kind: str
    monoid: GradedMonoid = field(repr=False)
    report_degree: int
    slack: int
    blocks: list[np.ndarray] = field(repr=False)
    stabilized: bool
    rule_counts: dict = field(default_factory=dict)
    merges: list = field(default_factory=list, repr=False)

    @property
    def solution(self) -> Solution:
        return self.monoid.solution

    def related(self, a: ClassId, b: ClassId) -> bool:
        return a[0] == b[0] and self.blocks[a[0]][a[1]] == self.blocks[b[0]][b[1]]

    def block_of(self, c: ClassId) -> int:
        return int(self.blocks[c[0]][c[1]])

    def block_lists(self, d: int) -> list[list[int]]:
        groups = defaultdict(list)
        for i, b in enumerate(self.blocks[d].tolist()):
            groups[b].append(i)
        return [groups[b] for b in sorted(groups)]

    def block_counts(self) -> list[int]:
        return [len(set(b.tolist())) for b in self.blocks]

    def pairs(self, d: int):
        """All related pairs (i, j), i < j, of degree d."""
        for members in self.block_lists(d):
            yield from itertools.combinations(members, 2)

    def is_equality(self) -> bool:
        return all(np.array_equal(b, np.arange(len(b))) for b in self.blocks)

    def word_partition(self, d: int) -> list[list[tuple[int, ...]]]:
        """The partition of raw additive words of length d."""
        t = self.monoid.additive
        out = []
        for members in self.block_lists(d):
            ws = []
            for i in members:
                ws.extend(t.members((d, i)))
            out.append(sorted(ws))
        return sorted(out)

    def derivation(self, a: ClassId, b: ClassId) -> list[dict] | None:
        """Chain of recorded merges connecting ``a`` and ``b`` (None if unrelated)."""
        if not self.related(a, b):
            return None
        if a == b:
            return []
        adj = defaultdict(list)
        for m in self.merges:
            u, v = tuple(m["pair"][0]), tuple(m["pair"][1])
            adj[u].append((v, m))
            adj[v].append((u, m))
        prev = {a: None}
        queue = [a]
        while queue:
            u = queue.pop(0)
            if u == b:
                break
            for v, m in adj[u]:
                if v not in prev:
                    prev[v] = (u, m)
                    queue.append(v)
        chain = []
        u = b
        while prev[u] is not None:
            u, m = prev[u]
            chain.append(m)
        return chain[::-1]


class _Engine:
    def __init__(self, g: GradedMonoid, kind: str, top: int, trace: bool):
        self.g, self.kind, self.top, self.trace = g, kind, top, trace
        self.offset = [0]
        for d in range(top + 1):
            self.offset.append(self.offset[-1] + g.class_count(d))
        self.uf = _UnionFind(self.offset[-1])
        self.counts = defaultdict(int)
        self.merges = []

    def gid(self, d: int, i: int) -> int:
        return self.offset[d] + i

    def cls(self, k: int) -> ClassId:
        d = next(d for d in range(self.top + 1) if k < self.offset[d + 1])
        return d, k - self.offset[d]

    def union(self, d: int, i: int, j: int, rule: str, why) -> bool:
        if self.uf.union(self.gid(d, i), self.gid(d, j)):
            self.counts[rule] += 1
            if self.trace:
                self.merges.append({"pair": [[d, i], [d, j]], "rule": rule, "why": why})
            return True
        return False

    def root(self, d: int, i: int) -> int:
        return self.uf.find(self.gid(d, i)) - self.offset[d]

    # -- seeds -------------------------------------------------------------------

    def seed(self, op: str):
        """Union a, b whenever c op a = c op b for a canonical c."""
        g, n = self.g, self.g.n
        t = g.additive
        for e in range(1, self.top + 1):
            for d in range(self.top - e + 1):
                nd = n**d
                a_codes = t.reps[d]
                for ci, c_code in enumerate(t.reps[e].tolist()):
                    if op == "+":
                        acted = a_codes
                    else:
                        acted = g.word_act[d][int(g.lam[e][ci])][a_codes]
                    images = t.labels[d + e][c_code * nd + acted]
                    first = {}
                    for i, im in enumerate(images.tolist()):
                        if im in first:
                            self.union(d, first[im], i, "seed", {"c": [e, ci]})
                        else:
                            first[im] = i

    # -- closure rules -------------------------------------------------------------

    def compat(self, table, step: int, rule: str, label) -> bool:
        """Close under a class map: i ~ j implies table[d][i] ~ table[d][j]."""
        changed = False
        for d in range(self.top + 1 - step):
            img = table[d]
            for i in range(len(img)):
                r = self.root(d, i)
                if r != i and self.union(d + step, int(img[i]), int(img[r]), rule, {"map": label, "from": [[d, i], [d, r]]}):
                    changed = True
        return changed

    def cancel(self, table, rule: str, label) -> bool:
        """table[d][i] ~ table[d][j] implies i ~ j."""
        changed = False
        for d in range(self.top):
            img = table[d]
            first = {}
            for i in range(len(img)):
                k = self.root(d + 1, int(img[i]))
                if k in first:
                    if self.union(d, first[k], i, rule, {"map": label}):
                        changed = True
                else:
                    first[k] = i
        return changed

    def run(self):
        g, n = self.g, self.g.n
        rules = []
        if self.kind in (ETA, MU):
            self.seed("+")
            for x in range(n):
                rules.append(("compat", g.add_left[x], 1, "add_left", ("x+", x)))
                rules.append(("compat", g.add_right[x], 1, "add_right", ("+x", x)))
            for x in range(n):
                rules.append(("cancel", g.add_left[x], "cancel_add", ("x+", x)))
        if self.kind == MU:
            for x in range(n):
                rules.append(("compat", g.mul_right[x], 1, "mul_right", ("ox", x)))
            for p in range(1, len(g.perms)):
                rules.append(("compat", g.act[p], 0, "lambda_action", ("lambda", list(g.perms[p].images))))
        if self.kind == NU:
            self.seed("o")
            for x in range(n):
                rules.append(("compat", g.mul_left[x], 1, "mul_left", ("xo", x)))
                rules.append(("compat", g.mul_right[x], 1, "mul_right", ("ox", x)))
            for x in range(n):
                rules.append(("cancel", g.mul_left[x], "cancel_mul", ("xo", x)))
        changed = True
        while changed:
            changed = False
            for rule in rules:
                if rule[0] == "compat":
                    changed |= self.compat(rule[1], rule[2], rule[3], rule[4])
                else:
                    changed |= self.cancel(rule[1], rule[2], rule[3])

    def blocks(self, upto: int) -> list[np.ndarray]:
        return [
            np.array([self.root(d, i) for i in range(self.g.class_count(d))], dtype=np.int64)
            for d in range(upto + 1)
        ]


def _fixpoint(g: GradedMonoid, kind: str, top: int, trace: bool) -> _Engine:
    if kind not in KINDS:
        raise ValueError(f"unknown congruence kind {kind!r}")
    eng = _Engine(g, kind, top, trace)
    eng.run()
    return eng


def _same_partition(a: list[np.ndarray], b: list[np.ndarray]) -> bool:
    return len(a) == len(b) and all(np.array_equal(x, y) for x, y in zip(a, b))


def compute_congruence(
    s: Solution,
    kind: str,
    D: int,
    slack: int,
    *,
    monoid: GradedMonoid | None = None,
    budget: int = DEFAULT_WORD_BUDGET,
    trace: bool = False,
) -> Congruence:
    """Fixpoint of the ``kind`` rule system on degrees ``<= D + slack``, reported on ``<= D``.

    ``stabilized`` is True when the result equals the one obtained with
    ``slack - 1`` (always False for ``slack == 0``).  A prebuilt ``monoid``
    covering degree ``D + slack`` may be passed to avoid rebuilding tables.
    """
    if D < 0 or slack < 0:
        raise ValueError("D and slack must be non-negative")
    top = D + slack
    if monoid is None or monoid.max_degree < top:
        monoid = GradedMonoid(s, top, budget)
    eng = _fixpoint(monoid, kind, top, trace)
    blocks = eng.blocks(D)
    stabilized = False
    if slack > 0:
        stabilized = _same_partition(blocks, _fixpoint(monoid, kind, top - 1, False).blocks(D))
    return Congruence(
        kind=kind,
        monoid=monoid,
        report_degree=D,
        slack=slack,
        blocks=blocks,
        stabilized=stabilized,
        rule_counts=dict(sorted(eng.counts.items())),
        merges=eng.merges,
    )


# -- property checks -------------------------------------------------------------


def _first_split(c: Congruence, d: int, images) -> object:
    """For each block of degree d, the images of its members must share a block.

    ``images(i)`` returns a list of classes (one per context); returns a
    witness dict for the first violation, else None.
    """
    for members in c.block_lists(d):
        if len(members) < 2:
            continue
        base = images(members[0])
        for j in members[1:]:
            other = images(j)
            for k, (u, v) in enumerate(zip(base, other)):
                if not c.related(u, v):
                    return {"degree": d, "pair": [members[0], j], "context": k, "images": [list(u), list(v)]}
    return None


def _word(g: GradedMonoid, c: ClassId):
    return g.rep(c)


def _word_lambda(g: GradedMonoid, w):
    d = len(w)
    code = 0
    for a in w:
        code = code * g.n + a
    return g.perms[int(g.word_lam[d][code])]


def _circ_words(g: GradedMonoid, u, v):
    return tuple(u) + apply_perm(_word_lambda(g, u), 1, tuple(v))


def _all_classes(g: GradedMonoid, upto: int) -> list[ClassId]:
    return [(d, i) for d in range(upto + 1) for i in range(g.class_count(d))]


def plus_closure(c: Congruence) -> CheckResult:
    """(a, b) related implies (u + a + v, u + b + v) related, within degree D."""
    g, D = c.monoid, c.report_degree
    for d in range(D + 1):
        ctx = [(u, v) for u in _all_classes(g, D - d) for v in _all_classes(g, D - d - u[0])]

        def images(i, d=d, ctx=ctx):
            a = _word(g, (d, i))
            return [g.class_of(_word(g, u) + a + _word(g, v)) for u, v in ctx]

        w = _first_split(c, d, images)
        if w is not None:
            return _verdict(f"{c.kind}: congruence on (M,+)", w, c.stabilized)
    return _verdict(f"{c.kind}: congruence on (M,+)", None, c.stabilized)


def circ_closure(c: Congruence) -> CheckResult:
    """(a, b) related implies (u o a o v, u o b o v) related, within degree D."""
    g, D = c.monoid, c.report_degree
    for d in range(D + 1):
        ctx = [(u, v) for u in _all_classes(g, D - d) for v in _all_classes(g, D - d - u[0])]

        def images(i, d=d, ctx=ctx):
            a = _word(g, (d, i))
            out = []
            for u, v in ctx:
                ua = _circ_words(g, _word(g, u), a)
                out.append(g.class_of(_circ_words(g, ua, _word(g, v))))
            return out

        w = _first_split(c, d, images)
        if w is not None:
            return _verdict(f"{c.kind}: congruence on (M,o)", w, c.stabilized)
    return _verdict(f"{c.kind}: congruence on (M,o)", None, c.stabilized)


def quotient_left_cancellative(c: Congruence, view: str) -> CheckResult:
    """[u.a] ~ [u.b] implies a ~ b for all u, a, b with deg u + deg a <= D."""
    if view not in (ADDITIVE, MULTIPLICATIVE):
        raise ViewMismatch(f"unknown view {view!r}")
    if (c.kind, view) in ((ETA, MULTIPLICATIVE), (NU, ADDITIVE)):
        raise ViewMismatch(f"{c.kind} is not checked for left cancellativity in the {view} view")
    g, D = c.monoid, c.report_degree
    op = "+" if view == ADDITIVE else "o"
    name = f"{c.kind}: (M,{op})/{c.kind} left cancellative"
    for d in range(D + 1):
        for u in _all_classes(g, D - d):
            uw = _word(g, u)
            seen = {}
            for i in range(g.class_count(d)):
                a = _word(g, (d, i))
                img = g.class_of(uw + a if view == ADDITIVE else _circ_words(g, uw, a))
                key = c.block_of(img)
                if key in seen and not c.related((d, seen[key]), (d, i)):
                    w = {"c": list(u), "a": [d, seen[key]], "b": [d, i]}
                    return _verdict(name, w, c.stabilized)
                seen.setdefault(key, i)
    return _verdict(name, None, c.stabilized)


def lambda_constancy(c: Congruence, s: Solution | None = None) -> CheckResult:
    """lambda'_a = lambda'_b for every related pair."""
    s = s or c.solution
    note = ""
    if c.kind == ETA:
        p = profile(s)
        if not (p.bijective and p.right_nondegenerate):
            note = "no guarantee: solution is not bijective non-degenerate"
    g = c.monoid
    for d in range(c.report_degree + 1):
        for members in c.block_lists(d):
            lams = {int(g.lam[d][i]) for i in members}
            if len(lams) > 1:
                w = {"degree": d, "block": members, "perms": sorted(list(g.perms[k].images) for k in lams)}
                return _verdict(f"{c.kind}: lambda' constant on related pairs", w, c.stabilized, note)
    return _verdict(f"{c.kind}: lambda' constant on related pairs", None, c.stabilized, note)


def inverse_lambda_closure(c: Congruence) -> CheckResult:
    """((lambda'_z)^-1 a, (lambda'_z)^-1 b) related for every related (a, b)."""
    g = c.monoid
    for d in range(c.report_degree + 1):
        w = _first_split(c, d, lambda i, d=d: [g.act_on(p, -1, (d, i)) for p in g.perms])
        if w is not None:
            return _verdict(f"{c.kind}: closed under (lambda'_z)^-1", w, c.stabilized)
    return _verdict(f"{c.kind}: closed under (lambda'_z)^-1", None, c.stabilized)


def lambda_stability(c: Congruence, s: Solution | None = None) -> CheckResult:
    """Invariance of the congruence under lambda'_z and its inverse.

    For eta and nu: ``(lambda'_z)^eps`` maps related pairs to related pairs
    for all z, both signs (as z ranges over a group this is set equality).
    For mu, the two-index form: ``((lambda'_c)^eps(a), (lambda'_d)^eps(b))``
    related for all related (a, b) and related (c, d) with
    ``deg a + deg c <= D``.
    """
    g, D = c.monoid, c.report_degree
    if c.kind != MU:
        name = f"{c.kind}: stable under lambda'_z and its inverse"
        for d in range(D + 1):
            for eps in (1, -1):
                w = _first_split(c, d, lambda i, d=d, eps=eps: [g.act_on(p, eps, (d, i)) for p in g.perms])
                if w is not None:
                    w["eps"] = eps
                    return _verdict(name, w, c.stabilized)
        return _verdict(name, None, c.stabilized)
    name = "mu: two-index lambda-bar compatibility"
    for e in range(D + 1):
        for acting in c.block_lists(e):
            perms = sorted({int(g.lam[e][k]) for k in acting})
            for d in range(D - e + 1):
                for members in c.block_lists(d):
                    for eps in (1, -1):
                        imgs = {
                            (g.act_on(g.perms[p], eps, (d, i)), p, i) for p in perms for i in members
                        }
                        imgs = sorted(imgs)
                        first = imgs[0][0]
                        for cls, p, i in imgs[1:]:
                            if not c.related(first, cls):
                                w = {
                                    "acting_block": [e, acting],
                                    "block": [d, members],
                                    "eps": eps,
                                    "images": [list(first), list(cls)],
                                }
                                return _verdict(name, w, c.stabilized)
    return _verdict(name, None, c.stabilized)


@dataclass
class Comparison:
    per_degree: list[str]
    overall: str
    inconclusive: bool

    def to_dict(self) -> dict:
        return {"per_degree": self.per_degree, "overall": self.overall, "inconclusive": self.inconclusive}


def _refines(a: np.ndarray, b: np.ndarray) -> bool:
    """Every a-block lies inside a b-block."""
    return all(b[i] == b[a[i]] for i in range(len(a)))


def compare_congruences(a: Congruence, b: Congruence) -> Comparison:
    if a.solution != b.solution or a.report_degree != b.report_degree:
        raise BudgetMismatch("congruences differ in solution or report degree")
    verdicts = []
    for x, y in zip(a.blocks, b.blocks):
        ab, ba = _refines(x, y), _refines(y, x)
        if ab and ba:
            verdicts.append("equal")
        elif ab:
            verdicts.append(f"{a.kind}<{b.kind}")
        elif ba:
            verdicts.append(f"{b.kind}<{a.kind}")
        else:
            verdicts.append("incomparable")
    kinds = set(verdicts)
    if kinds == {"equal"}:
        overall = "equal"
    elif kinds <= {"equal", f"{a.kind}<{b.kind}"}:
        overall = f"{a.kind}<{b.kind}"
    elif kinds <= {"equal", f"{b.kind}<{a.kind}"}:
        overall = f"{b.kind}<{a.kind}"
    else:
        overall = "incomparable"
    return Comparison(verdicts, overall, not (a.stabilized and b.stabilized))


@dataclass
class CongruenceReport:
    kind: str
    report_degree: int
    slacks: list[int]
    class_counts: list[int]
    block_counts: dict
    rule_counts: dict
    stable_at: int | None
    checks: list[CheckResult] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "degree": self.report_degree,
            "slacks": self.slacks,
            "class_counts_before": self.class_counts,
            "class_counts_after": {str(k): v for k, v in self.block_counts.items()},
            "rule_counts": {str(k): v for k, v in self.rule_counts.items()},
            "stable_at_slack": self.stable_at,
            "checks": [ch.to_dict() for ch in self.checks],
        }


def stabilization_report(
    s: Solution,
    kind: str,
    D: int,
    slack_values,
    *,
    monoid: GradedMonoid | None = None,
    budget: int = DEFAULT_WORD_BUDGET,
) -> CongruenceReport:
    """Recompute at each slack; ``stable_at`` is the first slack whose result
    equals the one at the next listed slack."""
    slacks = list(slack_values)
    if not slacks or slacks != sorted(slacks):
        raise ValueError("slack values must be a non-empty ascending list")
    top = D + slacks[-1]
    if monoid is None or monoid.max_degree < top:
        monoid = GradedMonoid(s, top, budget)
    results = {}
    counts = {}
    for sl in slacks:
        eng = _fixpoint(monoid, kind, D + sl, False)
        results[sl] = eng.blocks(D)
        counts[sl] = dict(sorted(eng.counts.items()))
    stable_at = None
    for lo, hi in zip(slacks, slacks[1:]):
        if _same_partition(results[lo], results[hi]):
            stable_at = lo
            break
    return CongruenceReport(
        kind=kind,
        report_degree=D,
        slacks=slacks,
        class_counts=[monoid.class_count(d) for d in range(D + 1)],
        block_counts={sl: [len(set(b.tolist())) for b in results[sl]] for sl in slacks},
        rule_counts=counts,
        stable_at=stable_at,
    )
